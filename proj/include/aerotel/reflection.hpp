#pragma once

#include <cmath>
#include <complex>
#include <stdexcept>

#include "aerotel/common.hpp"

namespace aerotel {

/// How the ground bounce is modeled.
enum class GroundMode {
    fresnel,    ///< Fresnel coefficients from the soil parameters
    none,       ///< reflection suppressed (free space)
    conductor,  ///< perfect conductor: Gamma = -1 for both polarizations
};

struct GroundParams {
    double relative_permittivity = 15.0;
    double conductivity_s_per_m = 0.012;
    GroundMode mode = GroundMode::fresnel;
    double gamma_scale = 1.0;  ///< multiplies Gamma; exposes the reflection linearity
};

struct ReflectionCoefficients {
    cplx vertical;    // in the plane of incidence
    cplx horizontal;  // normal to the plane of incidence
};

/// Fresnel reflection coefficients at grazing angle psi (radians from the
/// surface) and carrier frequency f. The soil is lossy: the complex relative
/// permittivity is eps_r - j sigma/(2 pi f eps0). Both coefficients tend to
/// -1 as psi -> 0.
inline ReflectionCoefficients reflection_coefficient(const GroundParams& ground,
                                                     double grazing_rad, double freq_hz) {
    if (freq_hz <= 0.0) throw std::domain_error("reflection_coefficient: frequency must be positive");
    if (grazing_rad < 0.0 || grazing_rad > pi / 2.0)
        throw std::domain_error("reflection_coefficient: grazing angle outside [0, pi/2]");
    if (ground.relative_permittivity < 1.0)
        throw std::domain_error("reflection_coefficient: relative permittivity below 1");
    if (ground.conductivity_s_per_m < 0.0)
        throw std::domain_error("reflection_coefficient: negative conductivity");

    switch (ground.mode) {
        case GroundMode::none:
            return {cplx(0.0), cplx(0.0)};
        case GroundMode::conductor:
            return {ground.gamma_scale * cplx(-1.0), ground.gamma_scale * cplx(-1.0)};
        case GroundMode::fresnel:
            break;
    }

    const cplx eps(ground.relative_permittivity,
                   -ground.conductivity_s_per_m / (2.0 * pi * freq_hz * vacuum_permittivity));
    const double s = std::sin(grazing_rad);
    const double c = std::cos(grazing_rad);
    const cplx root = std::sqrt(eps - c * c);
    ReflectionCoefficients g;
    g.horizontal = ground.gamma_scale * (s - root) / (s + root);
    g.vertical = ground.gamma_scale * (eps * s - root) / (eps * s + root);
    return g;
}

}  // namespace aerotel
