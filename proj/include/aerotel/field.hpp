#pragma once

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>
#include <vector>

#include "aerotel/common.hpp"
#include "aerotel/geometry.hpp"
#include "aerotel/reflection.hpp"

namespace aerotel {

/// Complex receive field per frequency bin, resolved in the receiver frame.
/// x' lies along the incoming line of sight and is not captured by the
/// crossed-dipole feed; y' and z' are the two usable branches.
struct FieldResponse {
    std::vector<double> freq_hz;
    std::vector<cplx> e_xp;
    std::vector<cplx> e_yp;
    std::vector<cplx> e_zp;
};

enum class BranchLabel { Y, Z, RHCP, LHCP, EGC };

inline const char* to_string(BranchLabel label) {
    switch (label) {
        case BranchLabel::Y: return "Y";
        case BranchLabel::Z: return "Z";
        case BranchLabel::RHCP: return "RHCP";
        case BranchLabel::LHCP: return "LHCP";
        case BranchLabel::EGC: return "EGC";
    }
    return "?";
}

/// One scalar receive channel C(f) on the same grid as the field it came from.
struct BranchChannel {
    BranchLabel label = BranchLabel::Y;
    std::vector<double> freq_hz;
    std::vector<cplx> c;
};

/// RF analysis grid centered on the carrier, spanning the occupied bandwidth
/// (1+rolloff)*symbol_rate. The spacing is snapped to an exact divisor of the
/// pulse sample rate sps*symbol_rate so that the sampled-spectrum model and
/// the symbol-time sampling are Parseval-consistent.
inline std::vector<double> make_frequency_grid(double carrier_hz, double symbol_rate_hz,
                                               double rolloff, std::size_t points = 1024,
                                               int samples_per_symbol = 16) {
    if (carrier_hz <= 0.0 || symbol_rate_hz <= 0.0)
        throw std::domain_error("make_frequency_grid: carrier and symbol rate must be positive");
    if (rolloff < 0.0 || rolloff > 1.0)
        throw std::domain_error("make_frequency_grid: rolloff outside [0, 1]");
    if (points < 2) throw std::domain_error("make_frequency_grid: need at least 2 points");
    if (samples_per_symbol < 4)
        throw std::domain_error("make_frequency_grid: need at least 4 samples per symbol");

    const double bandwidth = (1.0 + rolloff) * symbol_rate_hz;
    const double fs = samples_per_symbol * symbol_rate_hz;
    // Largest commensurate spacing fs/m whose (points-1) steps still cover the band.
    const auto m = static_cast<long long>(std::floor(fs * static_cast<double>(points - 1) / bandwidth));
    if (m < static_cast<long long>(points))
        throw std::domain_error("make_frequency_grid: grid too dense for the sample rate");
    const double spacing = fs / static_cast<double>(m);

    std::vector<double> grid(points);
    const double half = 0.5 * static_cast<double>(points - 1);
    for (std::size_t k = 0; k < points; ++k)
        grid[k] = carrier_hz + (static_cast<double>(k) - half) * spacing;
    return grid;
}

namespace detail {

/// Transverse radiated field of a short dipole with axis p, toward direction k:
/// direction theta-hat, magnitude sin(angle between p and k).
inline vec3 dipole_field(const vec3& p, const vec3& k) {
    const double pk = dot(p, k);
    return {pk * k[0] - p[0], pk * k[1] - p[1], pk * k[2] - p[2]};
}

}  // namespace detail

/// Two-ray receive field over the grid for a vertical dipole carried at the
/// given attitude. The common line-of-sight delay and 1/l spreading are
/// factored out, so only the relative two-path structure remains:
///   E(f) = a_los + (l_los/l_refl) Gamma(f) exp(-j 2 pi f dtau) a_refl(f).
inline FieldResponse receiver_field(const PathGeometry& geom, const Attitude& att,
                                    const GroundParams& ground,
                                    const std::vector<double>& freq_grid_hz) {
    if (freq_grid_hz.empty()) throw std::domain_error("receiver_field: empty frequency grid");
    for (std::size_t i = 1; i < freq_grid_hz.size(); ++i)
        if (freq_grid_hz[i] <= freq_grid_hz[i - 1])
            throw std::domain_error("receiver_field: frequency grid must be ascending");
    if (freq_grid_hz.front() <= 0.0)
        throw std::domain_error("receiver_field: frequencies must be positive");

    const vec3 dipole = body_to_ground(att) * vec3{0.0, 0.0, 1.0};

    const vec3 k_los = los_direction_ground(geom);
    const vec3 k_dep = refl_departure_ground(geom);

    const vec3 a_los = detail::dipole_field(dipole, k_los);
    const vec3 a_dep = detail::dipole_field(dipole, k_dep);

    // Decompose the incident field at the specular point into horizontal
    // (normal to the plane of incidence, the y axis here) and vertical
    // (in-plane) parts; each reflects with its own Fresnel coefficient.
    const double sg = std::sin(geom.grazing_rad);
    const double cg = std::cos(geom.grazing_rad);
    const vec3 v_inc{-sg, 0.0, -cg};
    const vec3 v_ref{sg, 0.0, -cg};
    const double amp_h = dot(a_dep, vec3{0.0, 1.0, 0.0});
    const double amp_v = dot(a_dep, v_inc);

    const mat3 to_rx = ground_to_receiver(geom.elevation_rad);
    const vec3 xp = {to_rx[0][0], to_rx[0][1], to_rx[0][2]};
    const vec3 yp = {to_rx[1][0], to_rx[1][1], to_rx[1][2]};
    const vec3 zp = {to_rx[2][0], to_rx[2][1], to_rx[2][2]};

    const double spread = geom.refl_length_m > 0.0 ? geom.los_length_m / geom.refl_length_m : 1.0;

    const std::size_t n = freq_grid_hz.size();
    FieldResponse fr;
    fr.freq_hz = freq_grid_hz;
    fr.e_xp.resize(n);
    fr.e_yp.resize(n);
    fr.e_zp.resize(n);

    for (std::size_t i = 0; i < n; ++i) {
        const double f = freq_grid_hz[i];
        const ReflectionCoefficients gam = reflection_coefficient(ground, geom.grazing_rad, f);
        const cplx echo = spread * std::polar(1.0, -2.0 * pi * f * geom.delay_diff_s);
        const cplx wh = echo * gam.horizontal * amp_h;
        const cplx wv = echo * gam.vertical * amp_v;
        // ground-frame complex field: a_los + wh*yhat + wv*v_ref
        const cplx ex = a_los[0] + wv * v_ref[0];
        const cplx ey = a_los[1] + wh;
        const cplx ez = a_los[2] + wv * v_ref[2];
        fr.e_xp[i] = ex * xp[0] + ey * xp[1] + ez * xp[2];
        fr.e_yp[i] = ex * yp[0] + ey * yp[1] + ez * yp[2];
        fr.e_zp[i] = ex * zp[0] + ey * zp[1] + ez * zp[2];
    }
    return fr;
}

inline BranchChannel branch_y(const FieldResponse& fr) {
    return {BranchLabel::Y, fr.freq_hz, fr.e_yp};
}

inline BranchChannel branch_z(const FieldResponse& fr) {
    return {BranchLabel::Z, fr.freq_hz, fr.e_zp};
}

/// 90-degree hybrid outputs: C_R = (C_y' - j C_z')/sqrt(2), C_L = (C_y' + j C_z')/sqrt(2).
/// The pair is unitary in the branch pair, so |C_R|^2 + |C_L|^2 = |C_y'|^2 + |C_z'|^2.
inline BranchChannel synthesize_rhcp(const FieldResponse& fr) {
    const double inv_sqrt2 = 1.0 / std::sqrt(2.0);
    BranchChannel b{BranchLabel::RHCP, fr.freq_hz, {}};
    b.c.resize(fr.freq_hz.size());
    for (std::size_t i = 0; i < b.c.size(); ++i)
        b.c[i] = (fr.e_yp[i] - cplx(0.0, 1.0) * fr.e_zp[i]) * inv_sqrt2;
    return b;
}

inline BranchChannel synthesize_lhcp(const FieldResponse& fr) {
    const double inv_sqrt2 = 1.0 / std::sqrt(2.0);
    BranchChannel b{BranchLabel::LHCP, fr.freq_hz, {}};
    b.c.resize(fr.freq_hz.size());
    for (std::size_t i = 0; i < b.c.size(); ++i)
        b.c[i] = (fr.e_yp[i] + cplx(0.0, 1.0) * fr.e_zp[i]) * inv_sqrt2;
    return b;
}

namespace detail {

/// Complex-linear interpolation of a gridded response at one frequency.
inline cplx interp_at(const std::vector<double>& grid, const std::vector<cplx>& values,
                      double freq_hz) {
    if (freq_hz < grid.front() || freq_hz > grid.back())
        throw std::domain_error("co-phasing frequency outside the analysis grid");
    auto it = std::lower_bound(grid.begin(), grid.end(), freq_hz);
    if (it == grid.begin()) return values.front();
    const std::size_t hi = static_cast<std::size_t>(it - grid.begin());
    const std::size_t lo = hi - 1;
    if (hi == grid.size()) return values.back();
    const double w = (freq_hz - grid[lo]) / (grid[hi] - grid[lo]);
    return values[lo] * (1.0 - w) + values[hi] * w;
}

}  // namespace detail

/// Equal-gain combining of the two dipole branches, co-phased at one
/// frequency (normally band center):
///   C = (e^{-j alpha} C_y' + e^{-j beta} C_z')/sqrt(2),
/// alpha/beta being the branch phases interpolated at cophase_at_hz.
inline BranchChannel equal_gain_combine(const FieldResponse& fr, double cophase_at_hz) {
    if (fr.freq_hz.empty()) throw std::domain_error("equal_gain_combine: empty field");
    const cplx ref_y = detail::interp_at(fr.freq_hz, fr.e_yp, cophase_at_hz);
    const cplx ref_z = detail::interp_at(fr.freq_hz, fr.e_zp, cophase_at_hz);
    const cplx rot_y = std::polar(1.0, -std::arg(ref_y));
    const cplx rot_z = std::polar(1.0, -std::arg(ref_z));
    const double inv_sqrt2 = 1.0 / std::sqrt(2.0);

    BranchChannel b{BranchLabel::EGC, fr.freq_hz, {}};
    b.c.resize(fr.freq_hz.size());
    for (std::size_t i = 0; i < b.c.size(); ++i)
        b.c[i] = (rot_y * fr.e_yp[i] + rot_z * fr.e_zp[i]) * inv_sqrt2;
    return b;
}

}  // namespace aerotel
