#pragma once

#include <complex>
#include <stdexcept>
#include <string>
#include <vector>

namespace aerotel {

using cplx = std::complex<double>;

inline constexpr double pi = 3.141592653589793238462643383279502884;
inline constexpr double speed_of_light = 299792458.0;       // m/s
inline constexpr double earth_radius = 6371000.0;           // mean radius, m
inline constexpr double vacuum_permittivity = 8.8541878128e-12;  // F/m

inline double deg2rad(double deg) { return deg * pi / 180.0; }
inline double rad2deg(double rad) { return rad * 180.0 / pi; }

/// Runtime numerical failure (indefinite spectrum, solver breakdown, ...).
/// Input-domain violations use std::domain_error instead.
class numerical_error : public std::runtime_error {
public:
    explicit numerical_error(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace aerotel
