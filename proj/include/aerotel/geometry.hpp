#pragma once

#include <array>
#include <cmath>
#include <stdexcept>

#include "aerotel/common.hpp"

namespace aerotel {

using vec3 = std::array<double, 3>;
using mat3 = std::array<std::array<double, 3>, 3>;

inline double dot(const vec3& a, const vec3& b) {
    return a[0] * b[0] + a[1] * b[1] + a[2] * b[2];
}

inline double norm(const vec3& a) { return std::sqrt(dot(a, a)); }

inline vec3 operator*(const mat3& m, const vec3& v) {
    return {dot(m[0], v), dot(m[1], v), dot(m[2], v)};
}

inline mat3 operator*(const mat3& a, const mat3& b) {
    mat3 r{};
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j)
            r[i][j] = a[i][0] * b[0][j] + a[i][1] * b[1][j] + a[i][2] * b[2][j];
    return r;
}

/// Transpose; for rotation matrices this is the inverse.
inline mat3 transpose(const mat3& m) {
    return {{{m[0][0], m[1][0], m[2][0]},
             {m[0][1], m[1][1], m[2][1]},
             {m[0][2], m[1][2], m[2][2]}}};
}

struct GeodeticPosition {
    double lat_deg = 0.0;
    double lon_deg = 0.0;
    double alt_m = 0.0;  // above mean sea level
};

/// Aircraft attitude, degrees. Angles are normalized to (-180, 180].
struct Attitude {
    double yaw_deg = 0.0;
    double pitch_deg = 0.0;
    double roll_deg = 0.0;
};

inline double wrap_degrees(double deg) {
    double d = std::fmod(deg, 360.0);
    if (d <= -180.0) d += 360.0;
    if (d > 180.0) d -= 360.0;
    return d;
}

inline Attitude normalized(const Attitude& a) {
    return {wrap_degrees(a.yaw_deg), wrap_degrees(a.pitch_deg), wrap_degrees(a.roll_deg)};
}

/// Great-circle ground distance (haversine, spherical earth).
inline double ground_distance(const GeodeticPosition& a, const GeodeticPosition& b) {
    const double p1 = deg2rad(a.lat_deg);
    const double p2 = deg2rad(b.lat_deg);
    const double dp = deg2rad(b.lat_deg - a.lat_deg);
    const double dl = deg2rad(b.lon_deg - a.lon_deg);
    const double s = std::sin(dp / 2.0);
    const double t = std::sin(dl / 2.0);
    const double h = s * s + std::cos(p1) * std::cos(p2) * t * t;
    return 2.0 * earth_radius * std::atan2(std::sqrt(h), std::sqrt(1.0 - h));
}

/// Antenna elevation angle seen from the receiver, radians.
/// Heights are above the local reflecting plane; d_r is the ground range.
inline double elevation_angle(double h_t, double h_r, double d_r) {
    if (d_r <= 0.0) throw std::domain_error("elevation_angle: ground range must be positive");
    return std::atan((h_t - h_r) / d_r);
}

inline mat3 rot_x(double rad) {
    const double c = std::cos(rad), s = std::sin(rad);
    return {{{1, 0, 0}, {0, c, -s}, {0, s, c}}};
}

inline mat3 rot_y(double rad) {
    const double c = std::cos(rad), s = std::sin(rad);
    return {{{c, 0, s}, {0, 1, 0}, {-s, 0, c}}};
}

inline mat3 rot_z(double rad) {
    const double c = std::cos(rad), s = std::sin(rad);
    return {{{c, -s, 0}, {s, c, 0}, {0, 0, 1}}};
}

/// Body-to-ground rotation: yaw about z, then pitch about x, then roll about y,
/// composed as R = Rz(yaw) * Rx(pitch) * Ry(roll). Angles in degrees.
inline mat3 body_to_ground(const Attitude& att) {
    const Attitude a = normalized(att);
    return rot_z(deg2rad(a.yaw_deg)) * rot_x(deg2rad(a.pitch_deg)) * rot_y(deg2rad(a.roll_deg));
}

/// Flat-earth two-ray geometry.
///
/// Ground frame: x from the transmitter ground point toward the receiver,
/// z up, y completing the right-handed triad. The receiver frame (x',y',z')
/// is the ground frame rotated about y by the elevation angle, so x' points
/// along the incoming line-of-sight ray.
struct PathGeometry {
    double d_r = 0.0;          // ground range, m
    double h_t = 0.0;          // transmit antenna height above the plane, m
    double h_r = 0.0;          // receive antenna height above the plane, m
    double elevation_rad = 0.0;
    double grazing_rad = 0.0;  // reflection grazing angle at the specular point
    double los_length_m = 0.0;
    double refl_length_m = 0.0;
    double delay_diff_s = 0.0;  // (refl - los) / c

    // Unit propagation directions. Departures are expressed in the transmitter
    // body frame, the reflected arrival in the receiver (x',y',z') frame.
    vec3 los_departure_body{};
    vec3 refl_departure_body{};
    vec3 refl_arrival_rx{};
};

/// Ground-frame propagation directions, reconstructible from the angles.
inline vec3 los_direction_ground(const PathGeometry& g) {
    return {std::cos(g.elevation_rad), 0.0, -std::sin(g.elevation_rad)};
}

inline vec3 refl_departure_ground(const PathGeometry& g) {
    return {std::cos(g.grazing_rad), 0.0, -std::sin(g.grazing_rad)};
}

inline vec3 refl_arrival_ground(const PathGeometry& g) {
    return {std::cos(g.grazing_rad), 0.0, std::sin(g.grazing_rad)};
}

/// Receiver-frame basis vectors expressed in the ground frame.
inline mat3 ground_to_receiver(double elevation_rad) {
    // Columns of rot_y(elevation) are the receiver axes; transposing maps
    // ground coordinates into the receiver frame.
    return transpose(rot_y(elevation_rad));
}

/// Specular two-ray geometry via the image method.
/// h_r = 0 degenerates to a reflection point at the receiver (refl == los).
inline PathGeometry two_ray_geometry(double h_t, double h_r, double d_r, const Attitude& att) {
    if (h_t <= 0.0) throw std::domain_error("two_ray_geometry: transmit height must be positive");
    if (h_r < 0.0) throw std::domain_error("two_ray_geometry: receive height must be nonnegative");
    if (d_r <= 0.0) throw std::domain_error("two_ray_geometry: ground range must be positive");

    PathGeometry g;
    g.d_r = d_r;
    g.h_t = h_t;
    g.h_r = h_r;
    g.elevation_rad = elevation_angle(h_t, h_r, d_r);
    g.grazing_rad = std::atan((h_t + h_r) / d_r);
    g.los_length_m = std::hypot(d_r, h_t - h_r);
    g.refl_length_m = std::hypot(d_r, h_t + h_r);
    g.delay_diff_s = (g.refl_length_m - g.los_length_m) / speed_of_light;

    const mat3 ground_to_body = transpose(body_to_ground(att));
    g.los_departure_body = ground_to_body * los_direction_ground(g);
    g.refl_departure_body = ground_to_body * refl_departure_ground(g);
    g.refl_arrival_rx = ground_to_receiver(g.elevation_rad) * refl_arrival_ground(g);
    return g;
}

}  // namespace aerotel
