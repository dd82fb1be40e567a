#pragma once

#include <cmath>
#include <stdexcept>
#include <vector>

#include "aerotel/common.hpp"

namespace aerotel {

/// Square-root raised-cosine pulse sampled at samples_per_symbol, stored in
/// normalized symbol time (T_s = 1) and scaled to exactly unit energy:
/// sum(taps^2)/sps == 1. The tap count is span_symbols*sps + 1, centered.
struct Pulse {
    double rolloff = 0.5;
    int span_symbols = 16;
    int samples_per_symbol = 16;
    std::vector<double> taps;

    std::size_t center_index() const { return (taps.size() - 1) / 2; }
};

namespace detail {

/// Closed-form SRRC in normalized time, with the removable singularities at
/// t = 0 and |t| = 1/(4 rolloff) filled by their limits.
inline double srrc_value(double t, double a) {
    const double tiny = 1e-10;
    if (std::abs(t) < tiny) return 1.0 - a + 4.0 * a / pi;
    if (a > 0.0 && std::abs(std::abs(t) - 1.0 / (4.0 * a)) < tiny) {
        const double q = pi / (4.0 * a);
        return (a / std::sqrt(2.0)) *
               ((1.0 + 2.0 / pi) * std::sin(q) + (1.0 - 2.0 / pi) * std::cos(q));
    }
    const double num = std::sin(pi * t * (1.0 - a)) + 4.0 * a * t * std::cos(pi * t * (1.0 + a));
    const double den = pi * t * (1.0 - 16.0 * a * a * t * t);
    return num / den;
}

}  // namespace detail

inline Pulse srrc_pulse(double rolloff, int span_symbols, int samples_per_symbol) {
    if (rolloff < 0.0 || rolloff > 1.0) throw std::domain_error("srrc_pulse: rolloff outside [0, 1]");
    if (span_symbols < 2) throw std::domain_error("srrc_pulse: span must be at least 2 symbols");
    if (samples_per_symbol < 4) throw std::domain_error("srrc_pulse: need at least 4 samples per symbol");

    Pulse p;
    p.rolloff = rolloff;
    p.span_symbols = span_symbols;
    p.samples_per_symbol = samples_per_symbol;

    const std::size_t n = static_cast<std::size_t>(span_symbols) * samples_per_symbol + 1;
    const double center = static_cast<double>(n - 1) / 2.0;
    p.taps.resize(n);
    double energy = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double t = (static_cast<double>(i) - center) / samples_per_symbol;
        p.taps[i] = detail::srrc_value(t, rolloff);
        energy += p.taps[i] * p.taps[i];
    }
    energy /= samples_per_symbol;
    const double scale = 1.0 / std::sqrt(energy);
    for (double& tap : p.taps) tap *= scale;
    return p;
}

}  // namespace aerotel
