#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <vector>

#include "aerotel/common.hpp"

namespace aerotel {

/// 4+12 APSK constellation with unit mean symbol energy. points[] is indexed
/// by the 4-bit label value (MSB first on the wire).
struct ApskConstellation {
    double gamma = 2.46;   // ring ratio r2/r1
    double phi_rad = pi / 12.0;  // outer-ring phase offset
    double r1 = 0.0;
    double r2 = 0.0;
    std::array<cplx, 16> points{};

    double symbol_energy() const {
        double e = 0.0;
        for (const auto& p : points) e += std::norm(p);
        return e / 16.0;
    }
};

/// Bit mapping per ETSI EN 302 307-1 (DVB-S2) 16APSK: labels 0..11 on the
/// outer ring, 12..15 on the inner ring. Tables give the ring angle index:
/// outer angle = phi + k pi/6, inner angle = pi/4 + m pi/2.
inline ApskConstellation build_16apsk(double gamma, double phi_rad) {
    if (gamma <= 1.0) throw std::domain_error("build_16apsk: ring ratio must exceed 1");
    ApskConstellation c;
    c.gamma = gamma;
    c.phi_rad = phi_rad;
    c.r1 = std::sqrt(16.0 / (4.0 + 12.0 * gamma * gamma));
    c.r2 = gamma * c.r1;

    static constexpr std::array<int, 12> outer_k{1, 10, 4, 7, 0, 11, 5, 6, 2, 9, 3, 8};
    static constexpr std::array<int, 4> inner_m{0, 3, 1, 2};
    for (int label = 0; label < 12; ++label)
        c.points[static_cast<std::size_t>(label)] =
            std::polar(c.r2, phi_rad + outer_k[static_cast<std::size_t>(label)] * pi / 6.0);
    for (int label = 0; label < 4; ++label)
        c.points[static_cast<std::size_t>(label + 12)] =
            std::polar(c.r1, pi / 4.0 + inner_m[static_cast<std::size_t>(label)] * pi / 2.0);
    return c;
}

/// Pack bits (MSB first, 4 per symbol) onto constellation points.
inline std::vector<cplx> map_bits(const std::vector<std::uint8_t>& bits,
                                  const ApskConstellation& c) {
    if (bits.size() % 4 != 0)
        throw std::domain_error("map_bits: bit count must be a multiple of 4");
    std::vector<cplx> symbols(bits.size() / 4);
    for (std::size_t s = 0; s < symbols.size(); ++s) {
        unsigned label = 0;
        for (std::size_t b = 0; b < 4; ++b) label = (label << 1) | (bits[4 * s + b] & 1u);
        symbols[s] = c.points[label];
    }
    return symbols;
}

/// Hard nearest-point decision back to bits. Ties resolve to the lowest
/// label, which keeps the decision deterministic.
inline std::vector<std::uint8_t> demap_hard(const std::vector<cplx>& symbols,
                                            const ApskConstellation& c) {
    std::vector<std::uint8_t> bits(symbols.size() * 4);
    for (std::size_t s = 0; s < symbols.size(); ++s) {
        unsigned best = 0;
        double best_d = std::norm(symbols[s] - c.points[0]);
        for (unsigned label = 1; label < 16; ++label) {
            const double d = std::norm(symbols[s] - c.points[label]);
            if (d < best_d) {
                best_d = d;
                best = label;
            }
        }
        for (std::size_t b = 0; b < 4; ++b)
            bits[4 * s + b] = static_cast<std::uint8_t>((best >> (3 - b)) & 1u);
    }
    return bits;
}

/// N0 for a requested Eb/N0 (dB): N0 = channel_energy * E_s / (4 * 10^(x/10)).
/// The received noise convention is 2 N0 variance per complex sample, i.e.
/// N0 per real component.
inline double ebn0_to_n0(double ebn0_db, const ApskConstellation& c, double channel_energy = 1.0) {
    if (channel_energy <= 0.0) throw std::domain_error("ebn0_to_n0: channel energy must be positive");
    const double lin = std::pow(10.0, ebn0_db / 10.0);
    return channel_energy * c.symbol_energy() / (4.0 * lin);
}

}  // namespace aerotel
