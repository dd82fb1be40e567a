#pragma once

#include <cstdint>
#include <cmath>
#include <random>

#include "aerotel/common.hpp"

namespace aerotel {

/// splitmix64 step; used to derive independent stream seeds from a master
/// seed and counters, so results never depend on scheduling.
inline std::uint64_t mix_seed(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

inline std::uint64_t derive_seed(std::uint64_t master, std::uint64_t a, std::uint64_t b = 0) {
    return mix_seed(mix_seed(mix_seed(master) ^ a) ^ b);
}

/// Complex-Gaussian source with a fully pinned sample stream: uniforms come
/// straight from mt19937_64 words, normals from Box-Muller. Independent of
/// libstdc++ distribution internals, so a seed defines the bytes forever.
class GaussianSource {
public:
    explicit GaussianSource(std::uint64_t seed) : gen_(seed) {}

    double uniform() {  // (0, 1)
        return (static_cast<double>(gen_() >> 11) + 0.5) * 0x1p-53;
    }

    /// Standard complex Gaussian: real and imaginary parts each N(0, 1).
    cplx standard_pair() {
        const double r = std::sqrt(-2.0 * std::log(uniform()));
        const double a = 2.0 * pi * uniform();
        return {r * std::cos(a), r * std::sin(a)};
    }

    std::uint64_t bits64() { return gen_(); }

private:
    std::mt19937_64 gen_;
};

}  // namespace aerotel
