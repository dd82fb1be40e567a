#pragma once

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <vector>

#include "aerotel/common.hpp"
#include "aerotel/discretize.hpp"

namespace aerotel {

/// Linear MMSE equalizer settings. noise_ratio is the noise variance per
/// received sample divided by the symbol energy (2 N0 / E_s at our
/// conventions); it regularizes the normal equations.
struct EqualizerConfig {
    int num_taps = 31;
    double noise_ratio = 0.0;
};

struct EqualizerCoeffs {
    std::vector<cplx> taps;
    int decision_delay = 0;
    double achieved_mse = 0.0;  // at the design noise level, unit symbol energy
};

/// Hermitian Toeplitz channel-correlation matrix: entry (m, n) = G_f(m - n),
/// G_f(k) = sum_j f_j conj(f_{j-k}).
inline Eigen::MatrixXcd gf_matrix(const DiscreteChannel& ch, int num_taps) {
    if (num_taps < 1) throw std::domain_error("gf_matrix: need at least one tap");
    if (ch.taps.empty()) throw std::domain_error("gf_matrix: empty channel");
    const std::vector<cplx> g = tap_autocorrelation(ch.taps);
    Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(num_taps, num_taps);
    for (int r = 0; r < num_taps; ++r) {
        for (int c = 0; c < num_taps; ++c) {
            const int k = r - c;
            const std::size_t a = static_cast<std::size_t>(std::abs(k));
            if (a < g.size()) m(r, c) = k >= 0 ? g[a] : std::conj(g[a]);
        }
    }
    return m;
}

/// Cross-correlation vector for decision delay D: entry m holds
/// conj(f_{D-m}), so the block [conj(f_L) ... conj(f_0)] ends at row D.
inline Eigen::VectorXcd xi_vector(const DiscreteChannel& ch, int num_taps, int decision_delay) {
    const int chan_len = static_cast<int>(ch.taps.size());
    if (num_taps < chan_len)
        throw std::domain_error("xi_vector: equalizer shorter than the channel");
    if (decision_delay < 0 || decision_delay > num_taps + chan_len - 2)
        throw std::domain_error("xi_vector: decision delay out of range");
    Eigen::VectorXcd xi = Eigen::VectorXcd::Zero(num_taps);
    for (int m = 0; m < num_taps; ++m) {
        const int idx = decision_delay - m;
        if (idx >= 0 && idx < chan_len) xi(m) = std::conj(ch.taps[static_cast<std::size_t>(idx)]);
    }
    return xi;
}

/// Channel length plus half the equalizer, clamped so the observation window
/// [m+D-N+1, m+D] always contains u_m .. u_{m+L} — the samples carrying the
/// decided symbol. Beyond num_taps-1 the window would slide past the main
/// tap entirely and the Wiener solution collapses toward zero.
inline int default_decision_delay(const DiscreteChannel& ch, int num_taps) {
    const int ideal = static_cast<int>(ch.taps.size()) - 1 + (num_taps - 1) / 2;
    return std::min(ideal, num_taps - 1);
}

/// MMSE tap solution c = (G_f + rho I)^{-1} xi, rho floored at 1e-12 to keep
/// the system positive definite in the noiseless limit.
inline EqualizerCoeffs mmse_coefficients(const DiscreteChannel& ch, const EqualizerConfig& cfg,
                                         int decision_delay) {
    if (cfg.noise_ratio < 0.0) throw std::domain_error("mmse_coefficients: negative noise ratio");
    const double rho = std::max(cfg.noise_ratio, 1e-12);
    Eigen::MatrixXcd a = gf_matrix(ch, cfg.num_taps);
    a.diagonal().array() += rho;
    const Eigen::VectorXcd xi = xi_vector(ch, cfg.num_taps, decision_delay);
    const Eigen::LDLT<Eigen::MatrixXcd> ldlt(a);
    if (ldlt.info() != Eigen::Success)
        throw numerical_error("mmse_coefficients: normal equations not positive definite");
    const Eigen::VectorXcd c = ldlt.solve(xi);

    EqualizerCoeffs out;
    out.taps.assign(c.data(), c.data() + c.size());
    out.decision_delay = decision_delay;
    out.achieved_mse = std::max(0.0, 1.0 - xi.dot(c).real());
    return out;
}

struct EqualizedSequence {
    std::size_t first_symbol = 0;  // index of the first estimated symbol
    std::vector<cplx> values;
};

/// Apply the equalizer: the estimate of symbol m is sum_n c_n u_{m+D-n}.
/// Only fully supported windows are produced, so the output loses the edge
/// transient relative to the input.
inline EqualizedSequence equalize(const std::vector<cplx>& received,
                                  const EqualizerCoeffs& eq) {
    const long n = static_cast<long>(eq.taps.size());
    const long len = static_cast<long>(received.size());
    const long d = eq.decision_delay;
    EqualizedSequence out;
    const long first = std::max(0L, n - 1 - d);
    const long last = len - 1 - d;
    if (last < first) return out;
    out.first_symbol = static_cast<std::size_t>(first);
    out.values.reserve(static_cast<std::size_t>(last - first + 1));
    for (long m = first; m <= last; ++m) {
        cplx acc = 0.0;
        for (long k = 0; k < n; ++k) acc += eq.taps[static_cast<std::size_t>(k)] * received[static_cast<std::size_t>(m + d - k)];
        out.values.push_back(acc);
    }
    return out;
}

}  // namespace aerotel
