#pragma once

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <sstream>
#include <stdexcept>
#include <vector>

#include "aerotel/common.hpp"
#include "aerotel/field.hpp"
#include "aerotel/pulse.hpp"
#include "aerotel/rng.hpp"

namespace aerotel {

/// Composite pulse-through-channel impulse response h(t) = (g * c)(t),
/// sampled at samples_per_symbol per symbol. Amplitudes keep continuous-time
/// scaling, so sum(|h|^2)/sample_rate is the physical energy.
struct SampledResponse {
    double sample_rate_hz = 0.0;
    int samples_per_symbol = 0;
    std::vector<cplx> h;
};

/// Symbol-spaced folded autocorrelation G(k), nonnegative lags only
/// (G(-k) = conj(G(k))). values[0] is real and positive for any nonzero h.
struct FoldedAutocorrelation {
    std::vector<cplx> values;
    double symbol_interval_s = 0.0;
};

/// Minimum-phase whitened-matched-filter (Forney) channel: taps f_0..f_L with
/// f_0 real positive and all zeros inside or on the unit circle.
struct DiscreteChannel {
    std::vector<cplx> taps;
    double energy = 0.0;  // sum |f|^2 == G(0)
};

namespace detail {

inline void require_uniform_ascending(const std::vector<double>& grid) {
    if (grid.size() < 2) throw std::domain_error("composite_h: need at least 2 grid points");
    const double step = (grid.back() - grid.front()) / static_cast<double>(grid.size() - 1);
    if (step <= 0.0) throw std::domain_error("composite_h: grid must be ascending");
    for (std::size_t i = 1; i < grid.size(); ++i) {
        const double d = grid[i] - grid[i - 1];
        if (std::abs(d - step) > 1e-6 * step)
            throw std::domain_error("composite_h: grid must be uniform");
    }
}

}  // namespace detail

/// Inverse-transform C(f)G(f) onto the pulse's sample grid. The branch grid
/// (uniform, centered on the carrier) must cover the pulse's occupied band
/// (1+rolloff)*symbol_rate. The sampled spectrum defines the response; the
/// time window adapts outward until the edges decay, then trailing/leading
/// samples below 1e-6 of the peak are trimmed.
inline SampledResponse composite_h(const BranchChannel& branch, const Pulse& pulse,
                                   double symbol_rate_hz) {
    if (symbol_rate_hz <= 0.0) throw std::domain_error("composite_h: symbol rate must be positive");
    detail::require_uniform_ascending(branch.freq_hz);
    if (branch.c.size() != branch.freq_hz.size())
        throw std::domain_error("composite_h: branch grid/value size mismatch");

    const std::size_t nbins = branch.freq_hz.size();
    const double span = branch.freq_hz.back() - branch.freq_hz.front();
    const double band = (1.0 + pulse.rolloff) * symbol_rate_hz;
    if (span < band * (1.0 - 1e-12))
        throw std::domain_error("composite_h: branch grid narrower than the pulse bandwidth");

    const int sps = pulse.samples_per_symbol;
    const double center = 0.5 * (branch.freq_hz.front() + branch.freq_hz.back());
    const double dnu = span / static_cast<double>(nbins - 1);

    // The truncated pulse's spectrum does not vanish at the occupied-band
    // edge; cutting it there rings 1/t tails through the whole window. The
    // pulse spectrum is known exactly from its taps at any frequency, so the
    // synthesis grid continues past the band edge (branch response held at
    // its edge value) until the leakage is cold, capped so the total span
    // stays within one period of the sampled spectrum.
    const double sample_rate = symbol_rate_hz * static_cast<double>(sps);
    const double room = 0.5 * (sample_rate - span) - dnu;
    const std::size_t kext =
        room > 0.0 ? static_cast<std::size_t>(std::floor(room / dnu)) : 0;
    const std::size_t total = nbins + 2 * kext;

    // Normalized frequencies (cycles per symbol) and per-bin weights
    // A_k = dnu * C_k * G(nu_k) / sqrt(Rs), with G the pulse-tap DTFT.
    std::vector<double> u(total);
    std::vector<cplx> weight(total);
    const double tap_center = static_cast<double>(pulse.center_index());
    for (std::size_t k = 0; k < total; ++k) {
        double f;
        cplx cval;
        if (k < kext) {
            f = branch.freq_hz.front() - static_cast<double>(kext - k) * dnu;
            cval = branch.c.front();
        } else if (k < kext + nbins) {
            f = branch.freq_hz[k - kext];
            cval = branch.c[k - kext];
        } else {
            f = branch.freq_hz.back() + static_cast<double>(k - kext - nbins + 1) * dnu;
            cval = branch.c.back();
        }
        u[k] = (f - center) / symbol_rate_hz;
        cplx acc = 0.0;
        const double w0 = -2.0 * pi * u[k] / sps;
        // Goertzel-free direct sum; pulse lengths are a few hundred taps.
        const cplx step = std::polar(1.0, w0);
        cplx ph = std::polar(1.0, -w0 * tap_center);
        for (double tap : pulse.taps) {
            acc += tap * ph;
            ph *= step;
        }
        acc /= sps;
        weight[k] = (dnu / std::sqrt(symbol_rate_hz)) * cval * acc;
    }

    // Time window in samples, symmetric around the pulse, grown until the
    // edge samples are cold. Capped at one period of the sampled spectrum.
    const double period_samples = symbol_rate_hz * static_cast<double>(sps) / dnu;
    const long cap = static_cast<long>(std::ceil(period_samples));
    long lo = -static_cast<long>(pulse.taps.size() / 2) - 2L * sps;
    long hi = static_cast<long>(pulse.taps.size() / 2) + 2L * sps;

    std::vector<cplx> h;
    auto synthesize = [&](long a, long b) {
        h.assign(static_cast<std::size_t>(b - a + 1), cplx(0.0));
        for (std::size_t k = 0; k < total; ++k) {
            const double w = 2.0 * pi * u[k] / sps;  // phase per sample
            const cplx step = std::polar(1.0, w);
            cplx ph = std::polar(1.0, w * static_cast<double>(a));
            for (auto& sample : h) {
                sample += weight[k] * ph;
                ph *= step;
            }
        }
    };
    synthesize(lo, hi);

    for (int round = 0; round < 64; ++round) {
        double peak = 0.0;
        for (const auto& s : h) peak = std::max(peak, std::abs(s));
        if (peak == 0.0) break;
        // Grow until the edges drop below the trim threshold.
        const double tol = 1e-6 * peak;
        double head = 0.0, tail = 0.0;
        const std::size_t edge = static_cast<std::size_t>(sps);
        for (std::size_t i = 0; i < std::min<std::size_t>(edge, h.size()); ++i) {
            head = std::max(head, std::abs(h[i]));
            tail = std::max(tail, std::abs(h[h.size() - 1 - i]));
        }
        const bool grow_lo = head > tol;
        const bool grow_hi = tail > tol;
        if (!grow_lo && !grow_hi) break;
        if (hi - lo + 1 >= cap) break;
        if (grow_lo) lo -= 4L * sps;
        if (grow_hi) hi += 4L * sps;
        synthesize(lo, hi);
    }

    // Trim to the 1e-6 * peak support.
    double peak = 0.0;
    for (const auto& s : h) peak = std::max(peak, std::abs(s));
    if (peak <= 0.0) throw numerical_error("composite_h: zero response");
    const double trim = 1e-6 * peak;
    std::size_t first = 0, last = h.size() - 1;
    while (first < last && std::abs(h[first]) < trim) ++first;
    while (last > first && std::abs(h[last]) < trim) --last;

    SampledResponse out;
    out.sample_rate_hz = symbol_rate_hz * sps;
    out.samples_per_symbol = sps;
    out.h.assign(h.begin() + static_cast<long>(first), h.begin() + static_cast<long>(last) + 1);
    return out;
}

/// G(k) = integral h(t) conj(h(t - k T_s)) dt, evaluated on the sample grid.
/// Trailing lags below 1e-8 * G(0) are dropped.
inline FoldedAutocorrelation folded_autocorrelation(const SampledResponse& resp) {
    if (resp.h.empty()) throw std::domain_error("folded_autocorrelation: empty response");
    if (resp.samples_per_symbol < 1 || resp.sample_rate_hz <= 0.0)
        throw std::domain_error("folded_autocorrelation: invalid sampling description");

    const std::size_t n = resp.h.size();
    const std::size_t sps = static_cast<std::size_t>(resp.samples_per_symbol);
    const std::size_t kmax = (n - 1) / sps;
    FoldedAutocorrelation g;
    g.symbol_interval_s = static_cast<double>(sps) / resp.sample_rate_hz;
    g.values.resize(kmax + 1);
    for (std::size_t k = 0; k <= kmax; ++k) {
        cplx acc = 0.0;
        for (std::size_t i = k * sps; i < n; ++i) acc += resp.h[i] * std::conj(resp.h[i - k * sps]);
        g.values[k] = acc / resp.sample_rate_hz;
    }
    g.values[0] = cplx(g.values[0].real(), 0.0);
    if (g.values[0].real() <= 0.0) throw numerical_error("folded_autocorrelation: nonpositive energy");

    const double thresh = 1e-8 * g.values[0].real();
    std::size_t keep = g.values.size();
    while (keep > 1 && std::abs(g.values[keep - 1]) < thresh) --keep;
    g.values.resize(keep);
    return g;
}

/// Lag-wise sum of two folds: the matched-filter-bank statistic of maximum
/// likelihood combining has autocorrelation G_a + G_b.
inline FoldedAutocorrelation ml_fold(const FoldedAutocorrelation& a,
                                     const FoldedAutocorrelation& b) {
    if (a.symbol_interval_s > 0.0 && b.symbol_interval_s > 0.0 &&
        std::abs(a.symbol_interval_s - b.symbol_interval_s) > 1e-9 * a.symbol_interval_s)
        throw std::domain_error("ml_fold: mismatched symbol intervals");
    FoldedAutocorrelation out;
    out.symbol_interval_s = a.symbol_interval_s > 0.0 ? a.symbol_interval_s : b.symbol_interval_s;
    out.values.resize(std::max(a.values.size(), b.values.size()), cplx(0.0));
    for (std::size_t i = 0; i < a.values.size(); ++i) out.values[i] += a.values[i];
    for (std::size_t i = 0; i < b.values.size(); ++i) out.values[i] += b.values[i];
    return out;
}

inline FoldedAutocorrelation scaled(const FoldedAutocorrelation& g, double factor) {
    FoldedAutocorrelation out = g;
    for (auto& v : out.values) v *= factor;
    return out;
}

/// Spectral factorization of a Hermitian autocorrelation into its minimum
/// phase factor: S(z) = F(z) F*(1/z*), F(z) = sum f_n z^-n, f_0 > 0 real.
/// Roots of z^K S(z) come in (r, 1/conj(r)) pairs; the inside-the-circle
/// half builds F, unit-circle roots are split evenly between the halves.
inline DiscreteChannel spectral_factorize(const FoldedAutocorrelation& g) {
    if (g.values.empty()) throw std::domain_error("spectral_factorize: empty autocorrelation");
    const double g0 = g.values[0].real();
    if (!(g0 > 0.0) || std::abs(g.values[0].imag()) > 1e-12 * std::abs(g0))
        throw std::domain_error("spectral_factorize: G(0) must be real positive");

    std::size_t kmax = g.values.size() - 1;
    while (kmax > 0 && std::abs(g.values[kmax]) < 1e-15 * g0) --kmax;

    // Positivity of S(e^{jw}) on a dense grid; modest slack for rounding.
    double smin = g0;
    {
        const int grid = 8192;
        for (int i = 0; i < grid; ++i) {
            const double w = 2.0 * pi * i / grid;
            double s = g0;
            for (std::size_t k = 1; k <= kmax; ++k)
                s += 2.0 * (g.values[k] * std::polar(1.0, -w * static_cast<double>(k))).real();
            smin = std::min(smin, s);
        }
        if (smin < -1e-7 * g0) {
            std::ostringstream msg;
            msg << "spectral_factorize: spectrum not nonnegative (min " << smin << ")";
            throw numerical_error(msg.str());
        }
    }

    if (kmax == 0) return {{cplx(std::sqrt(g0))}, g0};

    // Companion-matrix roots of p(z) = sum_j G(kmax - j) z^j  (degree 2 kmax).
    const std::size_t deg = 2 * kmax;
    std::vector<cplx> coeff(deg + 1);
    for (std::size_t j = 0; j <= deg; ++j) {
        const long k = static_cast<long>(kmax) - static_cast<long>(j);
        coeff[j] = k >= 0 ? g.values[static_cast<std::size_t>(k)]
                          : std::conj(g.values[static_cast<std::size_t>(-k)]);
    }
    Eigen::MatrixXcd comp = Eigen::MatrixXcd::Zero(static_cast<long>(deg), static_cast<long>(deg));
    for (std::size_t i = 0; i + 1 < deg; ++i) comp(static_cast<long>(i) + 1, static_cast<long>(i)) = 1.0;
    for (std::size_t i = 0; i < deg; ++i)
        comp(static_cast<long>(i), static_cast<long>(deg) - 1) = -coeff[i] / coeff[deg];
    Eigen::ComplexEigenSolver<Eigen::MatrixXcd> solver(comp, /*computeEigenvectors=*/false);
    if (solver.info() != Eigen::Success)
        throw numerical_error("spectral_factorize: eigenvalue iteration failed");

    const double circle_tol = 1e-7;
    std::vector<cplx> inside;
    std::vector<cplx> on_circle;
    for (long i = 0; i < solver.eigenvalues().size(); ++i) {
        const cplx r = solver.eigenvalues()(i);
        const double mag = std::abs(r);
        if (mag < 1.0 - circle_tol) {
            inside.push_back(r);
        } else if (mag <= 1.0 + circle_tol) {
            on_circle.push_back(r / mag);  // project exactly onto the circle
        }
    }
    if (on_circle.size() % 2 != 0 || inside.size() + on_circle.size() / 2 != kmax) {
        std::ostringstream msg;
        msg << "spectral_factorize: root pairing failed (" << inside.size() << " inside, "
            << on_circle.size() << " on circle, expected " << kmax << " factors)";
        throw numerical_error(msg.str());
    }
    std::sort(on_circle.begin(), on_circle.end(),
              [](const cplx& a, const cplx& b) { return std::arg(a) < std::arg(b); });
    for (std::size_t i = 0; i < on_circle.size(); i += 2) inside.push_back(on_circle[i]);

    // Monic polynomial from the kept roots, then rescale so G(0) matches.
    std::vector<cplx> f{cplx(1.0)};
    for (const cplx& r : inside) {
        f.push_back(cplx(0.0));
        for (std::size_t j = f.size() - 1; j >= 1; --j) f[j] -= r * f[j - 1];
    }
    double raw_energy = 0.0;
    for (const auto& v : f) raw_energy += std::norm(v);
    const double scale = std::sqrt(g0 / raw_energy);
    for (auto& v : f) v *= scale;

    DiscreteChannel ch;
    ch.taps = std::move(f);
    ch.energy = g0;
    return ch;
}

/// Autocorrelation of a tap vector; used for round-trip checks and by the
/// equalizer's G_f construction.
inline std::vector<cplx> tap_autocorrelation(const std::vector<cplx>& taps) {
    std::vector<cplx> g(taps.size());
    for (std::size_t k = 0; k < taps.size(); ++k) {
        cplx acc = 0.0;
        for (std::size_t j = k; j < taps.size(); ++j) acc += taps[j] * std::conj(taps[j - k]);
        g[k] = acc;
    }
    return g;
}

/// Forney-observation-model output: u_k = sum_n f_n I_{k-n} + eta_k with
/// circularly symmetric Gaussian noise of variance 2 N0 per complex sample.
/// Deterministic for a given seed.
inline std::vector<cplx> fom_output(const DiscreteChannel& ch, const std::vector<cplx>& symbols,
                                    double n0, std::uint64_t seed) {
    if (n0 < 0.0) throw std::domain_error("fom_output: negative noise level");
    if (ch.taps.empty()) throw std::domain_error("fom_output: empty channel");

    std::vector<cplx> u(symbols.size(), cplx(0.0));
    const std::size_t taps = ch.taps.size();
    for (std::size_t k = 0; k < symbols.size(); ++k) {
        cplx acc = 0.0;
        const std::size_t nmax = std::min(taps - 1, k);
        for (std::size_t n = 0; n <= nmax; ++n) acc += ch.taps[n] * symbols[k - n];
        u[k] = acc;
    }
    if (n0 > 0.0) {
        GaussianSource noise(seed);
        const double sigma = std::sqrt(n0);  // per real component
        for (auto& sample : u) sample += sigma * noise.standard_pair();
    }
    return u;
}

}  // namespace aerotel
