#pragma once

#include <atomic>
#include <bit>
#include <cstdint>
#include <cstdio>
#include <functional>
#include <optional>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

#include <json.hpp>

#include "aerotel/apsk.hpp"
#include "aerotel/common.hpp"
#include "aerotel/discretize.hpp"
#include "aerotel/equalizer.hpp"
#include "aerotel/field.hpp"
#include "aerotel/geometry.hpp"
#include "aerotel/pulse.hpp"
#include "aerotel/reflection.hpp"
#include "aerotel/rng.hpp"
#include "aerotel/scenario.hpp"

namespace aerotel {

/// Two-ray geometry for a scenario: transmit height is the endpoint altitude
/// difference plus the aircraft height, receive height is the feed height,
/// both over the reflecting plane at the receiver's ground level.
inline PathGeometry scenario_geometry(const ScenarioConfig& cfg) {
    const double d = ground_distance(cfg.transmitter, cfg.receiver);
    const double h_t = (cfg.transmitter.alt_m - cfg.receiver.alt_m) + cfg.aircraft_height_m;
    return two_ray_geometry(h_t, cfg.rx_feed_height_m, d, cfg.attitude);
}

inline FieldResponse scenario_field(const ScenarioConfig& cfg) {
    validate(cfg);
    const std::vector<double> grid = make_frequency_grid(
        cfg.carrier_hz, cfg.symbol_rate_hz, cfg.rolloff, cfg.grid_points,
        cfg.samples_per_symbol);
    return receiver_field(scenario_geometry(cfg), cfg.attitude, cfg.ground, grid);
}

/// One of the five receive branches for a computed field. EGC is co-phased at
/// the grid midpoint (the carrier, for grids built by make_frequency_grid).
inline BranchChannel scenario_branch(const FieldResponse& fr, BranchLabel label) {
    switch (label) {
        case BranchLabel::Y: return branch_y(fr);
        case BranchLabel::Z: return branch_z(fr);
        case BranchLabel::RHCP: return synthesize_rhcp(fr);
        case BranchLabel::LHCP: return synthesize_lhcp(fr);
        case BranchLabel::EGC:
            return equal_gain_combine(fr, 0.5 * (fr.freq_hz.front() + fr.freq_hz.back()));
    }
    throw std::domain_error("scenario_branch: unknown branch label");
}

struct SchemeChannel {
    Scheme scheme;
    DiscreteChannel channel;
};

/// Build the discrete minimum-phase channel for every requested scheme.
///
/// Normalization fixes the noise reference: single-branch schemes (RHCP,
/// LHCP, EGC) are scaled to unit energy, while the maximum-likelihood
/// combiners are scaled by the *average* branch energy, so their combining
/// gain (channel energy 2 instead of 1) survives normalization. Both ML
/// variants see the same total G and therefore produce identical channels.
inline std::vector<SchemeChannel> build_scheme_channels(const ScenarioConfig& cfg) {
    validate(cfg);
    if (cfg.schemes.empty()) throw std::domain_error("config: schemes list is empty");

    const FieldResponse fr = scenario_field(cfg);
    const Pulse pulse =
        srrc_pulse(cfg.rolloff, cfg.pulse_span_symbols, cfg.samples_per_symbol);

    auto fold_of = [&](BranchLabel label) {
        return folded_autocorrelation(
            composite_h(scenario_branch(fr, label), pulse, cfg.symbol_rate_hz));
    };
    std::optional<FoldedAutocorrelation> gy, gz, gr, gl, ge;
    auto get = [&](std::optional<FoldedAutocorrelation>& slot, BranchLabel label)
        -> const FoldedAutocorrelation& {
        if (!slot) slot = fold_of(label);
        return *slot;
    };

    std::vector<SchemeChannel> out;
    out.reserve(cfg.schemes.size());
    for (Scheme s : cfg.schemes) {
        FoldedAutocorrelation g;
        switch (s) {
            case Scheme::ML_VH: {
                const auto& a = get(gy, BranchLabel::Y);
                const auto& b = get(gz, BranchLabel::Z);
                g = scaled(ml_fold(a, b), 2.0 / (a.values[0].real() + b.values[0].real()));
                break;
            }
            case Scheme::ML_RL: {
                const auto& a = get(gr, BranchLabel::RHCP);
                const auto& b = get(gl, BranchLabel::LHCP);
                g = scaled(ml_fold(a, b), 2.0 / (a.values[0].real() + b.values[0].real()));
                break;
            }
            case Scheme::RHCP: {
                const auto& a = get(gr, BranchLabel::RHCP);
                g = scaled(a, 1.0 / a.values[0].real());
                break;
            }
            case Scheme::LHCP: {
                const auto& a = get(gl, BranchLabel::LHCP);
                g = scaled(a, 1.0 / a.values[0].real());
                break;
            }
            case Scheme::EGC: {
                const auto& a = get(ge, BranchLabel::EGC);
                g = scaled(a, 1.0 / a.values[0].real());
                break;
            }
        }
        out.push_back({s, spectral_factorize(g)});
    }
    return out;
}

struct BerPoint {
    Scheme scheme = Scheme::ML_VH;
    double ebn0_db = 0.0;
    std::uint64_t bits = 0;
    std::uint64_t bit_errors = 0;
    double ber = 0.0;
    bool converged = false;
};

namespace detail {

inline unsigned nearest_label(const ApskConstellation& c, cplx value) {
    unsigned best = 0;
    double best_d = std::norm(value - c.points[0]);
    for (unsigned label = 1; label < 16; ++label) {
        const double d = std::norm(value - c.points[label]);
        if (d < best_d) {
            best_d = d;
            best = label;
        }
    }
    return best;
}

/// Simulate one block through one scheme's channel and count bit errors over
/// the agreed window. Labels and noise derive from block_seed alone, so every
/// scheme sees the same data and the same noise realization (paired runs).
inline std::uint64_t simulate_block(const DiscreteChannel& ch, const EqualizerCoeffs& eq,
                                    const ApskConstellation& c, double n0,
                                    std::size_t total_symbols, std::size_t count_begin,
                                    std::size_t count_len, std::uint64_t block_seed) {
    std::mt19937_64 source(derive_seed(block_seed, 0xb175));
    std::vector<unsigned> tx(total_symbols);
    std::vector<cplx> symbols(total_symbols);
    std::uint64_t word = 0;
    int avail = 0;
    for (std::size_t i = 0; i < total_symbols; ++i) {
        if (avail == 0) {
            word = source();
            avail = 16;
        }
        tx[i] = static_cast<unsigned>(word & 15u);
        word >>= 4;
        --avail;
        symbols[i] = c.points[tx[i]];
    }

    const std::vector<cplx> u = fom_output(ch, symbols, n0, derive_seed(block_seed, 0x401e));
    const EqualizedSequence est = equalize(u, eq);

    // MMSE output is biased toward the origin by (1 - mse); remove the bias
    // before slicing (the usual unbiased-MMSE decision), else the shrinkage
    // alone costs a visible fraction of the decision margin.
    const double gain = 1.0 / std::max(1.0 - eq.achieved_mse, 1e-3);

    std::uint64_t errors = 0;
    for (std::size_t m = count_begin; m < count_begin + count_len; ++m) {
        const std::size_t idx = m - est.first_symbol;
        const unsigned hat = nearest_label(c, gain * est.values[idx]);
        errors += static_cast<std::uint64_t>(std::popcount(hat ^ tx[m]));
    }
    return errors;
}

inline void run_jobs(std::size_t count, int workers, const std::function<void(std::size_t)>& job) {
    if (workers <= 1 || count <= 1) {
        for (std::size_t i = 0; i < count; ++i) job(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        for (;;) {
            const std::size_t i = next.fetch_add(1);
            if (i >= count) return;
            job(i);
        }
    };
    std::vector<std::thread> pool;
    const std::size_t n = std::min<std::size_t>(static_cast<std::size_t>(workers), count);
    pool.reserve(n);
    for (std::size_t t = 0; t < n; ++t) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
}

}  // namespace detail

/// Monte-Carlo BER sweep. Blocks are simulated in waves; accumulation and the
/// stop decision walk blocks in index order, so the result is bitwise
/// identical for any worker count. Noise is referenced to a unit-energy
/// channel (N0 = E_s / (4 Eb/N0)) for every scheme, which is what makes the
/// ML schemes' retained energy of 2 show up as combining gain.
inline std::vector<BerPoint> run_ber(const ScenarioConfig& cfg, int workers = 1) {
    validate(cfg);
    if (cfg.schemes.empty()) throw std::domain_error("config: schemes list is empty");
    if (cfg.ebn0_grid_db.empty()) throw std::domain_error("config: ebn0_grid_db is empty");

    const ApskConstellation c = build_16apsk(cfg.constellation_gamma, cfg.constellation_phi_rad);
    const std::vector<SchemeChannel> chans = build_scheme_channels(cfg);
    const std::size_t nschemes = chans.size();
    const int ntaps = cfg.equalizer_taps;

    constexpr std::size_t kDataSymbols = 4096;
    constexpr std::size_t kWaveBlocks = 8;
    constexpr std::uint64_t kBitsPerBlock = 4 * kDataSymbols;

    std::size_t lmax = 0;
    for (const auto& sc : chans) lmax = std::max(lmax, sc.channel.taps.size() - 1);

    std::vector<BerPoint> results;
    results.reserve(nschemes * cfg.ebn0_grid_db.size());

    for (std::size_t pi = 0; pi < cfg.ebn0_grid_db.size(); ++pi) {
        const double ebn0_db = cfg.ebn0_grid_db[pi];
        const double n0 = ebn0_to_n0(ebn0_db, c);
        const double rho = 2.0 * n0 / c.symbol_energy();

        std::vector<EqualizerCoeffs> eqs;
        eqs.reserve(nschemes);
        std::size_t dmax = 0;
        for (const auto& sc : chans) {
            const int d = default_decision_delay(sc.channel, ntaps);
            eqs.push_back(mmse_coefficients(sc.channel, {ntaps, rho}, d));
            dmax = std::max(dmax, static_cast<std::size_t>(d));
        }
        const std::size_t count_begin = static_cast<std::size_t>(ntaps) + lmax;
        const std::size_t total_symbols = count_begin + kDataSymbols + dmax;

        struct Accum {
            std::uint64_t bits = 0;
            std::uint64_t errors = 0;
            bool done = false;
            bool converged = false;
        };
        std::vector<Accum> acc(nschemes);
        std::size_t next_block = 0;

        for (;;) {
            std::vector<std::size_t> live;
            for (std::size_t s = 0; s < nschemes; ++s)
                if (!acc[s].done) live.push_back(s);
            if (live.empty()) break;

            std::vector<std::uint64_t> errs(kWaveBlocks * live.size(), 0);
            detail::run_jobs(errs.size(), workers, [&](std::size_t job) {
                const std::size_t b = next_block + job / live.size();
                const std::size_t ls = job % live.size();
                const std::size_t s = live[ls];
                const std::uint64_t block_seed = derive_seed(cfg.seed, pi, b);
                errs[job] = detail::simulate_block(chans[s].channel, eqs[s], c, n0,
                                                   total_symbols, count_begin, kDataSymbols,
                                                   block_seed);
            });

            // Reduce strictly in block order; a scheme that reaches its stop
            // condition ignores the rest of the wave, so the totals never
            // depend on how the wave was scheduled across workers.
            for (std::size_t j = 0; j < kWaveBlocks; ++j) {
                for (std::size_t ls = 0; ls < live.size(); ++ls) {
                    Accum& a = acc[live[ls]];
                    if (a.done) continue;
                    a.errors += errs[j * live.size() + ls];
                    a.bits += kBitsPerBlock;
                    if (a.errors >= cfg.min_bit_errors) {
                        a.done = true;
                        a.converged = true;
                    } else if (a.bits >= cfg.max_bits) {
                        a.done = true;
                        a.converged = false;
                    }
                }
            }
            next_block += kWaveBlocks;
        }

        for (std::size_t s = 0; s < nschemes; ++s) {
            BerPoint p;
            p.scheme = chans[s].scheme;
            p.ebn0_db = ebn0_db;
            p.bits = acc[s].bits;
            p.bit_errors = acc[s].errors;
            p.ber = static_cast<double>(acc[s].errors) / static_cast<double>(acc[s].bits);
            p.converged = acc[s].converged;
            results.push_back(p);
        }
    }
    return results;
}

// ---------------------------------------------------------------------------
// Text emitters. All numbers print with %.17g so output is lossless and two
// runs compare bytewise.

namespace detail {

inline void append_num(std::string& out, double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    out += buf;
}

}  // namespace detail

inline std::string field_csv(const FieldResponse& fr) {
    std::string out = "freq_hz,exp_re,exp_im,eyp_re,eyp_im,ezp_re,ezp_im\n";
    for (std::size_t i = 0; i < fr.freq_hz.size(); ++i) {
        detail::append_num(out, fr.freq_hz[i]);
        for (const cplx v : {fr.e_xp[i], fr.e_yp[i], fr.e_zp[i]}) {
            out += ',';
            detail::append_num(out, v.real());
            out += ',';
            detail::append_num(out, v.imag());
        }
        out += '\n';
    }
    return out;
}

inline std::string branch_csv(const BranchChannel& b) {
    std::string out = "freq_hz,re,im\n";
    for (std::size_t i = 0; i < b.freq_hz.size(); ++i) {
        detail::append_num(out, b.freq_hz[i]);
        out += ',';
        detail::append_num(out, b.c[i].real());
        out += ',';
        detail::append_num(out, b.c[i].imag());
        out += '\n';
    }
    return out;
}

inline std::string taps_csv(const DiscreteChannel& ch) {
    std::string out = "index,re,im\n";
    for (std::size_t i = 0; i < ch.taps.size(); ++i) {
        char idx[24];
        std::snprintf(idx, sizeof idx, "%zu,", i);
        out += idx;
        detail::append_num(out, ch.taps[i].real());
        out += ',';
        detail::append_num(out, ch.taps[i].imag());
        out += '\n';
    }
    return out;
}

inline std::string ber_csv(const std::vector<BerPoint>& points) {
    std::string out = "scheme,ebn0_db,bits,bit_errors,ber,converged\n";
    for (const auto& p : points) {
        out += to_string(p.scheme);
        out += ',';
        detail::append_num(out, p.ebn0_db);
        char buf[64];
        std::snprintf(buf, sizeof buf, ",%llu,%llu,", static_cast<unsigned long long>(p.bits),
                      static_cast<unsigned long long>(p.bit_errors));
        out += buf;
        detail::append_num(out, p.ber);
        out += p.converged ? ",true\n" : ",false\n";
    }
    return out;
}

inline nlohmann::json ber_json(const ScenarioConfig& cfg, const std::vector<BerPoint>& points) {
    nlohmann::json j;
    j["config"] = to_json(cfg);
    nlohmann::json rows = nlohmann::json::array();
    for (const auto& p : points) {
        rows.push_back({{"scheme", to_string(p.scheme)},
                        {"ebn0_db", p.ebn0_db},
                        {"bits", p.bits},
                        {"bit_errors", p.bit_errors},
                        {"ber", p.ber},
                        {"converged", p.converged}});
    }
    j["results"] = rows;
    return j;
}

}  // namespace aerotel
