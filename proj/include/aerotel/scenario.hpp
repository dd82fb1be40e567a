#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "aerotel/common.hpp"
#include "aerotel/geometry.hpp"
#include "aerotel/reflection.hpp"

namespace aerotel {

/// Receive-polarization combining schemes.
enum class Scheme { ML_VH, ML_RL, RHCP, LHCP, EGC };

inline const char* to_string(Scheme s) {
    switch (s) {
        case Scheme::ML_VH: return "ML_VH";
        case Scheme::ML_RL: return "ML_RL";
        case Scheme::RHCP: return "RHCP";
        case Scheme::LHCP: return "LHCP";
        case Scheme::EGC: return "EGC";
    }
    return "?";
}

inline Scheme scheme_from_string(const std::string& name) {
    if (name == "ML_VH") return Scheme::ML_VH;
    if (name == "ML_RL") return Scheme::ML_RL;
    if (name == "RHCP") return Scheme::RHCP;
    if (name == "LHCP") return Scheme::LHCP;
    if (name == "EGC") return Scheme::EGC;
    throw std::domain_error("unknown scheme name: " + name);
}

inline const char* to_string(GroundMode m) {
    switch (m) {
        case GroundMode::fresnel: return "fresnel";
        case GroundMode::none: return "none";
        case GroundMode::conductor: return "conductor";
    }
    return "?";
}

inline GroundMode ground_mode_from_string(const std::string& name) {
    if (name == "fresnel") return GroundMode::fresnel;
    if (name == "none") return GroundMode::none;
    if (name == "conductor") return GroundMode::conductor;
    throw std::domain_error("unknown ground mode: " + name);
}

/// Full simulation scenario. Defaults reproduce the Edwards AFB ground link
/// (Cords Road transmitter to Building 4795 receiver) with the simulated
/// attitude yaw 5, pitch 15, roll 10 degrees.
struct ScenarioConfig {
    GeodeticPosition transmitter{35.0 + 5.0 / 60.0, -(117.0 + 24.0 / 60.0 + 6.73 / 3600.0),
                                 5043.0 * 0.3048};
    GeodeticPosition receiver{34.0 + 58.0 / 60.0 + 14.63 / 3600.0,
                              -(117.0 + 55.0 / 60.0 + 52.02 / 3600.0), 2710.0 * 0.3048};
    double aircraft_height_m = 0.0;   // added to the AMSL difference for h_T
    double rx_feed_height_m = 10.0;   // h_R above the reflecting plane
    Attitude attitude{5.0, 15.0, 10.0};

    double carrier_hz = 1.8e9;
    double symbol_rate_hz = 1.0e7;
    double rolloff = 0.5;
    std::size_t grid_points = 1024;
    int samples_per_symbol = 16;
    int pulse_span_symbols = 16;

    GroundParams ground{};

    double constellation_gamma = 2.46;
    double constellation_phi_rad = pi / 12.0;

    int equalizer_taps = 31;
    std::vector<Scheme> schemes{Scheme::ML_VH, Scheme::ML_RL, Scheme::RHCP, Scheme::LHCP,
                                Scheme::EGC};
    std::vector<double> ebn0_grid_db{0, 2, 4, 6, 8, 9, 10, 11, 12, 13};
    std::uint64_t min_bit_errors = 200;
    std::uint64_t max_bits = 20000000;
    std::uint64_t seed = 1;
};

inline void validate(const ScenarioConfig& cfg) {
    if (cfg.carrier_hz <= 0.0) throw std::domain_error("config: carrier_hz must be positive");
    if (cfg.symbol_rate_hz <= 0.0) throw std::domain_error("config: symbol_rate_hz must be positive");
    if (cfg.rolloff < 0.0 || cfg.rolloff > 1.0) throw std::domain_error("config: rolloff outside [0, 1]");
    if (cfg.grid_points < 2) throw std::domain_error("config: grid_points must be at least 2");
    if (cfg.samples_per_symbol < 4) throw std::domain_error("config: samples_per_symbol must be at least 4");
    if (cfg.pulse_span_symbols < 2) throw std::domain_error("config: pulse_span_symbols must be at least 2");
    if (cfg.rx_feed_height_m < 0.0) throw std::domain_error("config: rx_feed_height_m must be nonnegative");
    if (cfg.equalizer_taps < 1) throw std::domain_error("config: equalizer_taps must be positive");
    if (cfg.constellation_gamma <= 1.0) throw std::domain_error("config: constellation_gamma must exceed 1");
    if (cfg.min_bit_errors == 0) throw std::domain_error("config: min_bit_errors must be positive");
    if (cfg.schemes.empty()) throw std::domain_error("config: schemes list is empty");
    for (std::size_t i = 1; i < cfg.ebn0_grid_db.size(); ++i)
        if (cfg.ebn0_grid_db[i] <= cfg.ebn0_grid_db[i - 1])
            throw std::domain_error("config: ebn0_grid_db must be strictly ascending");
    if (cfg.max_bits == 0) throw std::domain_error("config: max_bits must be positive");
    if (cfg.ground.relative_permittivity < 1.0)
        throw std::domain_error("config: relative_permittivity below 1");
    if (cfg.ground.conductivity_s_per_m < 0.0)
        throw std::domain_error("config: negative conductivity");
}

namespace detail {

inline void require_keys(const nlohmann::json& j, std::initializer_list<const char*> allowed,
                         const std::string& where) {
    for (auto it = j.begin(); it != j.end(); ++it) {
        bool known = false;
        for (const char* k : allowed)
            if (it.key() == k) { known = true; break; }
        if (!known) throw std::domain_error("config: unknown key \"" + it.key() + "\" in " + where);
    }
}

template <typename T>
void maybe(const nlohmann::json& j, const char* key, T& target) {
    if (j.contains(key)) target = j.at(key).get<T>();
}

}  // namespace detail

inline nlohmann::json to_json(const ScenarioConfig& cfg) {
    nlohmann::json j;
    j["transmitter"] = {{"lat_deg", cfg.transmitter.lat_deg},
                        {"lon_deg", cfg.transmitter.lon_deg},
                        {"alt_m", cfg.transmitter.alt_m}};
    j["receiver"] = {{"lat_deg", cfg.receiver.lat_deg},
                     {"lon_deg", cfg.receiver.lon_deg},
                     {"alt_m", cfg.receiver.alt_m}};
    j["aircraft_height_m"] = cfg.aircraft_height_m;
    j["rx_feed_height_m"] = cfg.rx_feed_height_m;
    j["attitude_deg"] = {{"yaw", cfg.attitude.yaw_deg},
                         {"pitch", cfg.attitude.pitch_deg},
                         {"roll", cfg.attitude.roll_deg}};
    j["carrier_hz"] = cfg.carrier_hz;
    j["symbol_rate_hz"] = cfg.symbol_rate_hz;
    j["rolloff"] = cfg.rolloff;
    j["grid_points"] = cfg.grid_points;
    j["samples_per_symbol"] = cfg.samples_per_symbol;
    j["pulse_span_symbols"] = cfg.pulse_span_symbols;
    j["ground"] = {{"relative_permittivity", cfg.ground.relative_permittivity},
                   {"conductivity_s_per_m", cfg.ground.conductivity_s_per_m},
                   {"mode", to_string(cfg.ground.mode)},
                   {"gamma_scale", cfg.ground.gamma_scale}};
    j["constellation"] = {{"gamma", cfg.constellation_gamma}, {"phi_rad", cfg.constellation_phi_rad}};
    j["equalizer_taps"] = cfg.equalizer_taps;
    nlohmann::json schemes = nlohmann::json::array();
    for (Scheme s : cfg.schemes) schemes.push_back(to_string(s));
    j["schemes"] = schemes;
    j["ebn0_grid_db"] = cfg.ebn0_grid_db;
    j["min_bit_errors"] = cfg.min_bit_errors;
    j["max_bits"] = cfg.max_bits;
    j["seed"] = cfg.seed;
    return j;
}

/// Parse a config; absent keys keep their defaults, unknown keys are errors.
inline ScenarioConfig config_from_json(const nlohmann::json& j) {
    if (!j.is_object()) throw std::domain_error("config: top level must be a JSON object");
    detail::require_keys(j,
                         {"transmitter", "receiver", "aircraft_height_m", "rx_feed_height_m",
                          "attitude_deg", "carrier_hz", "symbol_rate_hz", "rolloff", "grid_points",
                          "samples_per_symbol", "pulse_span_symbols", "ground", "constellation",
                          "equalizer_taps", "schemes", "ebn0_grid_db", "min_bit_errors", "max_bits",
                          "seed", "notes"},
                         "config");
    ScenarioConfig cfg;
    for (const char* key : {"transmitter", "receiver"}) {
        if (!j.contains(key)) continue;
        const auto& p = j.at(key);
        detail::require_keys(p, {"lat_deg", "lon_deg", "alt_m"}, key);
        GeodeticPosition& g = key == std::string("transmitter") ? cfg.transmitter : cfg.receiver;
        detail::maybe(p, "lat_deg", g.lat_deg);
        detail::maybe(p, "lon_deg", g.lon_deg);
        detail::maybe(p, "alt_m", g.alt_m);
    }
    detail::maybe(j, "aircraft_height_m", cfg.aircraft_height_m);
    detail::maybe(j, "rx_feed_height_m", cfg.rx_feed_height_m);
    if (j.contains("attitude_deg")) {
        const auto& a = j.at("attitude_deg");
        detail::require_keys(a, {"yaw", "pitch", "roll"}, "attitude_deg");
        detail::maybe(a, "yaw", cfg.attitude.yaw_deg);
        detail::maybe(a, "pitch", cfg.attitude.pitch_deg);
        detail::maybe(a, "roll", cfg.attitude.roll_deg);
    }
    detail::maybe(j, "carrier_hz", cfg.carrier_hz);
    detail::maybe(j, "symbol_rate_hz", cfg.symbol_rate_hz);
    detail::maybe(j, "rolloff", cfg.rolloff);
    detail::maybe(j, "grid_points", cfg.grid_points);
    detail::maybe(j, "samples_per_symbol", cfg.samples_per_symbol);
    detail::maybe(j, "pulse_span_symbols", cfg.pulse_span_symbols);
    if (j.contains("ground")) {
        const auto& g = j.at("ground");
        detail::require_keys(g, {"relative_permittivity", "conductivity_s_per_m", "mode", "gamma_scale"},
                             "ground");
        detail::maybe(g, "relative_permittivity", cfg.ground.relative_permittivity);
        detail::maybe(g, "conductivity_s_per_m", cfg.ground.conductivity_s_per_m);
        if (g.contains("mode")) cfg.ground.mode = ground_mode_from_string(g.at("mode").get<std::string>());
        detail::maybe(g, "gamma_scale", cfg.ground.gamma_scale);
    }
    if (j.contains("constellation")) {
        const auto& c = j.at("constellation");
        detail::require_keys(c, {"gamma", "phi_rad"}, "constellation");
        detail::maybe(c, "gamma", cfg.constellation_gamma);
        detail::maybe(c, "phi_rad", cfg.constellation_phi_rad);
    }
    detail::maybe(j, "equalizer_taps", cfg.equalizer_taps);
    if (j.contains("schemes")) {
        cfg.schemes.clear();
        for (const auto& s : j.at("schemes")) cfg.schemes.push_back(scheme_from_string(s.get<std::string>()));
    }
    if (j.contains("ebn0_grid_db")) cfg.ebn0_grid_db = j.at("ebn0_grid_db").get<std::vector<double>>();
    detail::maybe(j, "min_bit_errors", cfg.min_bit_errors);
    detail::maybe(j, "max_bits", cfg.max_bits);
    detail::maybe(j, "seed", cfg.seed);
    validate(cfg);
    return cfg;
}

/// Default config plus a "notes" block describing every field; the parser
/// accepts (and ignores) the notes, so the emitted example is valid input.
inline nlohmann::json example_config_json() {
    nlohmann::json j = to_json(ScenarioConfig{});
    j["notes"] = {
        {"transmitter/receiver", "geodetic endpoints; altitudes are meters above mean sea level"},
        {"aircraft_height_m", "added to the endpoint altitude difference to form the transmit height above the reflecting plane"},
        {"rx_feed_height_m", "receive feed height above the reflecting plane"},
        {"attitude_deg", "transmit antenna attitude: yaw about z, pitch about x, roll about y"},
        {"carrier_hz", "RF carrier at the center of the analysis grid"},
        {"symbol_rate_hz", "16-APSK symbol rate"},
        {"rolloff", "square-root raised-cosine excess bandwidth"},
        {"grid_points", "frequency bins across the occupied bandwidth"},
        {"samples_per_symbol", "waveform oversampling for the composite response"},
        {"pulse_span_symbols", "SRRC truncation span"},
        {"ground", "soil model: fresnel | none | conductor; gamma_scale scales the reflection"},
        {"constellation", "16-APSK ring ratio and outer-ring phase"},
        {"equalizer_taps", "MMSE equalizer length"},
        {"schemes", "subset of ML_VH, ML_RL, RHCP, LHCP, EGC"},
        {"ebn0_grid_db", "Eb/N0 sweep points, dB"},
        {"min_bit_errors", "stop a sweep point once this many bit errors accumulate"},
        {"max_bits", "hard cap of simulated bits per sweep point"},
        {"seed", "master seed; results are reproducible for a given seed"},
    };
    return j;
}

}  // namespace aerotel
