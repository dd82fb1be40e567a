// Command-line front end: scenario geometry echo, channel/branch CSV export,
// per-scheme discrete channel export, and the full BER sweep.
//
// Exit codes: 0 success, 2 configuration error (bad JSON, bad values, missing
// files, bad usage), 3 numerical-domain error from the pipeline.

#include <cstdint>
#include <fstream>
#include <iostream>
#include <stdexcept>
#include <string>

#include <CLI11.hpp>

#include "aerotel/aerotel.hpp"

namespace {

aerotel::ScenarioConfig load_config(const std::string& path) {
    if (path.empty()) return aerotel::ScenarioConfig{};
    std::ifstream in(path);
    if (!in) throw std::domain_error("config: cannot open " + path);
    return aerotel::config_from_json(nlohmann::json::parse(in));
}

void write_file(const std::string& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open for writing: " + path);
    out << text;
    out.flush();
    if (!out) throw std::runtime_error("write failed: " + path);
}

nlohmann::json geometry_json(const aerotel::PathGeometry& g) {
    return {
        {"ground_distance_m", g.d_r},
        {"transmit_height_m", g.h_t},
        {"receive_height_m", g.h_r},
        {"elevation_angle_rad", g.elevation_rad},
        {"elevation_angle_deg", aerotel::rad2deg(g.elevation_rad)},
        {"grazing_angle_rad", g.grazing_rad},
        {"los_length_m", g.los_length_m},
        {"reflection_length_m", g.refl_length_m},
        {"delay_difference_s", g.delay_diff_s},
    };
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Two-ray aeronautical-telemetry polarization-combining simulator"};
    app.require_subcommand(1);

    std::string config_path;
    std::string out_dir = ".";
    std::string out_path;
    std::uint64_t seed = 0;
    int workers = 1;

    CLI::App* cmd_example = app.add_subcommand(
        "example-config", "Write the annotated default configuration");
    cmd_example->add_option("--out", out_path, "output file (stdout if omitted)");

    CLI::App* cmd_scenario =
        app.add_subcommand("scenario", "Echo the resolved two-ray geometry as JSON");
    CLI::App* cmd_channel = app.add_subcommand(
        "channel", "Export the receiver field and the five branch responses as CSV");
    CLI::App* cmd_fom = app.add_subcommand(
        "fom", "Export each requested scheme's discrete minimum-phase channel as CSV");
    CLI::App* cmd_ber = app.add_subcommand("ber", "Run the Monte-Carlo BER sweep");

    for (CLI::App* cmd : {cmd_scenario, cmd_channel, cmd_fom, cmd_ber})
        cmd->add_option("--config", config_path, "scenario JSON (defaults when omitted)")
            ->check(CLI::ExistingFile);
    for (CLI::App* cmd : {cmd_channel, cmd_fom, cmd_ber})
        cmd->add_option("--out-dir", out_dir, "directory for output files");
    CLI::Option* seed_opt =
        cmd_ber->add_option("--seed", seed, "override the config's master seed");
    cmd_ber->add_option("--workers", workers, "worker threads (any count, same results)")
        ->check(CLI::PositiveNumber);

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    try {
        if (cmd_example->parsed()) {
            const std::string text = aerotel::example_config_json().dump(2) + "\n";
            if (out_path.empty())
                std::cout << text;
            else
                write_file(out_path, text);
            return 0;
        }

        aerotel::ScenarioConfig cfg = load_config(config_path);
        if (seed_opt->count() > 0) cfg.seed = seed;

        if (cmd_scenario->parsed()) {
            aerotel::validate(cfg);
            std::cout << geometry_json(aerotel::scenario_geometry(cfg)).dump(2) << "\n";
            return 0;
        }
        if (cmd_channel->parsed()) {
            const aerotel::FieldResponse fr = aerotel::scenario_field(cfg);
            write_file(out_dir + "/field.csv", aerotel::field_csv(fr));
            for (aerotel::BranchLabel label :
                 {aerotel::BranchLabel::Y, aerotel::BranchLabel::Z, aerotel::BranchLabel::RHCP,
                  aerotel::BranchLabel::LHCP, aerotel::BranchLabel::EGC}) {
                const aerotel::BranchChannel b = aerotel::scenario_branch(fr, label);
                write_file(out_dir + "/branch_" + aerotel::to_string(label) + ".csv",
                           aerotel::branch_csv(b));
            }
            return 0;
        }
        if (cmd_fom->parsed()) {
            for (const auto& sc : aerotel::build_scheme_channels(cfg))
                write_file(out_dir + "/fom_" + aerotel::to_string(sc.scheme) + ".csv",
                           aerotel::taps_csv(sc.channel));
            return 0;
        }
        if (cmd_ber->parsed()) {
            const std::vector<aerotel::BerPoint> points = aerotel::run_ber(cfg, workers);
            write_file(out_dir + "/ber.csv", aerotel::ber_csv(points));
            write_file(out_dir + "/ber.json", aerotel::ber_json(cfg, points).dump(2) + "\n");
            return 0;
        }
        std::cerr << "error: no subcommand\n";
        return 2;
    } catch (const aerotel::numerical_error& e) {
        std::cerr << "numerical error: " << e.what() << "\n";
        return 3;
    } catch (const nlohmann::json::exception& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    } catch (const std::domain_error& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}
