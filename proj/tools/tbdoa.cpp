#include <exception>
#include <filesystem>
#include <fstream>
#include <iostream>

#include "CLI11.hpp"
#include "json.hpp"

#include "tbdoa/cli.hpp"

namespace {

// Parse/validation failures happen before run_subcommand can write its error
// record, so emit one here into the intended output directory.
void report_config_error(const tbdoa::FlagOverrides& overrides, const std::string& message) {
    std::cerr << "error: " << message << "\n";
    try {
        const std::filesystem::path out(overrides.out_dir.value_or("out"));
        std::filesystem::create_directories(out);
        std::ofstream file(out / "error.json", std::ios::binary);
        file << "{\n  \"error\": " << nlohmann::json(message).dump()
             << ",\n  \"subcommand\": \"config\"\n}\n";
    } catch (const std::exception&) {
        // stderr already carries the failure
    }
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Search-free DOA estimation in transmit-beamspace MIMO radar"};
    app.require_subcommand(1);

    tbdoa::FlagOverrides overrides;
    const auto add_common = [&overrides](CLI::App* sub) {
        sub->add_option("--config", overrides.config_path, "key=value config file with [section] headers");
        sub->add_option("--seed", overrides.seed, "master seed for the per-trial streams");
        sub->add_option("--snr", overrides.snr_db, "single-run SNR in dB, or 'inf' for noiseless");
        sub->add_option("--trials", overrides.trials, "Monte-Carlo trials per SNR point");
        sub->add_option("--out", overrides.out_dir, "output directory (default: out)");
        sub->add_option("--k", overrides.beam_count, "number of transmit beams K");
        sub->add_option("--targets", overrides.targets, "comma-separated target angles in degrees");
        sub->add_option("--input", overrides.input_path, "tensor CSV consumed by 'estimate'");
    };

    add_common(app.add_subcommand("simulate", "write one received-signal tensor as tensor.csv"));
    add_common(app.add_subcommand("estimate", "run CP + rooting on a tensor CSV"));
    add_common(app.add_subcommand("rmse-sweep", "Monte-Carlo RMSE versus SNR (rmse.csv)"));
    add_common(app.add_subcommand("resolution-sweep",
                                  "probability of resolving two close targets (resolution.csv)"));
    add_common(app.add_subcommand("single-shot",
                                  "one trial with root and beampattern dumps (roots.csv, pattern.csv)"));
    add_common(app.add_subcommand("beampattern",
                                  "blocking-matrix patterns for the configured scene (pattern.csv)"));

    CLI11_PARSE(app, argc, argv);

    tbdoa::RunConfig cfg;
    try {
        cfg = tbdoa::load_run_config(overrides);
    } catch (const std::exception& e) {
        report_config_error(overrides, e.what());
        return 2;
    }
    return tbdoa::run_subcommand(app.get_subcommands().front()->get_name(), cfg);
}
