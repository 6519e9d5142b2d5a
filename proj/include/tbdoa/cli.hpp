#pragma once

#include <cstdint>
#include <optional>
#include <string>

#include "tbdoa/experiments.hpp"
#include "tbdoa/tensor.hpp"

namespace tbdoa {

/// Resolved run configuration: the Monte-Carlo config plus the single-run
/// SNR and file locations. Built from defaults, then an optional config
/// file, then flag overrides, in that order.
struct RunConfig {
    McConfig mc;
    double snr_db = std::numeric_limits<double>::infinity(); // single-run SNR
    std::string out_dir = "out";
    std::string input_path; // tensor CSV consumed by `estimate`

    void validate() const;
};

/// Command-line overrides; unset fields leave the config value alone.
struct FlagOverrides {
    std::optional<std::string> config_path;
    std::optional<std::uint64_t> seed;    // master seed
    std::optional<std::string> snr_db;    // number or "inf"
    std::optional<int> trials;
    std::optional<std::string> out_dir;
    std::optional<int> beam_count;
    std::optional<std::string> targets;   // comma-separated degrees
    std::optional<std::string> input_path;
};

/// All defaults: M=10, N=10, K=4, Q=64, d_t=0.5, sector [-15, 15] degrees,
/// targets -15/15 with Doppler 0.1/-0.25, 500 trials, SNR grid
/// {-10, 0, 10, 20} dB, noiseless single-run SNR.
RunConfig default_run_config();

/// Apply a plain-text config: `key = value` lines under `[section]` headers,
/// `#` or `;` comments. Unknown sections or keys and malformed values are
/// rejected with the offending line. SNR values accept "inf" for noiseless.
void apply_config_text(RunConfig& cfg, const std::string& text);

void apply_overrides(RunConfig& cfg, const FlagOverrides& overrides);

/// defaults -> config file (if given) -> flags -> validate.
RunConfig load_run_config(const FlagOverrides& overrides);

/// Dispatch one subcommand: simulate | estimate | rmse-sweep |
/// resolution-sweep | single-shot | beampattern. Writes the subcommand's
/// files plus manifest.json into cfg.out_dir and returns 0; on any error
/// writes error.json, prints the reason to stderr and returns 1.
int run_subcommand(const std::string& name, const RunConfig& cfg);

/// %.12g formatting used for every CSV number; byte-stable across runs.
std::string format_g(double value);

/// Tensor CSV exchange format: header k,n,q,re,im with 0-based indices,
/// entries in storage order (k fastest). Reading reconstructs the dimensions
/// from the index ranges and requires a complete grid.
void write_tensor_csv(const std::string& path, const Tensor3& t);
Tensor3 read_tensor_csv(const std::string& path);

} // namespace tbdoa
