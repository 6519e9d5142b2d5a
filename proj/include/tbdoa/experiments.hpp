#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "tbdoa/array_model.hpp"
#include "tbdoa/cp_als.hpp"
#include "tbdoa/doa.hpp"

namespace tbdoa {

/// Fixed part of a Monte-Carlo scene: angles and normalized Doppler shifts.
/// Reflection coefficients are redrawn every trial from the trial's stream.
struct SceneTemplate {
    std::vector<double> angles_deg;
    std::vector<double> dopplers;

    int size() const { return static_cast<int>(angles_deg.size()); }
    void validate() const;
};

/// Everything a sweep needs to be a pure function of its seeds: geometry,
/// beamspace design, scene template, decomposition settings and the SNR /
/// trial grid. The receive layout comes from geometry_seed and is held fixed
/// across all trials; per-trial randomness derives from master_seed.
struct McConfig {
    int tx_count = 10;               // M
    double tx_spacing_wl = 0.5;      // d_t
    int rx_count = 10;               // N
    double aperture_wl = 5.0;        // receive aperture
    std::uint64_t geometry_seed = 7;

    double sector_lo_deg = -15.0;
    double sector_hi_deg = 15.0;
    int beam_count = 4;              // K
    double design_grid_step_deg = 0.1;

    SceneTemplate scene;
    int pulses = 64;                 // Q

    std::vector<double> snr_grid_db; // +infinity means noiseless
    int trials = 500;
    std::uint64_t master_seed = 1;

    // Harness decomposition settings. The data-driven initialization plus the
    // raised iteration cap keep closely spaced targets convergent: random
    // starts can stall in an ALS swamp indefinitely when two factor columns
    // are nearly collinear, and a stalled trial counts as a failure.
    int cp_max_iter = 2000;
    double cp_tol = 1e-8;
    CpInit cp_init = CpInit::DataDriven;

    int rank() const { return scene.size(); }
    void validate() const;

    ArrayGeometry make_geometry() const;
    BeamspaceMatrix make_beamspace(const ArrayGeometry& g) const;
};

struct RmsePoint {
    double snr_db = 0.0;
    double rmse_deg = 0.0;
    int trials = 0;
    int failures = 0;
};

struct ResolutionPoint {
    double snr_db = 0.0;
    double prob_resolution = 0.0;
    int trials = 0;
    int failures = 0;
};

struct RmseReport {
    std::vector<RmsePoint> points;
};

struct ResolutionReport {
    std::vector<ResolutionPoint> points;
};

/// Assignment of estimates to truth angles minimizing the total squared
/// error, by exhaustive permutation search (counts <= 5).
struct Pairing {
    std::vector<int> assignment;     // truth index l -> estimate assignment[l]
    std::vector<double> errors_deg;  // per truth target, absolute
};

Pairing pair_estimates(const std::vector<double>& estimates_deg,
                       const std::vector<double>& truth_deg);

/// One simulate / decompose / estimate / pair pass. Never throws: failed
/// trials (ALS not converged, out-of-range root, ...) come back with
/// ok = false and a reason. The trial's stream is (master_seed, trial_index,
/// snr_index); it supplies the reflection coefficients, then the simulation
/// seed, then the ALS initialization seed, in that order.
struct TrialResult {
    bool ok = false;
    std::vector<double> angles_deg; // paired to truth order
    std::vector<double> errors_deg;
    std::string failure_reason;
};

TrialResult run_trial(const McConfig& cfg, const ArrayGeometry& g, const BeamspaceMatrix& bs,
                      double snr_db, int trial_index, int snr_index);

/// RMSE over the SNR grid, both targets pooled:
/// sqrt( sum of squared errors / (successful trials * L) ). Failed trials are
/// excluded from the average and reported per SNR. Throws when every trial at
/// some SNR fails. Trials run concurrently; the report does not depend on the
/// thread count.
RmseReport run_rmse_sweep(const McConfig& cfg);

/// Fraction of trials where, after pairing, both errors are below half the
/// target separation. Requires exactly two targets. Failed trials count as
/// unresolved and are also reported.
ResolutionReport run_resolution_sweep(const McConfig& cfg);

/// One trial at one SNR with full diagnostics for root-locus and beampattern
/// plots: every polynomial root per target, the selected roots and angles,
/// and peak-normalized blocking-matrix patterns on a 0.01 degree grid. The
/// per-target patterns use the known-scale signature W^H a(theta_hat) so that
/// the blocking row subtraction is exact; sector_db is the pattern of W alone.
struct SingleShot {
    double snr_db = 0.0;
    std::vector<double> truth_deg;
    std::vector<DoaEstimate> estimates;
    double fit = 0.0;
    int iterations = 0;
    bool converged = false;
    std::vector<double> grid_deg;
    std::vector<double> sector_db;
    std::vector<std::vector<double>> target_db; // one pattern per target
};

SingleShot dump_single_shot(const McConfig& cfg, double snr_db);

// Plain-loop twins of the sweep drivers; same per-trial work, no OpenMP.
// Kept for tests and the benchmark target; results are bit-identical.
namespace serial {
RmseReport run_rmse_sweep(const McConfig& cfg);
ResolutionReport run_resolution_sweep(const McConfig& cfg);
} // namespace serial

} // namespace tbdoa
