#include "tbdoa/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

#include "tbdoa/random.hpp"

namespace tbdoa {

void SceneTemplate::validate() const {
    if (angles_deg.empty())
        throw std::invalid_argument("SceneTemplate: at least one target required");
    if (dopplers.size() != angles_deg.size())
        throw std::invalid_argument("SceneTemplate: one Doppler shift per target required");
    for (double a : angles_deg)
        if (!(std::abs(a) < 90.0))
            throw std::invalid_argument("SceneTemplate: angles must lie strictly inside (-90, 90)");
    for (std::size_t i = 0; i < angles_deg.size(); ++i)
        for (std::size_t j = i + 1; j < angles_deg.size(); ++j)
            if (angles_deg[i] == angles_deg[j])
                throw std::invalid_argument("SceneTemplate: target angles must be distinct");
}

void McConfig::validate() const {
    scene.validate();
    if (tx_count < 2)
        throw std::invalid_argument("McConfig: at least two transmit elements required");
    if (tx_spacing_wl <= 0.0)
        throw std::invalid_argument("McConfig: transmit spacing must be positive");
    if (rx_count < 1)
        throw std::invalid_argument("McConfig: at least one receive element required");
    if (aperture_wl <= 0.0)
        throw std::invalid_argument("McConfig: receive aperture must be positive");
    if (beam_count < 1 || beam_count > tx_count)
        throw std::invalid_argument("McConfig: beam count must lie in [1, tx_count]");
    if (!(sector_lo_deg < sector_hi_deg))
        throw std::invalid_argument("McConfig: sector bounds must satisfy lo < hi");
    if (design_grid_step_deg <= 0.0)
        throw std::invalid_argument("McConfig: design grid step must be positive");
    if (pulses < 1)
        throw std::invalid_argument("McConfig: at least one pulse required");
    if (trials < 1)
        throw std::invalid_argument("McConfig: at least one trial required");
    if (snr_grid_db.empty())
        throw std::invalid_argument("McConfig: SNR grid must be nonempty");
    if (cp_max_iter < 1)
        throw std::invalid_argument("McConfig: cp_max_iter must be at least 1");
    if (cp_tol <= 0.0)
        throw std::invalid_argument("McConfig: cp_tol must be positive");
    const int l = rank();
    if (l > 5)
        throw std::invalid_argument("McConfig: at most 5 targets supported (exhaustive pairing)");
    if (l > beam_count || l > rx_count || l > pulses)
        throw std::invalid_argument("McConfig: target count must not exceed min(K, N, Q)");
}

ArrayGeometry McConfig::make_geometry() const {
    return ArrayGeometry::random_linear(tx_count, tx_spacing_wl, rx_count, aperture_wl,
                                        geometry_seed);
}

BeamspaceMatrix McConfig::make_beamspace(const ArrayGeometry& g) const {
    return design_beamspace(g, sector_lo_deg, sector_hi_deg, beam_count, design_grid_step_deg);
}

Pairing pair_estimates(const std::vector<double>& estimates_deg,
                       const std::vector<double>& truth_deg) {
    const std::size_t l = truth_deg.size();
    if (estimates_deg.size() != l)
        throw std::invalid_argument("pair_estimates: estimate and truth counts differ");
    if (l == 0)
        throw std::invalid_argument("pair_estimates: empty inputs");
    if (l > 5)
        throw std::invalid_argument("pair_estimates: at most 5 targets supported");

    std::vector<int> perm(l);
    std::iota(perm.begin(), perm.end(), 0);
    std::vector<int> best = perm;
    double best_cost = std::numeric_limits<double>::infinity();
    do {
        double cost = 0.0;
        for (std::size_t i = 0; i < l; ++i) {
            const double e = estimates_deg[static_cast<std::size_t>(perm[i])] - truth_deg[i];
            cost += e * e;
        }
        if (cost < best_cost) {
            best_cost = cost;
            best = perm;
        }
    } while (std::next_permutation(perm.begin(), perm.end()));

    Pairing out;
    out.assignment = best;
    out.errors_deg.resize(l);
    for (std::size_t i = 0; i < l; ++i)
        out.errors_deg[i] =
            std::abs(estimates_deg[static_cast<std::size_t>(best[i])] - truth_deg[i]);
    return out;
}

namespace {

Scene draw_scene(const SceneTemplate& tmpl, RandomStream& stream) {
    Scene scene;
    scene.targets.resize(tmpl.angles_deg.size());
    for (std::size_t l = 0; l < tmpl.angles_deg.size(); ++l) {
        scene.targets[l].angle_deg = tmpl.angles_deg[l];
        scene.targets[l].reflection = stream.complex_normal();
        scene.targets[l].doppler = tmpl.dopplers[l];
    }
    return scene;
}

struct TrialDiagnostics {
    CpResult cp;
    std::vector<DoaEstimate> estimates; // truth order after pairing
};

// Shared trial body; the diagnostics pointer is only filled for single-shot
// dumps. Throws on failure; run_trial converts that into TrialResult.
TrialResult trial_body(const McConfig& cfg, const ArrayGeometry& g, const BeamspaceMatrix& bs,
                       double snr_db, int trial_index, int snr_index,
                       TrialDiagnostics* diagnostics) {
    RandomStream stream(cfg.master_seed, static_cast<std::uint64_t>(trial_index),
                        static_cast<std::uint64_t>(snr_index));
    const Scene scene = draw_scene(cfg.scene, stream);
    SimulationConfig sim;
    sim.pulses = cfg.pulses;
    sim.snr_db = snr_db;
    sim.seed = stream.next_seed();
    const std::uint64_t cp_seed = stream.next_seed();

    const Tensor3 t = simulate_cpi(g, scene, bs.w, sim);

    CpConfig cp;
    cp.rank = cfg.rank();
    cp.max_iter = cfg.cp_max_iter;
    cp.tol = cfg.cp_tol;
    cp.init = cfg.cp_init;
    cp.seed = cp_seed;
    CpResult result = als_decompose(t, cp);
    if (!result.converged)
        throw std::runtime_error("ALS did not converge");

    RootingOptions opts;
    opts.tx_spacing_wl = cfg.tx_spacing_wl;
    std::vector<DoaEstimate> estimates = estimate_doas(result.factors.x, bs.w, opts);

    std::vector<double> angles(estimates.size());
    for (std::size_t i = 0; i < estimates.size(); ++i)
        angles[i] = estimates[i].angle_deg;
    const Pairing pairing = pair_estimates(angles, cfg.scene.angles_deg);

    TrialResult out;
    out.ok = true;
    out.errors_deg = pairing.errors_deg;
    out.angles_deg.resize(angles.size());
    for (std::size_t i = 0; i < angles.size(); ++i)
        out.angles_deg[i] = angles[static_cast<std::size_t>(pairing.assignment[i])];

    if (diagnostics != nullptr) {
        diagnostics->cp = std::move(result);
        diagnostics->estimates.resize(estimates.size());
        for (std::size_t i = 0; i < estimates.size(); ++i)
            diagnostics->estimates[i] = estimates[static_cast<std::size_t>(pairing.assignment[i])];
    }
    return out;
}

RmsePoint reduce_rmse(const McConfig& cfg, double snr_db,
                      const std::vector<TrialResult>& results) {
    RmsePoint point;
    point.snr_db = snr_db;
    point.trials = cfg.trials;
    double sum_sq = 0.0;
    for (const TrialResult& r : results) {
        if (!r.ok) {
            ++point.failures;
            continue;
        }
        for (double e : r.errors_deg)
            sum_sq += e * e;
    }
    const int ok_count = point.trials - point.failures;
    if (ok_count == 0)
        throw std::runtime_error("run_rmse_sweep: every trial failed at one SNR point");
    point.rmse_deg = std::sqrt(sum_sq / (static_cast<double>(ok_count) * cfg.rank()));
    return point;
}

ResolutionPoint reduce_resolution(const McConfig& cfg, double snr_db, double half_separation,
                                  const std::vector<TrialResult>& results) {
    ResolutionPoint point;
    point.snr_db = snr_db;
    point.trials = cfg.trials;
    int resolved = 0;
    for (const TrialResult& r : results) {
        if (!r.ok) {
            ++point.failures;
            continue;
        }
        if (r.errors_deg[0] < half_separation && r.errors_deg[1] < half_separation)
            ++resolved;
    }
    point.prob_resolution = static_cast<double>(resolved) / point.trials;
    return point;
}

} // namespace

TrialResult run_trial(const McConfig& cfg, const ArrayGeometry& g, const BeamspaceMatrix& bs,
                      double snr_db, int trial_index, int snr_index) {
    try {
        return trial_body(cfg, g, bs, snr_db, trial_index, snr_index, nullptr);
    } catch (const std::exception& e) {
        TrialResult out;
        out.failure_reason = e.what();
        return out;
    }
}

RmseReport run_rmse_sweep(const McConfig& cfg) {
    cfg.validate();
    const ArrayGeometry g = cfg.make_geometry();
    const BeamspaceMatrix bs = cfg.make_beamspace(g);

    RmseReport report;
    for (std::size_t snr_index = 0; snr_index < cfg.snr_grid_db.size(); ++snr_index) {
        const double snr_db = cfg.snr_grid_db[snr_index];
        std::vector<TrialResult> results(static_cast<std::size_t>(cfg.trials));
#pragma omp parallel for schedule(dynamic)
        for (int trial = 0; trial < cfg.trials; ++trial)
            results[static_cast<std::size_t>(trial)] =
                run_trial(cfg, g, bs, snr_db, trial, static_cast<int>(snr_index));
        report.points.push_back(reduce_rmse(cfg, snr_db, results));
    }
    return report;
}

ResolutionReport run_resolution_sweep(const McConfig& cfg) {
    cfg.validate();
    if (cfg.rank() != 2)
        throw std::invalid_argument("run_resolution_sweep: exactly two targets required");
    const double half_separation =
        std::abs(cfg.scene.angles_deg[0] - cfg.scene.angles_deg[1]) / 2.0;
    const ArrayGeometry g = cfg.make_geometry();
    const BeamspaceMatrix bs = cfg.make_beamspace(g);

    ResolutionReport report;
    for (std::size_t snr_index = 0; snr_index < cfg.snr_grid_db.size(); ++snr_index) {
        const double snr_db = cfg.snr_grid_db[snr_index];
        std::vector<TrialResult> results(static_cast<std::size_t>(cfg.trials));
#pragma omp parallel for schedule(dynamic)
        for (int trial = 0; trial < cfg.trials; ++trial)
            results[static_cast<std::size_t>(trial)] =
                run_trial(cfg, g, bs, snr_db, trial, static_cast<int>(snr_index));
        report.points.push_back(reduce_resolution(cfg, snr_db, half_separation, results));
    }
    return report;
}

SingleShot dump_single_shot(const McConfig& cfg, double snr_db) {
    cfg.validate();
    const ArrayGeometry g = cfg.make_geometry();
    const BeamspaceMatrix bs = cfg.make_beamspace(g);

    TrialDiagnostics diagnostics;
    trial_body(cfg, g, bs, snr_db, 0, 0, &diagnostics);

    SingleShot shot;
    shot.snr_db = snr_db;
    shot.truth_deg = cfg.scene.angles_deg;
    shot.estimates = std::move(diagnostics.estimates);
    shot.fit = diagnostics.cp.fit;
    shot.iterations = diagnostics.cp.iterations;
    shot.converged = diagnostics.cp.converged;
    shot.grid_deg = make_angle_grid(-90.0, 90.0, 0.01);
    shot.sector_db = transmit_beampattern(bs.w, cfg.tx_spacing_wl, shot.grid_deg);
    shot.target_db.reserve(shot.estimates.size());
    for (const DoaEstimate& est : shot.estimates) {
        const CVec signature = bs.w.adjoint() * transmit_steering(g, est.angle_deg);
        const CMat blocking = build_blocking_matrix(bs.w, signature);
        shot.target_db.push_back(transmit_beampattern(blocking, cfg.tx_spacing_wl, shot.grid_deg));
    }
    return shot;
}

namespace serial {

RmseReport run_rmse_sweep(const McConfig& cfg) {
    cfg.validate();
    const ArrayGeometry g = cfg.make_geometry();
    const BeamspaceMatrix bs = cfg.make_beamspace(g);

    RmseReport report;
    for (std::size_t snr_index = 0; snr_index < cfg.snr_grid_db.size(); ++snr_index) {
        const double snr_db = cfg.snr_grid_db[snr_index];
        std::vector<TrialResult> results(static_cast<std::size_t>(cfg.trials));
        for (int trial = 0; trial < cfg.trials; ++trial)
            results[static_cast<std::size_t>(trial)] =
                run_trial(cfg, g, bs, snr_db, trial, static_cast<int>(snr_index));
        report.points.push_back(reduce_rmse(cfg, snr_db, results));
    }
    return report;
}

ResolutionReport run_resolution_sweep(const McConfig& cfg) {
    cfg.validate();
    if (cfg.rank() != 2)
        throw std::invalid_argument("run_resolution_sweep: exactly two targets required");
    const double half_separation =
        std::abs(cfg.scene.angles_deg[0] - cfg.scene.angles_deg[1]) / 2.0;
    const ArrayGeometry g = cfg.make_geometry();
    const BeamspaceMatrix bs = cfg.make_beamspace(g);

    ResolutionReport report;
    for (std::size_t snr_index = 0; snr_index < cfg.snr_grid_db.size(); ++snr_index) {
        const double snr_db = cfg.snr_grid_db[snr_index];
        std::vector<TrialResult> results(static_cast<std::size_t>(cfg.trials));
        for (int trial = 0; trial < cfg.trials; ++trial)
            results[static_cast<std::size_t>(trial)] =
                run_trial(cfg, g, bs, snr_db, trial, static_cast<int>(snr_index));
        report.points.push_back(reduce_resolution(cfg, snr_db, half_separation, results));
    }
    return report;
}

} // namespace serial

} // namespace tbdoa
