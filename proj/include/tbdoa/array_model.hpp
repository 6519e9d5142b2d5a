#pragma once

#include <cstdint>
#include <vector>

#include "tbdoa/tensor.hpp"

namespace tbdoa {

/// Collocated MIMO geometry: a uniform linear transmit array plus receive
/// elements at arbitrary coordinates inside a fixed aperture. All lengths in
/// wavelengths.
struct ArrayGeometry {
    int tx_count = 0;          // M
    double tx_spacing_wl = 0.5; // d_t
    RVec rx_coords_wl;          // x_n, first coordinate 0
    double aperture_wl = 0.0;   // D_r

    int rx_count() const { return static_cast<int>(rx_coords_wl.size()); }

    /// Receive coordinates drawn once, uniformly on [0, aperture], sorted,
    /// with the first element pinned at 0. The seed fixes the layout for a
    /// whole experiment.
    static ArrayGeometry random_linear(int tx_count, double tx_spacing_wl, int rx_count,
                                       double aperture_wl, std::uint64_t geometry_seed);

    void validate() const;
};

struct Target {
    double angle_deg = 0.0;
    cxd reflection{1.0, 0.0}; // RCS fading coefficient
    double doppler = 0.0;     // normalized Doppler shift
};

struct Scene {
    std::vector<Target> targets;

    int size() const { return static_cast<int>(targets.size()); }
    void validate() const; // at least one target, |angle| < 90, angles distinct
};

/// Transmit beamspace matrix focusing the emitted energy on a sector.
struct BeamspaceMatrix {
    CMat w; // M x K, orthonormal columns
    double sector_lo_deg = 0.0;
    double sector_hi_deg = 0.0;

    int beam_count() const { return static_cast<int>(w.cols()); }
    void validate() const; // K <= M, W^H W = I to 1e-10
};

struct SimulationConfig {
    int pulses = 64; // Q, per CPI
    double snr_db = 0.0;
    std::uint64_t seed = 0;
    double pulse_duration_s = 1.0; // normalized out, kept for completeness
};

/// Transmit steering vector for a ULA: entry m = exp(-j 2 pi d m sin(theta)),
/// m = 0..count-1.
CVec transmit_steering(int count, double spacing_wl, double angle_deg);
CVec transmit_steering(const ArrayGeometry& g, double angle_deg);

/// Receive steering vector: entry n = exp(-j 2 pi x_n sin(theta)).
CVec receive_steering(const ArrayGeometry& g, double angle_deg);

/// Per-entry noise power for an SNR referenced to unit mean-square target
/// coefficient: 10^(-snr_db/10).
double snr_to_noise_variance(double snr_db);

/// Sector-focused beamspace: the K principal eigenvectors of the sector
/// correlation matrix mean_i a(theta_i) a(theta_i)^H over a grid of the
/// sector with the given step. Deterministic; each column's largest-magnitude
/// entry is rotated real positive.
BeamspaceMatrix design_beamspace(const ArrayGeometry& g, double sector_lo_deg,
                                 double sector_hi_deg, int beam_count,
                                 double grid_step_deg = 0.1);

/// Noise-free CP factors of the received-signal tensor:
///   x_l = W^H a(theta_l), b_l = receive steering, C(q,l) = sigma_l
///   exp(j 2 pi f_l q) for pulses q = 1..Q.
FactorTriple model_factors(const ArrayGeometry& g, const Scene& scene, const CMat& w,
                           int pulses);

/// Noise-free tensor plus i.i.d. circular complex Gaussian noise of variance
/// snr_to_noise_variance(cfg.snr_db) per entry. Fully determined by cfg.seed.
Tensor3 simulate_cpi(const ArrayGeometry& g, const Scene& scene, const CMat& w,
                     const SimulationConfig& cfg);

} // namespace tbdoa
