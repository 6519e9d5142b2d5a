#pragma once

#include <vector>

#include "tbdoa/tensor.hpp"

namespace tbdoa {

/// Laurent polynomial sum_k c_k z^k for k = -order..order. Built from a
/// Hermitian quadratic form, so c_{-k} = conj(c_k) and values on the unit
/// circle are real and nonnegative.
struct LaurentPoly {
    int order = 0;
    CVec coeffs; // size 2*order+1, coeffs[k + order] = c_k

    cxd coeff(int k) const { return coeffs[k + order]; }

    /// sum_k c_k z^k (requires z != 0 when negative powers are present).
    cxd value(cxd z) const;
};

struct RootSelection {
    cxd root;
    double circle_distance = 0.0; // |1 - |root||
    double correlation = 0.0;     // signature match score in [0, 1]
};

struct DoaEstimate {
    cxd root;
    double angle_deg = 0.0;
    double circle_distance = 0.0;
    double correlation = 0.0;
    std::vector<cxd> all_roots; // every polynomial root, diagnostics
};

struct RootingOptions {
    double tx_spacing_wl = 0.5;  // d_t for the angle mapping
    int candidate_count = 4;     // near-circle candidates ranked by correlation
};

/// Blocking matrix W - e1 x^H: the conjugated target signature is subtracted
/// from the first row of W, so a(theta)^H V = 0 exactly when x = W^H a(theta).
CMat build_blocking_matrix(const CMat& w, const CVec& x);

/// Scale-invariant surrogate G = W (I - x x^H / ||x||^2) W^H. Hermitian PSD
/// with rank <= K-1; invariant to rescaling x by any nonzero complex scalar,
/// which is all a CP factor column is known up to.
CMat build_projection_matrix(const CMat& w, const CVec& x);

/// Collapse the quadratic form p^H(z) G p(z) to a Laurent polynomial with the
/// substitution conj(z) -> 1/z: c_k is the sum of the k-th superdiagonal.
/// Throws if G is not Hermitian to 1e-10.
LaurentPoly laurent_from_hermitian(const CMat& g);

/// Roots of z^order * P(z), via the companion-matrix eigenvalues. Leading and
/// trailing coefficients below 1e-12 of the largest magnitude are trimmed
/// first. Generically returns 2*order roots.
std::vector<cxd> find_roots(const LaurentPoly& poly);

/// Root-MUSIC style selection: canonicalize to |z| <= 1 (one per
/// conjugate-reciprocal pair), rank by distance to the unit circle, and among
/// the best few prefer the root whose steering vector best matches the
/// signature x through the beamspace.
RootSelection select_root(const std::vector<cxd>& roots, const CVec& x, const CMat& w,
                          int candidate_count = 4);

/// Angle from the root's phase: theta = arcsin(-arg(z) / (2 pi d)). The root
/// magnitude is discarded. Throws when the implied sine is out of [-1, 1].
double root_to_angle(cxd root, double tx_spacing_wl);

/// Full per-target pipeline over the columns of x: projection matrix ->
/// Laurent polynomial -> roots -> selection -> angle. Columns are
/// independent; failures are rethrown tagged with the target index.
std::vector<DoaEstimate> estimate_doas(const CMat& x, const CMat& w,
                                       const RootingOptions& opts = {});

/// Inclusive angle grid from lo to hi with the given step (degrees).
std::vector<double> make_angle_grid(double lo_deg, double hi_deg, double step_deg);

/// Transmit power ||V^H a(theta)||^2 over the grid (linear scale).
std::vector<double> beampattern_power(const CMat& blocking, double tx_spacing_wl,
                                      const std::vector<double>& grid_deg);

/// Re(a(theta)^H G a(theta)) over the grid for a Hermitian source.
std::vector<double> beampattern_power_hermitian(const CMat& g, double tx_spacing_wl,
                                                const std::vector<double>& grid_deg);

/// Peak-normalized dB values, floored 300 dB below the peak.
std::vector<double> power_to_db(const std::vector<double>& power);

/// Peak-normalized dB beampattern of a blocking matrix over the grid.
std::vector<double> transmit_beampattern(const CMat& blocking, double tx_spacing_wl,
                                         const std::vector<double>& grid_deg);

/// Exhaustive minimizer of a(theta)^H G a(theta) over [-90, 90] with the
/// given step; ties break toward the smaller angle. Search-based oracle for
/// the rooting path.
double grid_oracle(const CMat& g, double tx_spacing_wl, double grid_step_deg);

// Plain-loop references for the OpenMP kernels above; kept for tests and the
// benchmark target. Results are bit-identical to the parallel versions.
namespace serial {
std::vector<double> beampattern_power(const CMat& blocking, double tx_spacing_wl,
                                      const std::vector<double>& grid_deg);
std::vector<double> beampattern_power_hermitian(const CMat& g, double tx_spacing_wl,
                                                const std::vector<double>& grid_deg);
double grid_oracle(const CMat& g, double tx_spacing_wl, double grid_step_deg);
} // namespace serial

} // namespace tbdoa
