#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "tbdoa/tensor.hpp"

namespace tbdoa {

enum class CpInit {
    Random,     // i.i.d. standard complex Gaussian factors from the seed
    DataDriven, // leading left singular vectors of each unfolding
};

struct CpConfig {
    Index rank = 1;        // L, assumed known
    int max_iter = 500;
    double tol = 1e-8;     // relative fit-change stopping threshold
    CpInit init = CpInit::Random;
    std::uint64_t seed = 0;

    void validate() const;
};

struct CpResult {
    FactorTriple factors;
    double fit = 0.0;
    int iterations = 0;
    bool converged = false;
    std::vector<double> fit_history; // one entry per completed iteration
    int gram_fallbacks = 0;          // iterations rescued by the pseudo-inverse
};

/// CP decomposition by alternating least squares. Each factor update is the
/// exact linear least-squares solution via the normal equations, using the
/// Khatri-Rao Gram identity (C (kr) B)^H (C (kr) B) = (C^H C) .* (B^H B).
/// Stops when the fit change drops below cfg.tol or after cfg.max_iter
/// iterations. The fit sequence is non-decreasing up to round-off.
CpResult als_decompose(const Tensor3& t, const CpConfig& cfg);

/// Rescale every factor column to unit norm and rotate each x column so its
/// largest-magnitude entry is real positive (the opposite rotation goes into
/// the c column, keeping the reconstruction exact). Returns the normalized
/// triple and the per-column amplitudes (products of the removed norms).
std::pair<FactorTriple, RVec> normalize_factors(const FactorTriple& f);

struct MatchResult {
    std::vector<int> permutation; // truth column l matches est column permutation[l]
    RVec congruence;              // per truth column, product of the three
                                  // normalized inner-product magnitudes
};

/// Resolve the CP permutation ambiguity against a reference by exhaustive
/// search (rank <= 5), maximizing the total congruence.
MatchResult match_columns(const FactorTriple& est, const FactorTriple& truth);

} // namespace tbdoa
