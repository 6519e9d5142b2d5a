#include "tbdoa/cp_als.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "tbdoa/random.hpp"

namespace tbdoa {

namespace {

// Solve G S = R for S with Hermitian G, falling back to the eigenvalue
// pseudo-inverse (threshold 1e-12 times the largest eigenvalue) when G is
// rank deficient. Returns whether the fallback was taken.
bool gram_solve(const CMat& gram, const CMat& rhs, CMat& solution) {
    Eigen::SelfAdjointEigenSolver<CMat> eig(gram);
    const RVec evals = eig.eigenvalues();
    const double cutoff = 1e-12 * evals[evals.size() - 1];
    bool deficient = false;
    RVec inv(evals.size());
    for (Index i = 0; i < evals.size(); ++i) {
        if (evals[i] > cutoff && evals[i] > 0.0) {
            inv[i] = 1.0 / evals[i];
        } else {
            inv[i] = 0.0;
            deficient = true;
        }
    }
    solution = eig.eigenvectors() * inv.asDiagonal() * eig.eigenvectors().adjoint() * rhs;
    return deficient;
}

CMat random_factor(Index rows, Index cols, RandomStream& rng) {
    CMat m(rows, cols);
    for (Index j = 0; j < cols; ++j)
        for (Index i = 0; i < rows; ++i)
            m(i, j) = rng.complex_normal();
    return m;
}

CMat leading_left_singular(const CMat& m, Index count) {
    Eigen::JacobiSVD<CMat> svd(m, Eigen::ComputeThinU);
    return svd.matrixU().leftCols(count);
}

} // namespace

void CpConfig::validate() const {
    if (rank < 1)
        throw std::invalid_argument("CpConfig: rank must be >= 1");
    if (max_iter < 1)
        throw std::invalid_argument("CpConfig: max_iter must be >= 1");
    if (tol <= 0.0)
        throw std::invalid_argument("CpConfig: tol must be positive");
}

CpResult als_decompose(const Tensor3& t, const CpConfig& cfg) {
    cfg.validate();
    const Index d1 = t.dim(0), d2 = t.dim(1), d3 = t.dim(2);
    if (cfg.rank > std::min({d1, d2, d3}))
        throw std::invalid_argument("als_decompose: rank exceeds the smallest tensor dimension");
    const double norm_t = t.norm();
    if (norm_t == 0.0)
        throw std::invalid_argument("als_decompose: zero tensor");

    const CMat y1 = unfold(t, 1);
    const CMat y2 = unfold(t, 2);
    const CMat y3 = unfold(t, 3);

    CMat x, b, c;
    if (cfg.init == CpInit::Random) {
        RandomStream rng(cfg.seed);
        x = random_factor(d1, cfg.rank, rng);
        b = random_factor(d2, cfg.rank, rng);
        c = random_factor(d3, cfg.rank, rng);
    } else {
        x = leading_left_singular(y1, cfg.rank);
        b = leading_left_singular(y2, cfg.rank);
        c = leading_left_singular(y3, cfg.rank);
    }

    CpResult res;
    double fit_prev = -std::numeric_limits<double>::infinity();
    for (int iter = 1; iter <= cfg.max_iter; ++iter) {
        bool fallback = false;
        // X <- argmin || Y1 - X (C kr B)^T ||_F
        CMat gram = (c.adjoint() * c).cwiseProduct(b.adjoint() * b);
        CMat sol;
        fallback |= gram_solve(gram, khatri_rao(c, b).adjoint() * y1.transpose(), sol);
        x = sol.transpose();
        // B <- argmin || Y2 - B (C kr X)^T ||_F
        gram = (c.adjoint() * c).cwiseProduct(x.adjoint() * x);
        fallback |= gram_solve(gram, khatri_rao(c, x).adjoint() * y2.transpose(), sol);
        b = sol.transpose();
        // C <- argmin || Y3 - C (X kr B)^T ||_F
        gram = (x.adjoint() * x).cwiseProduct(b.adjoint() * b);
        fallback |= gram_solve(gram, khatri_rao(x, b).adjoint() * y3.transpose(), sol);
        c = sol.transpose();
        if (fallback)
            ++res.gram_fallbacks;

        const double err = (y1 - x * khatri_rao(c, b).transpose()).norm();
        const double fit = 1.0 - err / norm_t;
        res.fit_history.push_back(fit);
        res.iterations = iter;
        res.fit = fit;
        if (std::abs(fit - fit_prev) < cfg.tol) {
            res.converged = true;
            break;
        }
        fit_prev = fit;
    }

    res.factors = FactorTriple{std::move(x), std::move(b), std::move(c)};
    return res;
}

std::pair<FactorTriple, RVec> normalize_factors(const FactorTriple& f) {
    f.validate();
    FactorTriple out = f;
    RVec amplitudes(f.rank());
    for (Index l = 0; l < f.rank(); ++l) {
        const double nx = out.x.col(l).norm();
        const double nb = out.b.col(l).norm();
        const double nc = out.c.col(l).norm();
        if (nx == 0.0 || nb == 0.0 || nc == 0.0)
            throw std::invalid_argument("normalize_factors: zero factor column");
        out.x.col(l) /= nx;
        out.b.col(l) /= nb;
        out.c.col(l) /= nc;
        amplitudes[l] = nx * nb * nc;

        Index peak = 0;
        double best = -1.0;
        for (Index i = 0; i < out.x.rows(); ++i) {
            const double mag = std::abs(out.x(i, l));
            if (mag > best) {
                best = mag;
                peak = i;
            }
        }
        // Rotate x's column so the peak entry is real positive; the opposite
        // rotation goes into c so the rank-1 term is unchanged.
        const cxd rot = std::conj(out.x(peak, l)) / best;
        out.x.col(l) *= rot;
        out.c.col(l) *= std::conj(rot);
    }
    return {out, amplitudes};
}

MatchResult match_columns(const FactorTriple& est, const FactorTriple& truth) {
    est.validate();
    truth.validate();
    const Index rank = truth.rank();
    if (est.rank() != rank)
        throw std::invalid_argument("match_columns: rank mismatch");
    if (rank > 5)
        throw std::invalid_argument("match_columns: exhaustive search limited to rank <= 5");

    auto congruence = [](const CMat& a, const CMat& b, Index i, Index j) {
        const double denom = a.col(i).norm() * b.col(j).norm();
        if (denom == 0.0)
            return 0.0;
        return std::abs(cxd(a.col(i).adjoint() * b.col(j))) / denom;
    };

    // Pairwise scores: product of the three per-factor congruences.
    Eigen::MatrixXd score(rank, rank);
    for (Index i = 0; i < rank; ++i)
        for (Index j = 0; j < rank; ++j)
            score(i, j) = congruence(est.x, truth.x, i, j) * congruence(est.b, truth.b, i, j) *
                          congruence(est.c, truth.c, i, j);

    std::vector<int> perm(static_cast<std::size_t>(rank));
    std::iota(perm.begin(), perm.end(), 0);
    std::vector<int> best_perm = perm;
    double best_total = -1.0;
    do {
        double total = 0.0;
        for (Index l = 0; l < rank; ++l)
            total += score(perm[static_cast<std::size_t>(l)], l);
        if (total > best_total) {
            best_total = total;
            best_perm = perm;
        }
    } while (std::next_permutation(perm.begin(), perm.end()));

    MatchResult res;
    res.permutation = best_perm;
    res.congruence.resize(rank);
    for (Index l = 0; l < rank; ++l)
        res.congruence[l] = score(best_perm[static_cast<std::size_t>(l)], l);
    return res;
}

} // namespace tbdoa
