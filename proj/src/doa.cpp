#include "tbdoa/doa.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>
#include <string>

#include "tbdoa/array_model.hpp"

namespace tbdoa {

namespace {

constexpr double kTrimRel = 1e-12;     // relative coefficient trim threshold
constexpr double kCircleSlack = 1e-12; // admits on-circle roots rounded outward

CVec root_powers(cxd z, Index count) {
    CVec p(count);
    cxd acc{1.0, 0.0};
    for (Index i = 0; i < count; ++i) {
        p[i] = acc;
        acc *= z;
    }
    return p;
}

// Parlett-Reinsch style balancing with powers of two; improves the
// eigenvalue accuracy of lopsided companion matrices without rounding.
void balance_in_place(CMat& m) {
    const Index n = m.rows();
    bool changed = true;
    while (changed) {
        changed = false;
        for (Index i = 0; i < n; ++i) {
            const double row_norm = m.row(i).cwiseAbs().sum();
            const double col_norm = m.col(i).cwiseAbs().sum();
            if (row_norm == 0.0 || col_norm == 0.0)
                continue;
            int exponent = 0;
            std::frexp(row_norm / col_norm, &exponent);
            exponent /= 2;
            if (exponent == 0)
                continue;
            const double scaled_col = std::ldexp(col_norm, exponent);
            const double scaled_row = std::ldexp(row_norm, -exponent);
            if (scaled_col + scaled_row < 0.9 * (col_norm + row_norm)) {
                changed = true;
                m.row(i) *= std::ldexp(1.0, -exponent);
                m.col(i) *= std::ldexp(1.0, exponent);
            }
        }
    }
}

double signature_correlation(cxd z, const CVec& x, const CMat& w) {
    const CVec wp = w.adjoint() * root_powers(z, w.rows());
    const double denom = x.norm() * wp.norm();
    if (denom == 0.0)
        return 0.0;
    return std::abs(x.dot(wp)) / denom;
}

} // namespace

cxd LaurentPoly::value(cxd z) const {
    // Horner on z^order * P(z), then divide the power back out.
    cxd acc{0.0, 0.0};
    for (Index i = coeffs.size() - 1; i >= 0; --i)
        acc = acc * z + coeffs[i];
    return acc / std::pow(z, order);
}

CMat build_blocking_matrix(const CMat& w, const CVec& x) {
    if (x.size() != w.cols())
        throw std::invalid_argument("build_blocking_matrix: signature length must equal the beam count");
    CMat v = w;
    v.row(0) -= x.adjoint();
    return v;
}

CMat build_projection_matrix(const CMat& w, const CVec& x) {
    if (x.size() != w.cols())
        throw std::invalid_argument("build_projection_matrix: signature length must equal the beam count");
    const double nx2 = x.squaredNorm();
    if (nx2 == 0.0)
        throw std::invalid_argument("build_projection_matrix: zero signature");
    const Index k = w.cols();
    const CMat perp = CMat::Identity(k, k) - (x * x.adjoint()) / nx2;
    return w * perp * w.adjoint();
}

LaurentPoly laurent_from_hermitian(const CMat& g) {
    if (g.rows() != g.cols())
        throw std::invalid_argument("laurent_from_hermitian: matrix must be square");
    const double scale = std::max(1.0, g.cwiseAbs().maxCoeff());
    if ((g - g.adjoint()).cwiseAbs().maxCoeff() > 1e-10 * scale)
        throw std::invalid_argument("laurent_from_hermitian: matrix is not Hermitian");

    const int m = static_cast<int>(g.rows());
    LaurentPoly poly;
    poly.order = m - 1;
    poly.coeffs = CVec::Zero(2 * m - 1);
    for (int k = -(m - 1); k <= m - 1; ++k) {
        cxd sum{0.0, 0.0};
        for (int i = std::max(0, -k); i + std::max(0, k) < m; ++i)
            sum += g(i, i + k);
        poly.coeffs[k + poly.order] = sum;
    }
    return poly;
}

std::vector<cxd> find_roots(const LaurentPoly& poly) {
    std::vector<cxd> a(poly.coeffs.data(), poly.coeffs.data() + poly.coeffs.size());
    double max_mag = 0.0;
    for (const cxd& c : a)
        max_mag = std::max(max_mag, std::abs(c));
    if (max_mag == 0.0)
        throw std::invalid_argument("find_roots: all-zero polynomial");

    const double cut = kTrimRel * max_mag;
    while (a.size() > 1 && std::abs(a.back()) < cut)
        a.pop_back();
    std::size_t skip = 0;
    while (skip + 1 < a.size() && std::abs(a[skip]) < cut)
        ++skip;
    a.erase(a.begin(), a.begin() + static_cast<std::ptrdiff_t>(skip));

    const Index degree = static_cast<Index>(a.size()) - 1;
    if (degree == 0)
        return {};

    CMat companion = CMat::Zero(degree, degree);
    for (Index i = 0; i + 1 < degree; ++i)
        companion(i + 1, i) = cxd{1.0, 0.0};
    for (Index i = 0; i < degree; ++i)
        companion(i, degree - 1) = -a[static_cast<std::size_t>(i)] / a.back();
    balance_in_place(companion);

    Eigen::ComplexEigenSolver<CMat> eig(companion, /*computeEigenvectors=*/false);
    if (eig.info() != Eigen::Success)
        throw std::runtime_error("find_roots: eigenvalue iteration failed");
    const CVec& vals = eig.eigenvalues();
    return {vals.data(), vals.data() + vals.size()};
}

RootSelection select_root(const std::vector<cxd>& roots, const CVec& x, const CMat& w,
                          int candidate_count) {
    if (roots.empty())
        throw std::invalid_argument("select_root: empty root list");
    if (candidate_count < 1)
        candidate_count = 1;

    // One of each conjugate-reciprocal pair lies inside the closed disc.
    std::vector<cxd> candidates;
    for (const cxd& z : roots)
        if (std::abs(z) <= 1.0 + kCircleSlack)
            candidates.push_back(z);
    if (candidates.empty())
        throw std::runtime_error("select_root: no candidates inside the unit circle");

    std::stable_sort(candidates.begin(), candidates.end(), [](const cxd& l, const cxd& r) {
        return std::abs(1.0 - std::abs(l)) < std::abs(1.0 - std::abs(r));
    });

    const std::size_t take = std::min<std::size_t>(candidates.size(),
                                                   static_cast<std::size_t>(candidate_count));
    RootSelection best;
    best.correlation = -1.0;
    for (std::size_t i = 0; i < take; ++i) {
        const double rho = signature_correlation(candidates[i], x, w);
        if (rho > best.correlation) {
            best.root = candidates[i];
            best.circle_distance = std::abs(1.0 - std::abs(candidates[i]));
            best.correlation = rho;
        }
    }
    return best;
}

double root_to_angle(cxd root, double tx_spacing_wl) {
    if (tx_spacing_wl <= 0.0)
        throw std::invalid_argument("root_to_angle: spacing must be positive");
    if (root == cxd{0.0, 0.0})
        throw std::invalid_argument("root_to_angle: zero root has no phase");
    const double phase = std::arg(root);
    double s = -phase / (2.0 * std::numbers::pi * tx_spacing_wl);
    if (std::abs(s) > 1.0 + 1e-12)
        throw std::domain_error("root_to_angle: root phase maps outside |sin(theta)| <= 1");
    s = std::clamp(s, -1.0, 1.0);
    return std::asin(s) * 180.0 / std::numbers::pi;
}

std::vector<DoaEstimate> estimate_doas(const CMat& x, const CMat& w,
                                       const RootingOptions& opts) {
    if (x.rows() != w.cols())
        throw std::invalid_argument("estimate_doas: signature rows must equal the beam count");
    std::vector<DoaEstimate> out;
    out.reserve(static_cast<std::size_t>(x.cols()));
    for (Index l = 0; l < x.cols(); ++l) {
        try {
            const CMat g = build_projection_matrix(w, x.col(l));
            const LaurentPoly poly = laurent_from_hermitian(g);
            const std::vector<cxd> roots = find_roots(poly);
            const RootSelection sel = select_root(roots, x.col(l), w, opts.candidate_count);
            DoaEstimate est;
            est.root = sel.root;
            est.angle_deg = root_to_angle(sel.root, opts.tx_spacing_wl);
            est.circle_distance = sel.circle_distance;
            est.correlation = sel.correlation;
            est.all_roots = roots;
            out.push_back(std::move(est));
        } catch (const std::exception& e) {
            throw std::runtime_error("estimate_doas: target " + std::to_string(l) + ": " +
                                     e.what());
        }
    }
    return out;
}

std::vector<double> make_angle_grid(double lo_deg, double hi_deg, double step_deg) {
    if (step_deg <= 0.0)
        throw std::invalid_argument("make_angle_grid: step must be positive");
    if (lo_deg > hi_deg)
        throw std::invalid_argument("make_angle_grid: empty range");
    const Index count = static_cast<Index>(std::floor((hi_deg - lo_deg) / step_deg + 1e-9)) + 1;
    std::vector<double> grid(static_cast<std::size_t>(count));
    for (Index i = 0; i < count; ++i)
        grid[static_cast<std::size_t>(i)] = lo_deg + static_cast<double>(i) * step_deg;
    return grid;
}

namespace {

double blocking_power_at(const CMat& blocking, double tx_spacing_wl, double angle_deg) {
    const CVec a = transmit_steering(static_cast<int>(blocking.rows()), tx_spacing_wl, angle_deg);
    return (blocking.adjoint() * a).squaredNorm();
}

double hermitian_power_at(const CMat& g, double tx_spacing_wl, double angle_deg) {
    const CVec a = transmit_steering(static_cast<int>(g.rows()), tx_spacing_wl, angle_deg);
    return a.dot(g * a).real();
}

// Argmin with ties toward the smaller angle; grids are ascending.
double argmin_angle(const std::vector<double>& grid, const std::vector<double>& values) {
    std::size_t best = 0;
    for (std::size_t i = 1; i < values.size(); ++i)
        if (values[i] < values[best])
            best = i;
    return grid[best];
}

} // namespace

std::vector<double> beampattern_power(const CMat& blocking, double tx_spacing_wl,
                                      const std::vector<double>& grid_deg) {
    if (grid_deg.empty())
        throw std::invalid_argument("beampattern_power: empty grid");
    std::vector<double> out(grid_deg.size());
    const std::ptrdiff_t n = static_cast<std::ptrdiff_t>(grid_deg.size());
#pragma omp parallel for schedule(static)
    for (std::ptrdiff_t i = 0; i < n; ++i)
        out[static_cast<std::size_t>(i)] =
            blocking_power_at(blocking, tx_spacing_wl, grid_deg[static_cast<std::size_t>(i)]);
    return out;
}

std::vector<double> beampattern_power_hermitian(const CMat& g, double tx_spacing_wl,
                                                const std::vector<double>& grid_deg) {
    if (grid_deg.empty())
        throw std::invalid_argument("beampattern_power_hermitian: empty grid");
    std::vector<double> out(grid_deg.size());
    const std::ptrdiff_t n = static_cast<std::ptrdiff_t>(grid_deg.size());
#pragma omp parallel for schedule(static)
    for (std::ptrdiff_t i = 0; i < n; ++i)
        out[static_cast<std::size_t>(i)] =
            hermitian_power_at(g, tx_spacing_wl, grid_deg[static_cast<std::size_t>(i)]);
    return out;
}

std::vector<double> power_to_db(const std::vector<double>& power) {
    double peak = 0.0;
    for (double p : power)
        peak = std::max(peak, p);
    std::vector<double> db(power.size(), 0.0);
    if (peak <= 0.0)
        return db;
    const double floor_lin = peak * 1e-30;
    for (std::size_t i = 0; i < power.size(); ++i)
        db[i] = 10.0 * std::log10(std::max(power[i], floor_lin) / peak);
    return db;
}

std::vector<double> transmit_beampattern(const CMat& blocking, double tx_spacing_wl,
                                         const std::vector<double>& grid_deg) {
    return power_to_db(beampattern_power(blocking, tx_spacing_wl, grid_deg));
}

double grid_oracle(const CMat& g, double tx_spacing_wl, double grid_step_deg) {
    const std::vector<double> grid = make_angle_grid(-90.0, 90.0, grid_step_deg);
    return argmin_angle(grid, beampattern_power_hermitian(g, tx_spacing_wl, grid));
}

namespace serial {

std::vector<double> beampattern_power(const CMat& blocking, double tx_spacing_wl,
                                      const std::vector<double>& grid_deg) {
    if (grid_deg.empty())
        throw std::invalid_argument("beampattern_power: empty grid");
    std::vector<double> out(grid_deg.size());
    for (std::size_t i = 0; i < grid_deg.size(); ++i)
        out[i] = blocking_power_at(blocking, tx_spacing_wl, grid_deg[i]);
    return out;
}

std::vector<double> beampattern_power_hermitian(const CMat& g, double tx_spacing_wl,
                                                const std::vector<double>& grid_deg) {
    if (grid_deg.empty())
        throw std::invalid_argument("beampattern_power_hermitian: empty grid");
    std::vector<double> out(grid_deg.size());
    for (std::size_t i = 0; i < grid_deg.size(); ++i)
        out[i] = hermitian_power_at(g, tx_spacing_wl, grid_deg[i]);
    return out;
}

double grid_oracle(const CMat& g, double tx_spacing_wl, double grid_step_deg) {
    const std::vector<double> grid = make_angle_grid(-90.0, 90.0, grid_step_deg);
    return argmin_angle(grid, serial::beampattern_power_hermitian(g, tx_spacing_wl, grid));
}

} // namespace serial

} // namespace tbdoa
