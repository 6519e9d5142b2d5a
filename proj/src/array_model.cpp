#include "tbdoa/array_model.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "tbdoa/random.hpp"

namespace tbdoa {

namespace {

constexpr double kDegToRad = std::numbers::pi / 180.0;

CVec steering_from_positions(const RVec& positions_wl, double angle_deg) {
    if (std::abs(angle_deg) > 90.0)
        throw std::invalid_argument("steering: |angle| must be <= 90 degrees");
    const double s = std::sin(angle_deg * kDegToRad);
    CVec v(positions_wl.size());
    for (Index i = 0; i < v.size(); ++i) {
        const double phase = -2.0 * std::numbers::pi * positions_wl[i] * s;
        v[i] = cxd{std::cos(phase), std::sin(phase)};
    }
    return v;
}

} // namespace

ArrayGeometry ArrayGeometry::random_linear(int tx_count, double tx_spacing_wl, int rx_count,
                                           double aperture_wl, std::uint64_t geometry_seed) {
    if (rx_count < 1)
        throw std::invalid_argument("ArrayGeometry: need at least one receive element");
    RandomStream rng(geometry_seed);
    std::vector<double> coords(static_cast<std::size_t>(rx_count), 0.0);
    for (int i = 1; i < rx_count; ++i)
        coords[static_cast<std::size_t>(i)] = rng.uniform(0.0, aperture_wl);
    std::sort(coords.begin(), coords.end());
    ArrayGeometry g;
    g.tx_count = tx_count;
    g.tx_spacing_wl = tx_spacing_wl;
    g.rx_coords_wl = Eigen::Map<const RVec>(coords.data(), rx_count);
    g.aperture_wl = aperture_wl;
    g.validate();
    return g;
}

void ArrayGeometry::validate() const {
    if (tx_count < 2)
        throw std::invalid_argument("ArrayGeometry: need at least two transmit elements");
    if (tx_spacing_wl <= 0.0)
        throw std::invalid_argument("ArrayGeometry: transmit spacing must be positive");
    if (rx_coords_wl.size() < 1)
        throw std::invalid_argument("ArrayGeometry: need at least one receive element");
    if (rx_coords_wl[0] != 0.0)
        throw std::invalid_argument("ArrayGeometry: first receive coordinate must be 0");
    for (Index i = 0; i < rx_coords_wl.size(); ++i)
        if (rx_coords_wl[i] < 0.0 || rx_coords_wl[i] > aperture_wl)
            throw std::invalid_argument("ArrayGeometry: receive coordinates must lie in [0, aperture]");
}

void Scene::validate() const {
    if (targets.empty())
        throw std::invalid_argument("Scene: need at least one target");
    for (std::size_t i = 0; i < targets.size(); ++i) {
        if (std::abs(targets[i].angle_deg) >= 90.0)
            throw std::invalid_argument("Scene: target angles must satisfy |angle| < 90");
        for (std::size_t j = i + 1; j < targets.size(); ++j)
            if (targets[i].angle_deg == targets[j].angle_deg)
                throw std::invalid_argument("Scene: target angles must be pairwise distinct");
    }
}

void BeamspaceMatrix::validate() const {
    if (w.cols() < 1 || w.cols() > w.rows())
        throw std::invalid_argument("BeamspaceMatrix: need 1 <= K <= M");
    const CMat gram = w.adjoint() * w;
    const double dev = (gram - CMat::Identity(w.cols(), w.cols())).cwiseAbs().maxCoeff();
    if (dev > 1e-10)
        throw std::invalid_argument("BeamspaceMatrix: columns are not orthonormal");
}

CVec transmit_steering(int count, double spacing_wl, double angle_deg) {
    RVec positions(count);
    for (int m = 0; m < count; ++m)
        positions[m] = spacing_wl * m;
    return steering_from_positions(positions, angle_deg);
}

CVec transmit_steering(const ArrayGeometry& g, double angle_deg) {
    return transmit_steering(g.tx_count, g.tx_spacing_wl, angle_deg);
}

CVec receive_steering(const ArrayGeometry& g, double angle_deg) {
    return steering_from_positions(g.rx_coords_wl, angle_deg);
}

double snr_to_noise_variance(double snr_db) { return std::pow(10.0, -snr_db / 10.0); }

BeamspaceMatrix design_beamspace(const ArrayGeometry& g, double sector_lo_deg,
                                 double sector_hi_deg, int beam_count, double grid_step_deg) {
    if (beam_count < 1 || beam_count > g.tx_count)
        throw std::invalid_argument("design_beamspace: need 1 <= K <= M");
    if (sector_lo_deg > sector_hi_deg)
        throw std::invalid_argument("design_beamspace: empty sector");
    if (sector_lo_deg <= -90.0 || sector_hi_deg >= 90.0)
        throw std::invalid_argument("design_beamspace: sector must lie inside (-90, 90)");
    if (grid_step_deg <= 0.0)
        throw std::invalid_argument("design_beamspace: grid step must be positive");

    const int m = g.tx_count;
    const int points = static_cast<int>(std::floor((sector_hi_deg - sector_lo_deg) / grid_step_deg + 1e-9)) + 1;
    CMat corr = CMat::Zero(m, m);
    for (int i = 0; i < points; ++i) {
        const CVec a = transmit_steering(g, sector_lo_deg + i * grid_step_deg);
        corr += a * a.adjoint();
    }
    corr /= static_cast<double>(points);

    Eigen::SelfAdjointEigenSolver<CMat> eig(corr);
    if (eig.info() != Eigen::Success)
        throw std::runtime_error("design_beamspace: eigendecomposition failed");

    // Eigen returns eigenvalues ascending; take the top K, descending.
    CMat w(m, beam_count);
    for (int k = 0; k < beam_count; ++k)
        w.col(k) = eig.eigenvectors().col(m - 1 - k);

    // Fix the arbitrary eigenvector phases: largest-magnitude entry real positive.
    for (int k = 0; k < beam_count; ++k) {
        Index peak = 0;
        double best = -1.0;
        for (Index i = 0; i < m; ++i) {
            const double mag = std::abs(w(i, k));
            if (mag > best) {
                best = mag;
                peak = i;
            }
        }
        if (best > 0.0)
            w.col(k) *= std::conj(w(peak, k)) / best;
    }

    BeamspaceMatrix bs{w, sector_lo_deg, sector_hi_deg};
    bs.validate();
    return bs;
}

FactorTriple model_factors(const ArrayGeometry& g, const Scene& scene, const CMat& w,
                           int pulses) {
    g.validate();
    scene.validate();
    if (w.rows() != g.tx_count)
        throw std::invalid_argument("model_factors: beamspace rows must equal the transmit count");
    if (pulses < 1)
        throw std::invalid_argument("model_factors: need at least one pulse");

    const int l = scene.size();
    FactorTriple f;
    f.x.resize(w.cols(), l);
    f.b.resize(g.rx_count(), l);
    f.c.resize(pulses, l);
    for (int t = 0; t < l; ++t) {
        const Target& tgt = scene.targets[static_cast<std::size_t>(t)];
        f.x.col(t) = w.adjoint() * transmit_steering(g, tgt.angle_deg);
        f.b.col(t) = receive_steering(g, tgt.angle_deg);
        for (int q = 0; q < pulses; ++q) {
            // Pulse index runs 1..Q in the Doppler phasor.
            const double phase = 2.0 * std::numbers::pi * tgt.doppler * (q + 1);
            f.c(q, t) = tgt.reflection * cxd{std::cos(phase), std::sin(phase)};
        }
    }
    return f;
}

Tensor3 simulate_cpi(const ArrayGeometry& g, const Scene& scene, const CMat& w,
                     const SimulationConfig& cfg) {
    if (cfg.pulses < 1)
        throw std::invalid_argument("simulate_cpi: need at least one pulse");
    Tensor3 t = cp_reconstruct(model_factors(g, scene, w, cfg.pulses));
    const double sigma = std::sqrt(snr_to_noise_variance(cfg.snr_db));
    RandomStream rng(cfg.seed);
    for (Index i = 0; i < t.size(); ++i)
        t.data()[i] += sigma * rng.complex_normal();
    return t;
}

} // namespace tbdoa
