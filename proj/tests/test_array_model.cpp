#include <cmath>
#include <numbers>
#include <random>

#include "doctest.h"

#include "tbdoa/array_model.hpp"
#include "tbdoa/tensor.hpp"

using namespace tbdoa;

namespace {

ArrayGeometry paper_geometry(std::uint64_t seed = 99) {
    return ArrayGeometry::random_linear(10, 0.5, 10, 5.0, seed);
}

Scene two_target_scene() {
    Scene scene;
    scene.targets.resize(2);
    scene.targets[0] = {-15.0, cxd{0.8, -0.4}, 0.1};
    scene.targets[1] = {15.0, cxd{-0.3, 1.1}, -0.25};
    return scene;
}

} // namespace

TEST_CASE("transmit steering at broadside is all ones with first entry 1") {
    const CVec a = transmit_steering(6, 0.5, 0.0);
    for (Index m = 0; m < a.size(); ++m)
        CHECK(std::abs(a[m] - cxd{1.0, 0.0}) < 1e-15);
    CHECK(a[0] == cxd{1.0, 0.0});
}

TEST_CASE("transmit steering hits the exact half-wavelength 30 degree case") {
    const CVec a = transmit_steering(2, 0.5, 30.0);
    CHECK(std::abs(a[0] - cxd{1.0, 0.0}) < 1e-15);
    CHECK(std::abs(a[1] - cxd{0.0, -1.0}) < 1e-12);
}

TEST_CASE("steering vectors have unit modulus and conjugate symmetry in the angle") {
    const ArrayGeometry g = paper_geometry();
    for (double theta : {-72.5, -10.0, 3.3, 41.0, 88.0}) {
        const CVec a = transmit_steering(g, theta);
        const CVec am = transmit_steering(g, -theta);
        const CVec b = receive_steering(g, theta);
        const CVec bm = receive_steering(g, -theta);
        for (Index i = 0; i < a.size(); ++i) {
            CHECK(std::abs(std::abs(a[i]) - 1.0) < 1e-12);
            CHECK(std::abs(am[i] - std::conj(a[i])) < 1e-12);
        }
        for (Index i = 0; i < b.size(); ++i) {
            CHECK(std::abs(std::abs(b[i]) - 1.0) < 1e-12);
            CHECK(std::abs(bm[i] - std::conj(b[i])) < 1e-12);
        }
        CHECK(a[0] == cxd{1.0, 0.0});
        CHECK(b[0] == cxd{1.0, 0.0});
    }
}

TEST_CASE("receive steering matches the two-element exact case") {
    ArrayGeometry g;
    g.tx_count = 2;
    g.tx_spacing_wl = 0.5;
    g.rx_coords_wl = RVec(2);
    g.rx_coords_wl << 0.0, 0.5;
    g.aperture_wl = 0.5;
    const CVec b = receive_steering(g, 30.0);
    CHECK(std::abs(b[0] - cxd{1.0, 0.0}) < 1e-15);
    CHECK(std::abs(b[1] - cxd{0.0, -1.0}) < 1e-12);
}

TEST_CASE("steering rejects angles beyond 90 degrees") {
    CHECK_THROWS_AS(transmit_steering(4, 0.5, 90.5), std::invalid_argument);
    CHECK_THROWS_AS(receive_steering(paper_geometry(), -91.0), std::invalid_argument);
}

TEST_CASE("random_linear pins the first coordinate and sorts the rest") {
    const ArrayGeometry g = paper_geometry(1234);
    REQUIRE(g.rx_count() == 10);
    CHECK(g.rx_coords_wl[0] == 0.0);
    for (Index i = 1; i < g.rx_coords_wl.size(); ++i) {
        CHECK(g.rx_coords_wl[i] >= g.rx_coords_wl[i - 1]);
        CHECK(g.rx_coords_wl[i] >= 0.0);
        CHECK(g.rx_coords_wl[i] <= g.aperture_wl);
    }
    const ArrayGeometry again = ArrayGeometry::random_linear(10, 0.5, 10, 5.0, 1234);
    CHECK((g.rx_coords_wl - again.rx_coords_wl).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("geometry and scene validation reject malformed inputs") {
    ArrayGeometry g = paper_geometry();
    g.tx_count = 1;
    CHECK_THROWS_AS(g.validate(), std::invalid_argument);

    g = paper_geometry();
    g.rx_coords_wl[0] = 0.25;
    CHECK_THROWS_AS(g.validate(), std::invalid_argument);

    g = paper_geometry();
    g.rx_coords_wl[9] = g.aperture_wl + 1.0;
    CHECK_THROWS_AS(g.validate(), std::invalid_argument);

    Scene scene;
    CHECK_THROWS_AS(scene.validate(), std::invalid_argument);
    scene.targets = {{90.0, cxd{1.0, 0.0}, 0.0}};
    CHECK_THROWS_AS(scene.validate(), std::invalid_argument);
    scene.targets = {{10.0, cxd{1.0, 0.0}, 0.0}, {10.0, cxd{1.0, 0.0}, 0.1}};
    CHECK_THROWS_AS(scene.validate(), std::invalid_argument);
}

TEST_CASE("snr_to_noise_variance decodes decibels") {
    CHECK(snr_to_noise_variance(0.0) == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(snr_to_noise_variance(10.0) == doctest::Approx(0.1).epsilon(1e-15));
    CHECK(snr_to_noise_variance(-10.0) == doctest::Approx(10.0).epsilon(1e-15));
    CHECK(snr_to_noise_variance(std::numeric_limits<double>::infinity()) == 0.0);
}

TEST_CASE("a degenerate sector gives the normalized steering vector beam") {
    const ArrayGeometry g = paper_geometry();
    const BeamspaceMatrix bs = design_beamspace(g, 7.0, 7.0, 1);
    REQUIRE(bs.beam_count() == 1);
    const CVec a = transmit_steering(g, 7.0);
    const double congruence = std::abs(cxd(bs.w.col(0).adjoint() * a)) / (bs.w.col(0).norm() * a.norm());
    CHECK(congruence == doctest::Approx(1.0).epsilon(1e-10));
    for (Index i = 0; i < bs.w.rows(); ++i)
        CHECK(std::abs(std::abs(bs.w(i, 0)) - 1.0 / std::sqrt(10.0)) < 1e-10);
}

TEST_CASE("designed beamspace is orthonormal and deterministic") {
    const ArrayGeometry g = paper_geometry();
    const BeamspaceMatrix bs = design_beamspace(g, -15.0, 15.0, 4);
    const CMat gram = bs.w.adjoint() * bs.w;
    CHECK((gram - CMat::Identity(4, 4)).cwiseAbs().maxCoeff() < 1e-10);

    const BeamspaceMatrix again = design_beamspace(g, -15.0, 15.0, 4);
    CHECK((bs.w - again.w).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("beamspace concentrates gain inside the sector by at least 10 dB") {
    const ArrayGeometry g = paper_geometry();
    const BeamspaceMatrix bs = design_beamspace(g, -15.0, 15.0, 4);
    // Mean gain in dB on a 0.1 degree grid, inside versus outside the sector.
    double in_sum = 0.0, out_sum = 0.0;
    int in_count = 0, out_count = 0;
    for (double theta = -90.0; theta <= 90.0 + 1e-9; theta += 0.1) {
        const double gain = (bs.w.adjoint() * transmit_steering(g, std::min(theta, 90.0))).squaredNorm();
        if (std::abs(theta) <= 15.0) {
            in_sum += 10.0 * std::log10(gain);
            ++in_count;
        } else {
            out_sum += 10.0 * std::log10(gain);
            ++out_count;
        }
    }
    const double gap_db = in_sum / in_count - out_sum / out_count;
    CHECK(gap_db >= 10.0);
}

TEST_CASE("design_beamspace rejects invalid sectors and beam counts") {
    const ArrayGeometry g = paper_geometry();
    CHECK_THROWS_AS(design_beamspace(g, -15.0, 15.0, 11), std::invalid_argument);
    CHECK_THROWS_AS(design_beamspace(g, 15.0, -15.0, 4), std::invalid_argument);
    CHECK_THROWS_AS(design_beamspace(g, -95.0, 0.0, 4), std::invalid_argument);
}

TEST_CASE("model factors expose the steering structure and Doppler modulus") {
    const ArrayGeometry g = paper_geometry();
    const BeamspaceMatrix bs = design_beamspace(g, -15.0, 15.0, 4);
    const Scene scene = two_target_scene();
    const FactorTriple f = model_factors(g, scene, bs.w, 64);
    REQUIRE(f.rank() == 2);
    for (int l = 0; l < 2; ++l) {
        const Target& tgt = scene.targets[static_cast<std::size_t>(l)];
        const CVec x_expected = bs.w.adjoint() * transmit_steering(g, tgt.angle_deg);
        CHECK((f.x.col(l) - x_expected).cwiseAbs().maxCoeff() < 1e-12);
        CHECK((f.b.col(l) - receive_steering(g, tgt.angle_deg)).cwiseAbs().maxCoeff() < 1e-12);
        for (Index q = 0; q < 64; ++q)
            CHECK(std::abs(std::abs(f.c(q, l)) - std::abs(tgt.reflection)) < 1e-12);
    }
}

TEST_CASE("noiseless single-target tensor is rank 1 with unit fit") {
    const ArrayGeometry g = paper_geometry();
    const BeamspaceMatrix bs = design_beamspace(g, -15.0, 15.0, 4);
    Scene scene;
    scene.targets = {{8.0, cxd{1.2, -0.7}, 0.15}};
    SimulationConfig cfg;
    cfg.pulses = 32;
    cfg.snr_db = std::numeric_limits<double>::infinity();
    cfg.seed = 5;
    const Tensor3 t = simulate_cpi(g, scene, bs.w, cfg);
    const FactorTriple f = model_factors(g, scene, bs.w, cfg.pulses);
    CHECK(cp_fit(t, f) >= 1.0 - 1e-12);
}

TEST_CASE("noiseless two-target tensor equals the exact model entrywise") {
    const ArrayGeometry g = paper_geometry();
    const BeamspaceMatrix bs = design_beamspace(g, -15.0, 15.0, 4);
    const Scene scene = two_target_scene();
    SimulationConfig cfg;
    cfg.pulses = 64;
    cfg.snr_db = std::numeric_limits<double>::infinity();
    cfg.seed = 6;
    const Tensor3 t = simulate_cpi(g, scene, bs.w, cfg);
    const Tensor3 exact = cp_reconstruct(model_factors(g, scene, bs.w, cfg.pulses));
    CHECK((t.data() - exact.data()).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("empirical noise variance at 0 dB is within 5 percent of 1") {
    ArrayGeometry g = ArrayGeometry::random_linear(16, 0.5, 16, 5.0, 77);
    const CMat w = CMat::Identity(16, 16);
    Scene scene;
    scene.targets = {{5.0, cxd{0.9, 0.2}, 0.12}};
    SimulationConfig cfg;
    cfg.pulses = 16;
    cfg.snr_db = 0.0;
    cfg.seed = 303;
    const Tensor3 noisy = simulate_cpi(g, scene, w, cfg);
    const Tensor3 clean = cp_reconstruct(model_factors(g, scene, w, cfg.pulses));
    const double mean_power =
        (noisy.data() - clean.data()).squaredNorm() / static_cast<double>(noisy.size());
    CHECK(mean_power > 0.95);
    CHECK(mean_power < 1.05);
}

TEST_CASE("simulate_cpi is bit-identical for a fixed seed") {
    const ArrayGeometry g = paper_geometry();
    const BeamspaceMatrix bs = design_beamspace(g, -15.0, 15.0, 4);
    const Scene scene = two_target_scene();
    SimulationConfig cfg;
    cfg.pulses = 16;
    cfg.snr_db = 5.0;
    cfg.seed = 42;
    const Tensor3 a = simulate_cpi(g, scene, bs.w, cfg);
    const Tensor3 b = simulate_cpi(g, scene, bs.w, cfg);
    CHECK((a.data() - b.data()).cwiseAbs().maxCoeff() == 0.0);
}
