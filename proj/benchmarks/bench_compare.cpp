// Wall-time comparison of the OpenMP kernels against their serial reference
// twins, with an equality check: the two paths must produce bit-identical
// results, so the speedup is free of any numerical caveat.

#include <chrono>
#include <cstdio>
#include <string>
#include <vector>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "tbdoa/array_model.hpp"
#include "tbdoa/doa.hpp"
#include "tbdoa/experiments.hpp"

using namespace tbdoa;

namespace {

template <typename F>
double time_call(F&& f) {
    const auto start = std::chrono::steady_clock::now();
    f();
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

void report(const std::string& name, double serial_s, double parallel_s, bool identical) {
    std::printf("%-28s %10.3f s %10.3f s %7.2fx   %s\n", name.c_str(), serial_s, parallel_s,
                serial_s / parallel_s, identical ? "identical" : "MISMATCH");
}

} // namespace

int main() {
    McConfig cfg;
    cfg.scene.angles_deg = {-15.0, 15.0};
    cfg.scene.dopplers = {0.1, -0.25};
    cfg.snr_grid_db = {0.0, 10.0};
    cfg.trials = 32;

    const ArrayGeometry g = cfg.make_geometry();
    const BeamspaceMatrix bs = cfg.make_beamspace(g);

#ifdef _OPENMP
    std::printf("threads: %d\n", omp_get_max_threads());
#else
    std::printf("threads: 1 (OpenMP disabled)\n");
#endif
    std::printf("%-28s %12s %12s %9s\n", "kernel", "serial", "parallel", "speedup");

    {
        const CVec x = bs.w.adjoint() * transmit_steering(g, 15.0);
        const CMat blocking = build_blocking_matrix(bs.w, x);
        const std::vector<double> grid = make_angle_grid(-90.0, 90.0, 0.002);
        std::vector<double> serial_out, parallel_out;
        const double ts = time_call([&] { serial_out = serial::beampattern_power(blocking, 0.5, grid); });
        const double tp = time_call([&] { parallel_out = beampattern_power(blocking, 0.5, grid); });
        report("beampattern 90001 angles", ts, tp, serial_out == parallel_out);
    }

    {
        const CVec x = bs.w.adjoint() * transmit_steering(g, 7.0);
        const CMat proj = build_projection_matrix(bs.w, x);
        double serial_angle = 0.0, parallel_angle = 0.0;
        const double ts = time_call([&] { serial_angle = serial::grid_oracle(proj, 0.5, 0.001); });
        const double tp = time_call([&] { parallel_angle = grid_oracle(proj, 0.5, 0.001); });
        report("grid oracle 0.001 deg", ts, tp, serial_angle == parallel_angle);
    }

    {
        RmseReport serial_report, parallel_report;
        const double ts = time_call([&] { serial_report = serial::run_rmse_sweep(cfg); });
        const double tp = time_call([&] { parallel_report = run_rmse_sweep(cfg); });
        bool identical = serial_report.points.size() == parallel_report.points.size();
        for (std::size_t i = 0; identical && i < serial_report.points.size(); ++i)
            identical = serial_report.points[i].rmse_deg == parallel_report.points[i].rmse_deg &&
                        serial_report.points[i].failures == parallel_report.points[i].failures;
        report("rmse sweep 2x32 trials", ts, tp, identical);
    }

    return 0;
}
