#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <random>
#include <set>
#include <sstream>
#include <string>

#include <sys/wait.h>
#include <unistd.h>

#include "doctest.h"
#include "json.hpp"

#include "tbdoa/array_model.hpp"
#include "tbdoa/cli.hpp"

using namespace tbdoa;
namespace fs = std::filesystem;

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

/// Fresh directory under the system temp root, removed on scope exit.
struct TempDir {
    fs::path path;

    explicit TempDir(const std::string& tag) {
        static int counter = 0;
        path = fs::temp_directory_path() /
               ("tbdoa_" + tag + "_" + std::to_string(::getpid()) + "_" + std::to_string(counter++));
        fs::create_directories(path);
    }
    ~TempDir() {
        std::error_code ec;
        fs::remove_all(path, ec);
    }
    std::string str() const { return path.string(); }
};

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    REQUIRE(in.good());
    std::ostringstream out;
    out << in.rdbuf();
    return out.str();
}

std::string first_line(const std::string& text) {
    return text.substr(0, text.find('\n'));
}

/// Small config for fast in-process subcommand runs.
RunConfig quick_config(const std::string& out_dir) {
    RunConfig cfg = default_run_config();
    cfg.mc.trials = 4;
    cfg.mc.snr_grid_db = {0.0, 20.0};
    cfg.out_dir = out_dir;
    return cfg;
}

int run_binary(const std::string& args, const fs::path& capture) {
    const std::string cmd = std::string(TBDOA_BIN) + " " + args + " > " + capture.string() + " 2>&1";
    const int status = std::system(cmd.c_str());
    REQUIRE(status != -1);
    return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

} // namespace

TEST_CASE("format_g emits compact 12-significant-digit numbers") {
    CHECK(format_g(0.5) == "0.5");
    CHECK(format_g(-10.0) == "-10");
    CHECK(format_g(1.0 / 3.0) == "0.333333333333");
    CHECK(format_g(1e-7) == "1e-07");
    // Formatted values are fixed points of a read/format cycle.
    for (const std::string s : {"0.333333333333", "-1.25e-05", "17", "2.99999999999"})
        CHECK(format_g(std::strtod(s.c_str(), nullptr)) == s);
}

TEST_CASE("default configuration mirrors the documented setup") {
    const RunConfig cfg = default_run_config();
    CHECK(cfg.mc.tx_count == 10);
    CHECK(cfg.mc.rx_count == 10);
    CHECK(cfg.mc.beam_count == 4);
    CHECK(cfg.mc.pulses == 64);
    CHECK(cfg.mc.tx_spacing_wl == 0.5);
    CHECK(cfg.mc.aperture_wl == 5.0);
    CHECK(cfg.mc.sector_lo_deg == -15.0);
    CHECK(cfg.mc.sector_hi_deg == 15.0);
    CHECK(cfg.mc.trials == 500);
    CHECK(cfg.mc.scene.angles_deg == std::vector<double>{-15.0, 15.0});
    CHECK(cfg.mc.scene.dopplers == std::vector<double>{0.1, -0.25});
    CHECK(cfg.mc.snr_grid_db == std::vector<double>{-10.0, 0.0, 10.0, 20.0});
    CHECK(std::isinf(cfg.snr_db));
    CHECK(cfg.out_dir == "out");
    CHECK_NOTHROW(cfg.validate());
}

TEST_CASE("an empty config file leaves every default untouched") {
    RunConfig cfg = default_run_config();
    apply_config_text(cfg, "");
    apply_config_text(cfg, "# only comments\n; and more\n\n");
    const RunConfig ref = default_run_config();
    CHECK(cfg.mc.tx_count == ref.mc.tx_count);
    CHECK(cfg.mc.trials == ref.mc.trials);
    CHECK(cfg.mc.scene.angles_deg == ref.mc.scene.angles_deg);
    CHECK(cfg.mc.snr_grid_db == ref.mc.snr_grid_db);
    CHECK(cfg.out_dir == ref.out_dir);
}

TEST_CASE("a full config file reaches every section") {
    RunConfig cfg = default_run_config();
    apply_config_text(cfg,
                      "# sample\n"
                      "[array]\n"
                      "m = 12\n"
                      "n = 8\n"
                      "k = 5\n"
                      "d_t = 0.4\n"
                      "aperture = 6.5\n"
                      "geometry_seed = 11\n"
                      "[sector]\n"
                      "lo = -20\n"
                      "hi = 20\n"
                      "design_grid_step = 0.2\n"
                      "[scene]\n"
                      "targets = -5, 5\n"
                      "dopplers = 0.05, -0.1\n"
                      "[signal]\n"
                      "q = 32\n"
                      "snr = 7.5\n"
                      "[cp]\n"
                      "max_iter = 200\n"
                      "tol = 1e-6\n"
                      "init = random\n"
                      "[mc]\n"
                      "trials = 50\n"
                      "snr_grid = -5, 0, inf\n"
                      "master_seed = 99\n"
                      "[io]\n"
                      "out = runs/exp1\n"
                      "; done\n");
    CHECK(cfg.mc.tx_count == 12);
    CHECK(cfg.mc.rx_count == 8);
    CHECK(cfg.mc.beam_count == 5);
    CHECK(cfg.mc.tx_spacing_wl == 0.4);
    CHECK(cfg.mc.aperture_wl == 6.5);
    CHECK(cfg.mc.geometry_seed == 11);
    CHECK(cfg.mc.sector_lo_deg == -20.0);
    CHECK(cfg.mc.sector_hi_deg == 20.0);
    CHECK(cfg.mc.design_grid_step_deg == 0.2);
    CHECK(cfg.mc.scene.angles_deg == std::vector<double>{-5.0, 5.0});
    CHECK(cfg.mc.scene.dopplers == std::vector<double>{0.05, -0.1});
    CHECK(cfg.mc.pulses == 32);
    CHECK(cfg.snr_db == 7.5);
    CHECK(cfg.mc.cp_max_iter == 200);
    CHECK(cfg.mc.cp_tol == 1e-6);
    CHECK(cfg.mc.cp_init == CpInit::Random);
    CHECK(cfg.mc.trials == 50);
    REQUIRE(cfg.mc.snr_grid_db.size() == 3);
    CHECK(cfg.mc.snr_grid_db[0] == -5.0);
    CHECK(cfg.mc.snr_grid_db[1] == 0.0);
    CHECK(std::isinf(cfg.mc.snr_grid_db[2]));
    CHECK(cfg.mc.master_seed == 99);
    CHECK(cfg.out_dir == "runs/exp1");
    CHECK_NOTHROW(cfg.validate());
}

TEST_CASE("config errors carry the offending line") {
    RunConfig cfg = default_run_config();
    CHECK_THROWS_WITH_AS(apply_config_text(cfg, "[array]\nbogus = 3\n"),
                         doctest::Contains("line 2"), std::invalid_argument);
    CHECK_THROWS_WITH_AS(apply_config_text(cfg, "[nowhere]\nx = 1\n"),
                         doctest::Contains("unknown section"), std::invalid_argument);
    CHECK_THROWS_WITH_AS(apply_config_text(cfg, "[array]\nm = twelve\n"),
                         doctest::Contains("line 2"), std::invalid_argument);
    CHECK_THROWS_WITH_AS(apply_config_text(cfg, "[array]\njust words\n"),
                         doctest::Contains("key=value"), std::invalid_argument);
    CHECK_THROWS_WITH_AS(apply_config_text(cfg, "m = 12\n"),
                         doctest::Contains("outside"), std::invalid_argument);
}

TEST_CASE("an oversized beam count fails validation when loading") {
    TempDir tmp("cfg");
    const fs::path cfg_path = tmp.path / "bad.cfg";
    std::ofstream(cfg_path) << "[array]\nk = 20\n";
    FlagOverrides overrides;
    overrides.config_path = cfg_path.string();
    CHECK_THROWS_AS(load_run_config(overrides), std::invalid_argument);
}

TEST_CASE("flag overrides win over file values") {
    RunConfig cfg = default_run_config();
    FlagOverrides overrides;
    overrides.snr_db = "5";
    overrides.seed = 42;
    overrides.trials = 7;
    overrides.out_dir = "elsewhere";
    overrides.beam_count = 6;
    overrides.input_path = "t.csv";
    apply_overrides(cfg, overrides);
    CHECK(cfg.snr_db == 5.0);
    CHECK(cfg.mc.master_seed == 42);
    CHECK(cfg.mc.trials == 7);
    CHECK(cfg.out_dir == "elsewhere");
    CHECK(cfg.mc.beam_count == 6);
    CHECK(cfg.input_path == "t.csv");

    overrides = {};
    overrides.snr_db = "inf";
    apply_overrides(cfg, overrides);
    CHECK(std::isinf(cfg.snr_db));

    // Changing the target count keeps the Doppler list aligned.
    overrides = {};
    overrides.targets = "-3, 0, 3";
    apply_overrides(cfg, overrides);
    CHECK(cfg.mc.scene.angles_deg == std::vector<double>{-3.0, 0.0, 3.0});
    CHECK(cfg.mc.scene.dopplers == std::vector<double>{0.1, -0.25, 0.0});
}

TEST_CASE("tensor CSV round-trips values and bytes") {
    TempDir tmp("tensor");
    Tensor3 t(2, 3, 2);
    std::mt19937 gen(7);
    std::uniform_real_distribution<double> dist(-1.0, 1.0);
    for (Index i = 0; i < t.size(); ++i)
        t.data()[i] = cxd{dist(gen), dist(gen)};

    const fs::path p1 = tmp.path / "a.csv";
    write_tensor_csv(p1.string(), t);
    const Tensor3 back = read_tensor_csv(p1.string());
    REQUIRE(back.dim(0) == 2);
    REQUIRE(back.dim(1) == 3);
    REQUIRE(back.dim(2) == 2);
    for (Index i = 0; i < t.size(); ++i)
        CHECK(std::abs(back.data()[i] - t.data()[i]) < 1e-12);

    // A rewrite of what was read reproduces the file byte for byte.
    const fs::path p2 = tmp.path / "b.csv";
    write_tensor_csv(p2.string(), back);
    CHECK(slurp(p1) == slurp(p2));

    std::ofstream(tmp.path / "bad.csv") << "k,n,q,re,im\n0,0,0,1,0\n0,0,0,2,0\n";
    CHECK_THROWS_AS(read_tensor_csv((tmp.path / "bad.csv").string()), std::runtime_error);
    std::ofstream(tmp.path / "gap.csv") << "k,n,q,re,im\n0,0,0,1,0\n1,1,0,2,0\n";
    CHECK_THROWS_AS(read_tensor_csv((tmp.path / "gap.csv").string()), std::runtime_error);
    std::ofstream(tmp.path / "head.csv") << "a,b\n";
    CHECK_THROWS_AS(read_tensor_csv((tmp.path / "head.csv").string()), std::runtime_error);
}

TEST_CASE("simulate then estimate recovers a noiseless scene in process") {
    TempDir sim_dir("sim");
    RunConfig cfg = quick_config(sim_dir.str());
    REQUIRE(run_subcommand("simulate", cfg) == 0);
    CHECK(fs::exists(sim_dir.path / "manifest.json"));
    const fs::path tensor_path = sim_dir.path / "tensor.csv";
    REQUIRE(fs::exists(tensor_path));
    CHECK(first_line(slurp(tensor_path)) == "k,n,q,re,im");

    const nlohmann::json manifest = nlohmann::json::parse(slurp(sim_dir.path / "manifest.json"));
    CHECK(manifest.at("subcommand") == "simulate");
    CHECK(manifest.at("array").at("m") == 10);
    CHECK(manifest.at("array").at("rx_coords_wl").size() == 10);
    CHECK(manifest.at("signal").at("snr_db") == "inf");

    TempDir est_dir("est");
    RunConfig est_cfg = quick_config(est_dir.str());
    est_cfg.input_path = tensor_path.string();
    REQUIRE(run_subcommand("estimate", est_cfg) == 0);
    const nlohmann::json est = nlohmann::json::parse(slurp(est_dir.path / "estimates.json"));
    REQUIRE(est.at("angles_deg").size() == 2);
    CHECK(std::abs(est.at("angles_deg")[0].get<double>() - (-15.0)) < 1e-3);
    CHECK(std::abs(est.at("angles_deg")[1].get<double>() - 15.0) < 1e-3);
    CHECK(est.at("converged").get<bool>());
    CHECK(est.at("fit").get<double>() >= 1.0 - 1e-6);
    CHECK(est.at("targets").size() == 2);
}

TEST_CASE("estimate without an input tensor fails with an error record") {
    TempDir tmp("noinput");
    RunConfig cfg = quick_config(tmp.str());
    CHECK(run_subcommand("estimate", cfg) == 1);
    const nlohmann::json err = nlohmann::json::parse(slurp(tmp.path / "error.json"));
    CHECK(err.at("subcommand") == "estimate");
    CHECK(err.at("error").get<std::string>().find("input") != std::string::npos);
}

TEST_CASE("rmse-sweep writes the documented schema") {
    TempDir tmp("rmse");
    RunConfig cfg = quick_config(tmp.str());
    REQUIRE(run_subcommand("rmse-sweep", cfg) == 0);
    const std::string csv = slurp(tmp.path / "rmse.csv");
    CHECK(first_line(csv) == "snr_db,rmse_deg,trials,failures");
    CHECK(std::count(csv.begin(), csv.end(), '\n') == 3); // header + 2 SNR points
    CHECK(fs::exists(tmp.path / "manifest.json"));
}

TEST_CASE("resolution-sweep writes the documented schema") {
    TempDir tmp("resolution");
    RunConfig cfg = quick_config(tmp.str());
    cfg.mc.scene.angles_deg = {10.0, 11.0};
    cfg.mc.snr_grid_db = {20.0};
    REQUIRE(run_subcommand("resolution-sweep", cfg) == 0);
    const std::string csv = slurp(tmp.path / "resolution.csv");
    CHECK(first_line(csv) == "snr_db,prob_resolution,trials,failures");
    CHECK(std::count(csv.begin(), csv.end(), '\n') == 2);
}

TEST_CASE("single-shot writes roots, patterns and estimates") {
    TempDir tmp("shot");
    RunConfig cfg = quick_config(tmp.str());
    REQUIRE(run_subcommand("single-shot", cfg) == 0);

    std::istringstream roots(slurp(tmp.path / "roots.csv"));
    std::string line;
    REQUIRE(std::getline(roots, line));
    CHECK(line == "target,re,im,abs,selected");
    int rows_t1 = 0, rows_t2 = 0, selected_t1 = 0, selected_t2 = 0;
    while (std::getline(roots, line)) {
        if (line.empty())
            continue;
        int target = 0, selected = 0;
        double re = 0, im = 0, mag = 0;
        REQUIRE(std::sscanf(line.c_str(), "%d,%lf,%lf,%lf,%d", &target, &re, &im, &mag, &selected) == 5);
        if (target == 1) {
            ++rows_t1;
            selected_t1 += selected;
        } else {
            REQUIRE(target == 2);
            ++rows_t2;
            selected_t2 += selected;
        }
    }
    CHECK(rows_t1 == 18);
    CHECK(rows_t2 == 18);
    CHECK(selected_t1 == 1);
    CHECK(selected_t2 == 1);

    std::istringstream pattern(slurp(tmp.path / "pattern.csv"));
    REQUIRE(std::getline(pattern, line));
    CHECK(line == "target,theta_deg,power_db");
    std::set<int> pattern_targets;
    int pattern_rows = 0;
    while (std::getline(pattern, line)) {
        if (line.empty())
            continue;
        ++pattern_rows;
        pattern_targets.insert(std::atoi(line.c_str()));
    }
    CHECK(pattern_targets == std::set<int>{0, 1, 2});
    CHECK(pattern_rows == 3 * 18001);

    CHECK(fs::exists(tmp.path / "estimates.json"));
}

TEST_CASE("beampattern writes the design view without estimating") {
    TempDir tmp("pattern");
    RunConfig cfg = quick_config(tmp.str());
    REQUIRE(run_subcommand("beampattern", cfg) == 0);
    const std::string csv = slurp(tmp.path / "pattern.csv");
    CHECK(first_line(csv) == "target,theta_deg,power_db");
    CHECK(std::count(csv.begin(), csv.end(), '\n') == 1 + 3 * 18001);
}

TEST_CASE("unknown subcommands are rejected with an error record") {
    TempDir tmp("unknown");
    RunConfig cfg = quick_config(tmp.str());
    CHECK(run_subcommand("frobnicate", cfg) == 1);
    CHECK(fs::exists(tmp.path / "error.json"));
}

TEST_CASE("repeated runs produce byte-identical outputs") {
    TempDir a("rep_a");
    TempDir b("rep_b");
    RunConfig cfg = quick_config(a.str());
    cfg.mc.trials = 3;
    REQUIRE(run_subcommand("rmse-sweep", cfg) == 0);
    REQUIRE(run_subcommand("single-shot", cfg) == 0);
    cfg.out_dir = b.str();
    REQUIRE(run_subcommand("rmse-sweep", cfg) == 0);
    REQUIRE(run_subcommand("single-shot", cfg) == 0);
    for (const char* name : {"rmse.csv", "roots.csv", "pattern.csv", "estimates.json"})
        CHECK(slurp(a.path / name) == slurp(b.path / name));
    // Manifests differ only in the out path, so compare the rest field-wise.
    nlohmann::json ma = nlohmann::json::parse(slurp(a.path / "manifest.json"));
    nlohmann::json mb = nlohmann::json::parse(slurp(b.path / "manifest.json"));
    ma.erase("io");
    mb.erase("io");
    CHECK(ma == mb);
}

TEST_CASE("the binary runs simulate and estimate end to end") {
    TempDir tmp("exe");
    const fs::path sim_out = tmp.path / "sim";
    const int sim_rc = run_binary("simulate --out " + sim_out.string() + " --trials 3",
                                  tmp.path / "sim_log.txt");
    REQUIRE(sim_rc == 0);
    REQUIRE(fs::exists(sim_out / "tensor.csv"));

    const fs::path est_out = tmp.path / "est";
    const fs::path est_log = tmp.path / "est_log.txt";
    const int est_rc = run_binary("estimate --input " + (sim_out / "tensor.csv").string() +
                                      " --out " + est_out.string(),
                                  est_log);
    REQUIRE(est_rc == 0);
    const std::string log = slurp(est_log);
    double a0 = 0.0, a1 = 0.0;
    REQUIRE(std::sscanf(log.c_str(), "target 0: theta_hat = %lf deg\ntarget 1: theta_hat = %lf deg",
                        &a0, &a1) == 2);
    CHECK(std::abs(a0 - (-15.0)) < 1e-3);
    CHECK(std::abs(a1 - 15.0) < 1e-3);
}

TEST_CASE("the binary reports config failures with exit code 2") {
    TempDir tmp("badcfg");
    const fs::path cfg_path = tmp.path / "bad.cfg";
    std::ofstream(cfg_path) << "[array]\nk = 20\n";
    const fs::path out = tmp.path / "out";
    const int rc = run_binary("single-shot --config " + cfg_path.string() + " --out " + out.string(),
                              tmp.path / "log.txt");
    CHECK(rc == 2);
    const nlohmann::json err = nlohmann::json::parse(slurp(out / "error.json"));
    CHECK(err.at("subcommand") == "config");
}

TEST_CASE("the binary rejects unknown flags") {
    TempDir tmp("badflag");
    const int rc = run_binary("simulate --frobnicate 3", tmp.path / "log.txt");
    CHECK(rc != 0);
}
