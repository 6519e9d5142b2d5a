#include "tbdoa/cli.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <stdexcept>

#include "json.hpp"

#include "tbdoa/random.hpp"

namespace tbdoa {

namespace {

using nlohmann::json;

std::string trim(const std::string& s) {
    std::size_t b = 0;
    std::size_t e = s.size();
    while (b < e && std::isspace(static_cast<unsigned char>(s[b])))
        ++b;
    while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1])))
        --e;
    return s.substr(b, e - b);
}

std::string lower(std::string s) {
    std::transform(s.begin(), s.end(), s.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    return s;
}

double parse_double(const std::string& raw, const std::string& what) {
    const std::string s = trim(raw);
    char* end = nullptr;
    const double v = std::strtod(s.c_str(), &end);
    if (s.empty() || end != s.c_str() + s.size())
        throw std::invalid_argument(what + ": not a number: '" + raw + "'");
    return v;
}

// Accepts "inf" (any case) for a noiseless run.
double parse_snr(const std::string& raw, const std::string& what) {
    const std::string s = lower(trim(raw));
    if (s == "inf" || s == "+inf")
        return std::numeric_limits<double>::infinity();
    return parse_double(raw, what);
}

int parse_int(const std::string& raw, const std::string& what) {
    const double v = parse_double(raw, what);
    const int i = static_cast<int>(v);
    if (static_cast<double>(i) != v)
        throw std::invalid_argument(what + ": not an integer: '" + raw + "'");
    return i;
}

std::uint64_t parse_u64(const std::string& raw, const std::string& what) {
    const std::string s = trim(raw);
    try {
        std::size_t used = 0;
        const unsigned long long v = std::stoull(s, &used);
        if (used != s.size() || s.front() == '-')
            throw std::invalid_argument("");
        return static_cast<std::uint64_t>(v);
    } catch (const std::exception&) {
        throw std::invalid_argument(what + ": not an unsigned integer: '" + raw + "'");
    }
}

std::vector<std::string> split_commas(const std::string& raw) {
    std::vector<std::string> parts;
    std::string item;
    std::istringstream in(raw);
    while (std::getline(in, item, ','))
        parts.push_back(item);
    return parts;
}

std::vector<double> parse_double_list(const std::string& raw, const std::string& what) {
    std::vector<double> out;
    for (const std::string& part : split_commas(raw))
        out.push_back(parse_double(part, what));
    return out;
}

std::vector<double> parse_snr_list(const std::string& raw, const std::string& what) {
    std::vector<double> out;
    for (const std::string& part : split_commas(raw))
        out.push_back(parse_snr(part, what));
    return out;
}

// Round to the CSV precision so the manifest and the CSVs agree digit for
// digit.
double round12(double value) {
    if (!std::isfinite(value))
        return value;
    return std::strtod(format_g(value).c_str(), nullptr);
}

json json_number(double value) {
    if (std::isfinite(value))
        return json(round12(value));
    if (value > 0.0)
        return json("inf");
    if (value < 0.0)
        return json("-inf");
    throw std::logic_error("json_number: NaN has no representation");
}

json json_numbers(const std::vector<double>& values) {
    json arr = json::array();
    for (double v : values)
        arr.push_back(json_number(v));
    return arr;
}

void apply_key(RunConfig& cfg, const std::string& section, const std::string& key,
               const std::string& value) {
    const std::string where = "[" + section + "] " + key;
    McConfig& mc = cfg.mc;
    if (section == "array") {
        if (key == "m")
            mc.tx_count = parse_int(value, where);
        else if (key == "n")
            mc.rx_count = parse_int(value, where);
        else if (key == "k")
            mc.beam_count = parse_int(value, where);
        else if (key == "d_t")
            mc.tx_spacing_wl = parse_double(value, where);
        else if (key == "aperture")
            mc.aperture_wl = parse_double(value, where);
        else if (key == "geometry_seed")
            mc.geometry_seed = parse_u64(value, where);
        else
            throw std::invalid_argument("unknown key " + where);
    } else if (section == "sector") {
        if (key == "lo")
            mc.sector_lo_deg = parse_double(value, where);
        else if (key == "hi")
            mc.sector_hi_deg = parse_double(value, where);
        else if (key == "design_grid_step")
            mc.design_grid_step_deg = parse_double(value, where);
        else
            throw std::invalid_argument("unknown key " + where);
    } else if (section == "scene") {
        if (key == "targets")
            mc.scene.angles_deg = parse_double_list(value, where);
        else if (key == "dopplers")
            mc.scene.dopplers = parse_double_list(value, where);
        else
            throw std::invalid_argument("unknown key " + where);
    } else if (section == "signal") {
        if (key == "q")
            mc.pulses = parse_int(value, where);
        else if (key == "snr")
            cfg.snr_db = parse_snr(value, where);
        else
            throw std::invalid_argument("unknown key " + where);
    } else if (section == "cp") {
        if (key == "max_iter")
            mc.cp_max_iter = parse_int(value, where);
        else if (key == "tol")
            mc.cp_tol = parse_double(value, where);
        else if (key == "init") {
            const std::string which = lower(trim(value));
            if (which == "random")
                mc.cp_init = CpInit::Random;
            else if (which == "data-driven")
                mc.cp_init = CpInit::DataDriven;
            else
                throw std::invalid_argument(where + ": expected 'random' or 'data-driven'");
        } else
            throw std::invalid_argument("unknown key " + where);
    } else if (section == "mc") {
        if (key == "trials")
            mc.trials = parse_int(value, where);
        else if (key == "snr_grid")
            mc.snr_grid_db = parse_snr_list(value, where);
        else if (key == "master_seed")
            mc.master_seed = parse_u64(value, where);
        else
            throw std::invalid_argument("unknown key " + where);
    } else if (section == "io") {
        if (key == "out")
            cfg.out_dir = trim(value);
        else if (key == "input")
            cfg.input_path = trim(value);
        else
            throw std::invalid_argument("unknown key " + where);
    } else {
        throw std::invalid_argument("unknown section [" + section + "]");
    }
}

// Keep the Doppler list aligned with the target list after an override.
void resize_dopplers(McConfig& mc) {
    mc.scene.dopplers.resize(mc.scene.angles_deg.size(), 0.0);
}

} // namespace

void RunConfig::validate() const {
    mc.validate();
    if (std::isnan(snr_db))
        throw std::invalid_argument("RunConfig: snr must not be NaN");
    if (out_dir.empty())
        throw std::invalid_argument("RunConfig: output directory must not be empty");
}

RunConfig default_run_config() {
    RunConfig cfg;
    cfg.mc.scene.angles_deg = {-15.0, 15.0};
    cfg.mc.scene.dopplers = {0.1, -0.25};
    cfg.mc.snr_grid_db = {-10.0, 0.0, 10.0, 20.0};
    return cfg;
}

void apply_config_text(RunConfig& cfg, const std::string& text) {
    std::istringstream in(text);
    std::string line;
    std::string section;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        const std::string stripped = trim(line);
        if (stripped.empty() || stripped.front() == '#' || stripped.front() == ';')
            continue;
        try {
            if (stripped.front() == '[') {
                if (stripped.back() != ']')
                    throw std::invalid_argument("unterminated section header");
                section = lower(trim(stripped.substr(1, stripped.size() - 2)));
                if (section.empty())
                    throw std::invalid_argument("empty section name");
                continue;
            }
            const std::size_t eq = stripped.find('=');
            if (eq == std::string::npos)
                throw std::invalid_argument("expected key=value");
            if (section.empty())
                throw std::invalid_argument("key outside any [section]");
            const std::string key = lower(trim(stripped.substr(0, eq)));
            apply_key(cfg, section, key, stripped.substr(eq + 1));
        } catch (const std::exception& e) {
            throw std::invalid_argument("config line " + std::to_string(line_no) + ": " +
                                        e.what());
        }
    }
}

void apply_overrides(RunConfig& cfg, const FlagOverrides& overrides) {
    if (overrides.seed)
        cfg.mc.master_seed = *overrides.seed;
    if (overrides.snr_db)
        cfg.snr_db = parse_snr(*overrides.snr_db, "--snr");
    if (overrides.trials)
        cfg.mc.trials = *overrides.trials;
    if (overrides.out_dir)
        cfg.out_dir = *overrides.out_dir;
    if (overrides.beam_count)
        cfg.mc.beam_count = *overrides.beam_count;
    if (overrides.targets) {
        cfg.mc.scene.angles_deg = parse_double_list(*overrides.targets, "--targets");
        resize_dopplers(cfg.mc);
    }
    if (overrides.input_path)
        cfg.input_path = *overrides.input_path;
}

RunConfig load_run_config(const FlagOverrides& overrides) {
    RunConfig cfg = default_run_config();
    if (overrides.config_path) {
        std::ifstream in(*overrides.config_path);
        if (!in)
            throw std::invalid_argument("cannot open config file: " + *overrides.config_path);
        std::ostringstream text;
        text << in.rdbuf();
        apply_config_text(cfg, text.str());
    }
    apply_overrides(cfg, overrides);
    cfg.validate();
    return cfg;
}

std::string format_g(double value) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.12g", value);
    return buf;
}

void write_tensor_csv(const std::string& path, const Tensor3& t) {
    std::ofstream out(path, std::ios::binary);
    if (!out)
        throw std::runtime_error("cannot write " + path);
    out << "k,n,q,re,im\n";
    for (Index q = 0; q < t.dim(2); ++q)
        for (Index n = 0; n < t.dim(1); ++n)
            for (Index k = 0; k < t.dim(0); ++k) {
                const cxd v = t(k, n, q);
                out << k << ',' << n << ',' << q << ',' << format_g(v.real()) << ','
                    << format_g(v.imag()) << '\n';
            }
    if (!out)
        throw std::runtime_error("failed while writing " + path);
}

Tensor3 read_tensor_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in)
        throw std::runtime_error("cannot open " + path);
    std::string line;
    if (!std::getline(in, line) || trim(line) != "k,n,q,re,im")
        throw std::runtime_error(path + ": expected header k,n,q,re,im");

    struct Entry {
        Index k, n, q;
        cxd value;
    };
    std::vector<Entry> entries;
    Index dim0 = 0, dim1 = 0, dim2 = 0;
    int line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (trim(line).empty())
            continue;
        long long k = 0, n = 0, q = 0;
        double re = 0.0, im = 0.0;
        if (std::sscanf(line.c_str(), "%lld,%lld,%lld,%lf,%lf", &k, &n, &q, &re, &im) != 5 ||
            k < 0 || n < 0 || q < 0)
            throw std::runtime_error(path + " line " + std::to_string(line_no) +
                                     ": malformed tensor row");
        entries.push_back({static_cast<Index>(k), static_cast<Index>(n), static_cast<Index>(q),
                           cxd{re, im}});
        dim0 = std::max(dim0, static_cast<Index>(k) + 1);
        dim1 = std::max(dim1, static_cast<Index>(n) + 1);
        dim2 = std::max(dim2, static_cast<Index>(q) + 1);
    }
    if (entries.empty())
        throw std::runtime_error(path + ": no tensor entries");
    if (static_cast<Index>(entries.size()) != dim0 * dim1 * dim2)
        throw std::runtime_error(path + ": incomplete tensor grid");

    Tensor3 t(dim0, dim1, dim2);
    std::vector<char> seen(entries.size(), 0);
    for (const Entry& e : entries) {
        const Index flat = e.k + dim0 * (e.n + dim1 * e.q);
        if (seen[static_cast<std::size_t>(flat)])
            throw std::runtime_error(path + ": duplicate tensor index");
        seen[static_cast<std::size_t>(flat)] = 1;
        t(e.k, e.n, e.q) = e.value;
    }
    return t;
}

namespace {

void write_text(const std::filesystem::path& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out)
        throw std::runtime_error("cannot write " + path.string());
    out << content;
    if (!out)
        throw std::runtime_error("failed while writing " + path.string());
}

json manifest_json(const std::string& subcommand, const RunConfig& cfg) {
    const ArrayGeometry g = cfg.mc.make_geometry();
    std::vector<double> coords(g.rx_coords_wl.data(), g.rx_coords_wl.data() + g.rx_count());

    json j;
    j["subcommand"] = subcommand;
    j["array"] = {{"m", cfg.mc.tx_count},
                  {"n", cfg.mc.rx_count},
                  {"k", cfg.mc.beam_count},
                  {"d_t_wl", json_number(cfg.mc.tx_spacing_wl)},
                  {"aperture_wl", json_number(cfg.mc.aperture_wl)},
                  {"geometry_seed", cfg.mc.geometry_seed},
                  {"rx_coords_wl", json_numbers(coords)}};
    j["sector"] = {{"lo_deg", json_number(cfg.mc.sector_lo_deg)},
                   {"hi_deg", json_number(cfg.mc.sector_hi_deg)},
                   {"design_grid_step_deg", json_number(cfg.mc.design_grid_step_deg)}};
    j["scene"] = {{"targets_deg", json_numbers(cfg.mc.scene.angles_deg)},
                  {"dopplers", json_numbers(cfg.mc.scene.dopplers)}};
    j["signal"] = {{"q", cfg.mc.pulses}, {"snr_db", json_number(cfg.snr_db)}};
    j["cp"] = {{"max_iter", cfg.mc.cp_max_iter},
               {"tol", json_number(cfg.mc.cp_tol)},
               {"init", cfg.mc.cp_init == CpInit::Random ? "random" : "data-driven"}};
    j["mc"] = {{"trials", cfg.mc.trials},
               {"snr_grid_db", json_numbers(cfg.mc.snr_grid_db)},
               {"master_seed", cfg.mc.master_seed}};
    j["io"] = {{"out", cfg.out_dir}, {"input", cfg.input_path}};
    return j;
}

json estimates_json(const std::vector<double>& truth, const std::vector<DoaEstimate>& estimates,
                    const std::vector<double>& errors, double fit, int iterations,
                    bool converged) {
    json targets = json::array();
    std::vector<double> angles;
    for (const DoaEstimate& est : estimates) {
        angles.push_back(est.angle_deg);
        targets.push_back({{"angle_deg", json_number(est.angle_deg)},
                           {"root_re", json_number(est.root.real())},
                           {"root_im", json_number(est.root.imag())},
                           {"circle_distance", json_number(est.circle_distance)},
                           {"correlation", json_number(est.correlation)}});
    }
    json j;
    j["angles_deg"] = json_numbers(angles);
    j["truth_deg"] = json_numbers(truth);
    j["errors_deg"] = json_numbers(errors);
    j["targets"] = targets;
    j["fit"] = json_number(fit);
    j["iterations"] = iterations;
    j["converged"] = converged;
    return j;
}

// Scene realization used by `simulate`: same draw order as a sweep's
// (master_seed, 0, 0) trial, so a simulated file corresponds to trial 0.
Scene simulate_scene(const McConfig& mc, std::uint64_t& sim_seed) {
    RandomStream stream(mc.master_seed, 0, 0);
    Scene scene;
    scene.targets.resize(mc.scene.angles_deg.size());
    for (std::size_t l = 0; l < mc.scene.angles_deg.size(); ++l) {
        scene.targets[l].angle_deg = mc.scene.angles_deg[l];
        scene.targets[l].reflection = stream.complex_normal();
        scene.targets[l].doppler = mc.scene.dopplers[l];
    }
    sim_seed = stream.next_seed();
    return scene;
}

void cmd_simulate(const RunConfig& cfg, const std::filesystem::path& out) {
    const ArrayGeometry g = cfg.mc.make_geometry();
    const BeamspaceMatrix bs = cfg.mc.make_beamspace(g);
    std::uint64_t sim_seed = 0;
    const Scene scene = simulate_scene(cfg.mc, sim_seed);
    SimulationConfig sim;
    sim.pulses = cfg.mc.pulses;
    sim.snr_db = cfg.snr_db;
    sim.seed = sim_seed;
    const Tensor3 t = simulate_cpi(g, scene, bs.w, sim);
    write_tensor_csv((out / "tensor.csv").string(), t);
    std::cout << "wrote tensor.csv (" << t.dim(0) << " x " << t.dim(1) << " x " << t.dim(2)
              << ", snr " << format_g(cfg.snr_db) << " dB)\n";
}

void cmd_estimate(const RunConfig& cfg, const std::filesystem::path& out) {
    if (cfg.input_path.empty())
        throw std::invalid_argument("estimate: an input tensor is required ([io] input or --input)");
    const Tensor3 t = read_tensor_csv(cfg.input_path);
    const ArrayGeometry g = cfg.mc.make_geometry();
    const BeamspaceMatrix bs = cfg.mc.make_beamspace(g);
    if (t.dim(0) != bs.w.cols())
        throw std::invalid_argument("estimate: tensor beam dimension " + std::to_string(t.dim(0)) +
                                    " does not match K=" + std::to_string(bs.w.cols()));

    CpConfig cp;
    cp.rank = cfg.mc.rank();
    cp.max_iter = cfg.mc.cp_max_iter;
    cp.tol = cfg.mc.cp_tol;
    cp.init = cfg.mc.cp_init;
    cp.seed = cfg.mc.master_seed;
    const CpResult result = als_decompose(t, cp);

    RootingOptions opts;
    opts.tx_spacing_wl = cfg.mc.tx_spacing_wl;
    std::vector<DoaEstimate> estimates = estimate_doas(result.factors.x, bs.w, opts);

    std::vector<double> angles;
    for (const DoaEstimate& est : estimates)
        angles.push_back(est.angle_deg);
    const Pairing pairing = pair_estimates(angles, cfg.mc.scene.angles_deg);
    std::vector<DoaEstimate> ordered(estimates.size());
    for (std::size_t i = 0; i < estimates.size(); ++i)
        ordered[i] = estimates[static_cast<std::size_t>(pairing.assignment[i])];

    const json j = estimates_json(cfg.mc.scene.angles_deg, ordered, pairing.errors_deg,
                                  result.fit, result.iterations, result.converged);
    write_text(out / "estimates.json", j.dump(2) + "\n");
    for (std::size_t i = 0; i < ordered.size(); ++i)
        std::cout << "target " << i << ": theta_hat = " << format_g(ordered[i].angle_deg)
                  << " deg\n";
}

void cmd_rmse_sweep(const RunConfig& cfg, const std::filesystem::path& out) {
    const RmseReport report = run_rmse_sweep(cfg.mc);
    std::ostringstream csv;
    csv << "snr_db,rmse_deg,trials,failures\n";
    for (const RmsePoint& p : report.points) {
        csv << format_g(p.snr_db) << ',' << format_g(p.rmse_deg) << ',' << p.trials << ','
            << p.failures << '\n';
        std::cout << "snr " << format_g(p.snr_db) << " dB: rmse " << format_g(p.rmse_deg)
                  << " deg (" << p.failures << "/" << p.trials << " failures)\n";
    }
    write_text(out / "rmse.csv", csv.str());
}

void cmd_resolution_sweep(const RunConfig& cfg, const std::filesystem::path& out) {
    const ResolutionReport report = run_resolution_sweep(cfg.mc);
    std::ostringstream csv;
    csv << "snr_db,prob_resolution,trials,failures\n";
    for (const ResolutionPoint& p : report.points) {
        csv << format_g(p.snr_db) << ',' << format_g(p.prob_resolution) << ',' << p.trials << ','
            << p.failures << '\n';
        std::cout << "snr " << format_g(p.snr_db) << " dB: resolution probability "
                  << format_g(p.prob_resolution) << " (" << p.failures << "/" << p.trials
                  << " failures)\n";
    }
    write_text(out / "resolution.csv", csv.str());
}

void write_pattern_csv(const std::filesystem::path& path, const std::vector<double>& grid,
                       const std::vector<double>& sector_db,
                       const std::vector<std::vector<double>>& target_db) {
    std::ostringstream csv;
    csv << "target,theta_deg,power_db\n";
    for (std::size_t i = 0; i < grid.size(); ++i)
        csv << 0 << ',' << format_g(grid[i]) << ',' << format_g(sector_db[i]) << '\n';
    for (std::size_t t = 0; t < target_db.size(); ++t)
        for (std::size_t i = 0; i < grid.size(); ++i)
            csv << t + 1 << ',' << format_g(grid[i]) << ',' << format_g(target_db[t][i]) << '\n';
    write_text(path, csv.str());
}

void cmd_single_shot(const RunConfig& cfg, const std::filesystem::path& out) {
    const SingleShot shot = dump_single_shot(cfg.mc, cfg.snr_db);

    std::ostringstream roots;
    roots << "target,re,im,abs,selected\n";
    for (std::size_t t = 0; t < shot.estimates.size(); ++t) {
        const DoaEstimate& est = shot.estimates[t];
        std::size_t selected = 0;
        for (std::size_t i = 1; i < est.all_roots.size(); ++i)
            if (std::abs(est.all_roots[i] - est.root) < std::abs(est.all_roots[selected] - est.root))
                selected = i;
        for (std::size_t i = 0; i < est.all_roots.size(); ++i) {
            const cxd z = est.all_roots[i];
            roots << t + 1 << ',' << format_g(z.real()) << ',' << format_g(z.imag()) << ','
                  << format_g(std::abs(z)) << ',' << (i == selected ? 1 : 0) << '\n';
        }
    }
    write_text(out / "roots.csv", roots.str());
    write_pattern_csv(out / "pattern.csv", shot.grid_deg, shot.sector_db, shot.target_db);

    std::vector<double> errors;
    for (std::size_t i = 0; i < shot.estimates.size(); ++i)
        errors.push_back(std::abs(shot.estimates[i].angle_deg - shot.truth_deg[i]));
    const json j = estimates_json(shot.truth_deg, shot.estimates, errors, shot.fit,
                                  shot.iterations, shot.converged);
    write_text(out / "estimates.json", j.dump(2) + "\n");
    for (std::size_t i = 0; i < shot.estimates.size(); ++i)
        std::cout << "target " << i << ": theta_hat = " << format_g(shot.estimates[i].angle_deg)
                  << " deg, |1-|z|| = " << format_g(shot.estimates[i].circle_distance) << "\n";
}

// Design view: patterns for the known-scale signatures of the configured
// scene angles, no estimation involved.
void cmd_beampattern(const RunConfig& cfg, const std::filesystem::path& out) {
    const ArrayGeometry g = cfg.mc.make_geometry();
    const BeamspaceMatrix bs = cfg.mc.make_beamspace(g);
    const std::vector<double> grid = make_angle_grid(-90.0, 90.0, 0.01);
    const std::vector<double> sector_db = transmit_beampattern(bs.w, cfg.mc.tx_spacing_wl, grid);
    std::vector<std::vector<double>> target_db;
    for (double angle : cfg.mc.scene.angles_deg) {
        const CVec signature = bs.w.adjoint() * transmit_steering(g, angle);
        const CMat blocking = build_blocking_matrix(bs.w, signature);
        target_db.push_back(transmit_beampattern(blocking, cfg.mc.tx_spacing_wl, grid));
    }
    write_pattern_csv(out / "pattern.csv", grid, sector_db, target_db);
    std::cout << "wrote pattern.csv (" << grid.size() << " angles, "
              << cfg.mc.scene.angles_deg.size() << " targets)\n";
}

} // namespace

int run_subcommand(const std::string& name, const RunConfig& cfg) {
    const std::filesystem::path out(cfg.out_dir);
    try {
        std::filesystem::create_directories(out);
        write_text(out / "manifest.json", manifest_json(name, cfg).dump(2) + "\n");
        if (name == "simulate")
            cmd_simulate(cfg, out);
        else if (name == "estimate")
            cmd_estimate(cfg, out);
        else if (name == "rmse-sweep")
            cmd_rmse_sweep(cfg, out);
        else if (name == "resolution-sweep")
            cmd_resolution_sweep(cfg, out);
        else if (name == "single-shot")
            cmd_single_shot(cfg, out);
        else if (name == "beampattern")
            cmd_beampattern(cfg, out);
        else
            throw std::invalid_argument("unknown subcommand: " + name);
        return 0;
    } catch (const std::exception& e) {
        std::cerr << "error: " << name << ": " << e.what() << "\n";
        try {
            json err;
            err["subcommand"] = name;
            err["error"] = e.what();
            write_text(out / "error.json", err.dump(2) + "\n");
        } catch (const std::exception&) {
            // the error report is best-effort; the exit status carries the failure
        }
        return 1;
    }
}

} // namespace tbdoa
