// Command-line front end: analytic evaluation, simulation, cross-validation,
// parameter sweeps and figure presets, all emitting the common CSV layout.
//
//   dm2 list-presets
//   dm2 preset lat99-vs-tau --frames 100000 --out lat99.csv
//   dm2 compare --scheme replicated --tau 1.5 --metrics latency_cdf,p99_latency
//   dm2 sweep --scheme coded --eta 0.75 --tau 0.75 --axis eta
//       --grid 0.5:1:21 --metrics p99_latency
//   dm2 simulate --scheme split --tau 2 --trace frames.csv
//
// A JSON config (--config) provides the same fields as the flags; explicit
// flags win. Exit codes: 0 success, 1 validation error, 2 I/O error.
#include <cmath>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "dm2/experiments.hpp"
#include "dm2/simulator.hpp"

namespace {

std::vector<std::string> split_list(const std::string& text) {
    std::vector<std::string> out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ','))
        if (!item.empty()) out.push_back(item);
    return out;
}

std::string read_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw dm2::IoError("cannot read config file: " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

dm2::Scheme scheme_from_flag(const std::string& s, double eta) {
    if (s == "alternating") return dm2::Scheme::alternating();
    if (s == "replicated") return dm2::Scheme::replicated();
    if (s == "split") return dm2::Scheme::split();
    if (s == "coded") return dm2::Scheme::coded(eta);
    if (s == "queue-based" || s == "queue_based")
        return dm2::Scheme::queue_based();
    throw std::invalid_argument("unknown --scheme value: " + s);
}

dm2::Metric metric_from_flag(const std::string& m) {
    if (m == "latency_cdf") return dm2::Metric::LatencyCdf;
    if (m == "paoi_cdf") return dm2::Metric::PaoiCdf;
    if (m == "p99_latency") return dm2::Metric::P99Latency;
    if (m == "p99_paoi") return dm2::Metric::P99Paoi;
    if (m == "delivery_prob") return dm2::Metric::DeliveryProb;
    throw std::invalid_argument("unknown metric: " + m);
}

dm2::Quality quality_from_flag(const std::string& q) {
    if (q == "whole") return dm2::Quality::Whole;
    if (q == "lq") return dm2::Quality::LQ;
    if (q == "hq") return dm2::Quality::HQ;
    throw std::invalid_argument("unknown quality: " + q);
}

dm2::SweepAxis axis_from_flag(const std::string& a) {
    if (a == "tau") return dm2::SweepAxis::Tau;
    if (a == "eta") return dm2::SweepAxis::Eta;
    if (a == "epsilon") return dm2::SweepAxis::Epsilon;
    throw std::invalid_argument("unknown sweep axis: " + a);
}

dm2::Objective objective_from_flag(const std::string& o) {
    if (o == "minimize_p99_paoi") return dm2::Objective::MinimizeP99Paoi;
    if (o == "minimize_p99_latency") return dm2::Objective::MinimizeP99Latency;
    throw std::invalid_argument("unknown optimize objective: " + o);
}

// "a,b,c" or "lo:hi:n" (linear) or "lo:hi:n:log".
std::vector<double> grid_from_flag(const std::string& text) {
    if (text.empty()) throw std::invalid_argument("sweep needs --grid");
    if (text.find(':') == std::string::npos) {
        std::vector<double> grid;
        for (const auto& v : split_list(text)) grid.push_back(std::stod(v));
        return grid;
    }
    const auto parts = [&] {
        std::vector<std::string> out;
        std::stringstream ss(text);
        std::string item;
        while (std::getline(ss, item, ':')) out.push_back(item);
        return out;
    }();
    if (parts.size() < 3 || parts.size() > 4)
        throw std::invalid_argument("grid range must be lo:hi:n[:log]");
    const double lo = std::stod(parts[0]);
    const double hi = std::stod(parts[1]);
    const int n = std::stoi(parts[2]);
    const bool log = parts.size() == 4 && parts[3] == "log";
    if (n < 2 || !(hi > lo))
        throw std::invalid_argument("grid range must be lo:hi:n with hi>lo, n>=2");
    if (log && !(lo > 0.0))
        throw std::invalid_argument("log grid requires lo > 0");
    std::vector<double> grid(n);
    for (int i = 0; i < n; ++i) {
        const double f = static_cast<double>(i) / (n - 1);
        grid[i] = log ? std::exp(std::log(lo) + f * (std::log(hi) - std::log(lo)))
                      : lo + f * (hi - lo);
    }
    return grid;
}

struct ConfigFlags {
    std::string config_path;
    std::string name;
    std::string scheme;
    double eta = 0.75;
    double tau = 1.0;
    double mu1 = 1.0;
    double mu2 = 1.0;
    double eps1 = 0.0;
    double eps2 = 0.0;
    std::string metrics;
    std::string qualities;
    CLI::App* cmd = nullptr;

    void attach(CLI::App* c) {
        cmd = c;
        c->add_option("--config", config_path, "JSON scenario/sweep file");
        c->add_option("--name", name, "scenario name in the CSV");
        c->add_option("--scheme", scheme,
                      "alternating|replicated|split|coded|queue-based");
        c->add_option("--eta", eta, "coded rate in [0.5,1]");
        c->add_option("--tau", tau, "inter-frame period");
        c->add_option("--mu1", mu1, "path 1 service rate");
        c->add_option("--mu2", mu2, "path 2 service rate");
        c->add_option("--eps1", eps1, "path 1 erasure probability");
        c->add_option("--eps2", eps2, "path 2 erasure probability");
        c->add_option("--metrics", metrics,
                      "comma list: latency_cdf,paoi_cdf,p99_latency,p99_paoi,"
                      "delivery_prob");
        c->add_option("--qualities", qualities, "comma list: whole,lq,hq");
    }

    bool given(const std::string& flag) const {
        return cmd != nullptr && cmd->count(flag) > 0;
    }

    // Scenario from --config when present, explicit flags override.
    dm2::Scenario resolve() const {
        dm2::Scenario s;
        const bool from_file = !config_path.empty();
        if (from_file)
            s = dm2::scenario_from_json_text(read_file(config_path));
        if (!from_file || given("--scheme"))
            s.cfg.scheme =
                scheme_from_flag(scheme.empty() ? "alternating" : scheme, eta);
        if (given("--eta")) s.cfg.scheme.eta = eta;
        if (!from_file || given("--tau")) s.cfg.tau = tau;
        if (!from_file || given("--mu1")) s.cfg.paths[0].mu = mu1;
        if (!from_file || given("--mu2")) s.cfg.paths[1].mu = mu2;
        if (!from_file || given("--eps1")) s.cfg.paths[0].epsilon = eps1;
        if (!from_file || given("--eps2")) s.cfg.paths[1].epsilon = eps2;
        if (given("--name")) s.name = name;
        if (s.name.empty()) s.name = "scenario";
        if (given("--metrics")) {
            s.metrics.clear();
            for (const auto& m : split_list(metrics))
                s.metrics.push_back(metric_from_flag(m));
        }
        if (s.metrics.empty())
            s.metrics = {dm2::Metric::LatencyCdf, dm2::Metric::P99Latency};
        if (given("--qualities")) {
            s.qualities.clear();
            for (const auto& q : split_list(qualities))
                s.qualities.push_back(quality_from_flag(q));
        }
        return s;
    }
};

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"two-path frame delivery: queueing analysis and simulation"};
    app.require_subcommand(1);
    app.fallthrough();  // global flags may follow the subcommand

    std::uint64_t seed = 0;
    std::uint64_t frames = 0;
    std::string out_path;
    int grid_points = 200;
    app.add_option("--seed", seed, "simulation seed override");
    app.add_option("--frames", frames, "frames per simulation override");
    app.add_option("--out", out_path, "output CSV path (default stdout)");
    app.add_option("--grid-points", grid_points, "curve grid resolution");

    auto* list_cmd = app.add_subcommand("list-presets", "print preset names");

    std::string preset_name;
    auto* preset_cmd = app.add_subcommand("preset", "run a named figure preset");
    preset_cmd->add_option("name", preset_name, "preset name")->required();

    ConfigFlags analytic_flags, simulate_flags, compare_flags, sweep_flags;
    auto* analytic_cmd =
        app.add_subcommand("analytic", "closed-form metrics only");
    analytic_flags.attach(analytic_cmd);

    auto* simulate_cmd =
        app.add_subcommand("simulate", "Monte Carlo metrics only");
    simulate_flags.attach(simulate_cmd);
    std::string trace_path;
    simulate_cmd->add_option("--trace", trace_path,
                             "write the per-frame trace CSV here");

    auto* compare_cmd = app.add_subcommand(
        "compare", "analytic vs simulated with agreement metrics");
    compare_flags.attach(compare_cmd);

    auto* sweep_cmd = app.add_subcommand("sweep", "scan tau, eta or epsilon");
    sweep_flags.attach(sweep_cmd);
    std::string axis_flag, grid_flag, optimize_flag;
    sweep_cmd->add_option("--axis", axis_flag, "tau|eta|epsilon");
    sweep_cmd->add_option("--grid", grid_flag, "comma list or lo:hi:n[:log]");
    sweep_cmd->add_option("--optimize", optimize_flag,
                          "minimize_p99_paoi|minimize_p99_latency");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e);
    }

    try {
        dm2::RunOptions opt;
        opt.grid_points = grid_points;
        if (app.count("--seed")) opt.seed = seed;
        if (app.count("--frames")) opt.frames = frames;

        std::vector<dm2::ResultRow> rows;
        if (list_cmd->parsed()) {
            for (const auto& name : dm2::preset_names())
                std::cout << name << '\n';
            return 0;
        }
        if (preset_cmd->parsed()) {
            rows = dm2::run_preset(preset_name, opt);
        } else if (analytic_cmd->parsed()) {
            opt.with_simulation = false;
            rows = dm2::run_scenario(analytic_flags.resolve(), opt);
        } else if (simulate_cmd->parsed()) {
            const dm2::Scenario s = simulate_flags.resolve();
            if (!trace_path.empty()) {
                const dm2::FrameTrace tr =
                    dm2::run(s.cfg, opt.frames.value_or(s.n_frames),
                             opt.seed.value_or(s.seed));
                std::ofstream tf(trace_path);
                if (!tf) throw dm2::IoError("cannot open: " + trace_path);
                dm2::write_trace_csv(tr, tf);
                tf.flush();
                if (!tf) throw dm2::IoError("write failed: " + trace_path);
            }
            opt.with_analytic = false;
            rows = dm2::run_scenario(s, opt);
        } else if (compare_cmd->parsed()) {
            rows = dm2::run_scenario(compare_flags.resolve(), opt);
        } else if (sweep_cmd->parsed()) {
            dm2::SweepSpec spec;
            if (!sweep_flags.config_path.empty() && axis_flag.empty()) {
                spec = dm2::sweep_from_json_text(
                    read_file(sweep_flags.config_path));
            } else {
                spec.base = sweep_flags.resolve();
                spec.axis = axis_from_flag(axis_flag);
                spec.grid = grid_from_flag(grid_flag);
            }
            if (!optimize_flag.empty())
                spec.optimize = objective_from_flag(optimize_flag);
            rows = dm2::sweep(spec, opt);
        }

        if (!out_path.empty()) {
            dm2::emit_csv(rows, out_path);
        } else {
            dm2::sort_rows(rows);
            dm2::write_csv(rows, std::cout);
        }
        return 0;
    } catch (const dm2::IoError& e) {
        std::cerr << "I/O error: " << e.what() << '\n';
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
}
