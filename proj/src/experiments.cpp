#include "dm2/experiments.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <limits>
#include <mutex>
#include <optional>
#include <sstream>
#include <thread>

#include "dm2/latency.hpp"
#include "dm2/paoi.hpp"
#include "dm2/simulator.hpp"
#include "dm2/stats.hpp"
#include "json.hpp"

namespace dm2 {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

std::string fmt9(double v) {
    char buf[48];
    std::snprintf(buf, sizeof buf, "%.9g", v);
    return buf;
}

std::vector<Quality> default_qualities(const Scheme& s) {
    if (s.kind == SchemeKind::Coded) return {Quality::LQ, Quality::HQ};
    return {Quality::Whole};
}

bool quality_fits(const Scheme& s, Quality q) {
    switch (s.kind) {
        case SchemeKind::Alternating:
        case SchemeKind::QueueBased:
            return q == Quality::Whole;
        case SchemeKind::Replicated:
            return q != Quality::HQ;
        case SchemeKind::Split:
            return q != Quality::LQ;
        case SchemeKind::Coded:
            return q != Quality::Whole;
    }
    return false;
}

bool has_analytic(const Scheme& s) { return s.kind != SchemeKind::QueueBased; }

// PAoI sampling convention used when comparing against the analytic laws:
// the synchronized convolution counts every successful frame in generation
// order, the alternating analysis models the display process.
AgeSemantics compare_semantics(const Scheme& s) {
    return s.synchronized_pair() ? AgeSemantics::PerSuccess
                                 : AgeSemantics::Display;
}

void parallel_for(std::size_t n, int jobs,
                  const std::function<void(std::size_t)>& fn) {
    if (jobs <= 0) jobs = static_cast<int>(std::thread::hardware_concurrency());
    jobs = std::max(1, std::min<int>(jobs, static_cast<int>(n)));
    if (jobs == 1) {
        for (std::size_t i = 0; i < n; ++i) fn(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::mutex err_mu;
    std::exception_ptr err;
    std::vector<std::thread> pool;
    pool.reserve(jobs);
    for (int w = 0; w < jobs; ++w) {
        pool.emplace_back([&] {
            for (;;) {
                const std::size_t i = next.fetch_add(1);
                if (i >= n) return;
                try {
                    fn(i);
                } catch (...) {
                    std::scoped_lock lock(err_mu);
                    if (!err) err = std::current_exception();
                }
            }
        });
    }
    for (auto& t : pool) t.join();
    if (err) std::rethrow_exception(err);
}

struct RowSink {
    std::vector<ResultRow>& rows;
    std::string scenario;
    std::string scheme;
    std::string quality;

    void push(const std::string& metric, const std::string& source,
              double value, const std::string& flag = "",
              const std::string& axis = "", double axis_value = 0.0,
              bool has_axis = false) {
        rows.push_back({scenario, scheme, quality, metric, axis, axis_value,
                        has_axis, source, value, flag});
    }
};

}  // namespace

const char* to_string(Metric m) {
    switch (m) {
        case Metric::LatencyCdf: return "latency_cdf";
        case Metric::PaoiCdf: return "paoi_cdf";
        case Metric::P99Latency: return "p99_latency";
        case Metric::P99Paoi: return "p99_paoi";
        case Metric::DeliveryProb: return "delivery_prob";
    }
    return "?";
}

std::vector<ResultRow> run_scenario(const Scenario& scn, const RunOptions& opt) {
    Scenario s = scn;
    if (opt.frames) s.n_frames = *opt.frames;
    if (opt.seed) s.seed = *opt.seed;
    validate(s.cfg);
    if (s.metrics.empty())
        throw std::invalid_argument("scenario requests no metrics");
    const std::vector<Quality> quals =
        s.qualities.empty() ? default_qualities(s.cfg.scheme) : s.qualities;
    for (Quality q : quals)
        if (!quality_fits(s.cfg.scheme, q))
            throw std::invalid_argument(
                std::string("quality ") + to_string(q) + " does not fit scheme " +
                to_string(s.cfg.scheme.kind));

    std::vector<ResultRow> rows;
    const std::string scheme_name = to_string(s.cfg.scheme.kind);

    const StabilityReport stab = check_stability(s.cfg);
    if (!stab.stable) {
        for (Quality q : quals) {
            RowSink sink{rows, s.name, scheme_name, to_string(q)};
            for (Metric m : s.metrics)
                sink.push(to_string(m), "analytic", kInf, "unstable");
        }
        return rows;
    }

    const bool analytic = opt.with_analytic && has_analytic(s.cfg.scheme);
    const std::string sim_flag =
        (!has_analytic(s.cfg.scheme) && opt.with_analytic) ? "simulation_only"
                                                           : "";

    std::optional<FrameTrace> trace;
    if (opt.with_simulation)
        trace = run(s.cfg, s.n_frames, s.seed, kDefaultWarmup);
    const double sim_frames =
        trace ? static_cast<double>(trace->records.size() -
                                    trace->warmup_trimmed)
              : 0.0;

    for (Quality q : quals) {
        RowSink sink{rows, s.name, scheme_name, to_string(q)};
        for (Metric m : s.metrics) {
            switch (m) {
                case Metric::LatencyCdf: {
                    std::optional<DistributionCurve> curve;
                    if (analytic) curve = scheme_latency(s.cfg, q);
                    std::optional<EmpiricalDistribution> emp;
                    if (trace) {
                        auto samples = extract_latencies(*trace, q);
                        if (!samples.empty())
                            emp.emplace(std::move(samples));
                    }
                    const double hi = curve ? curve->law.quantile(0.999)
                                     : emp ? percentile(*emp, 0.999)
                                           : 1.0;
                    const int n = std::max(2, opt.grid_points);
                    for (int k = 0; k < n; ++k) {
                        const double t = hi * k / (n - 1);
                        if (curve)
                            sink.push("latency_cdf", "analytic", curve->cdf(t),
                                      "", "t", t, true);
                        if (emp)
                            sink.push("latency_cdf", "simulated", emp->cdf(t),
                                      sim_flag, "t", t, true);
                    }
                    if (curve && emp)
                        sink.push("latency_ks", "compare",
                                  ks_distance(*emp, *curve));
                    break;
                }
                case Metric::PaoiCdf: {
                    std::optional<PaoiCurve> curve;
                    if (analytic) curve = scheme_paoi(s.cfg, q);
                    std::optional<EmpiricalDistribution> emp;
                    if (trace) {
                        auto samples = extract_paoi(
                            *trace, q, compare_semantics(s.cfg.scheme));
                        if (!samples.empty())
                            emp.emplace(std::move(samples));
                    }
                    const double lo = s.cfg.tau;
                    const double hi = curve ? curve->quantile(0.999)
                                     : emp ? percentile(*emp, 0.999)
                                           : 2.0 * s.cfg.tau;
                    const std::string curve_flag =
                        curve && curve->is_lower_bound() ? "lower_bound" : "";
                    const int n = std::max(2, opt.grid_points);
                    for (int k = 0; k < n; ++k) {
                        const double d = lo + (hi - lo) * k / (n - 1);
                        if (curve)
                            sink.push("paoi_cdf", "analytic", curve->cdf(d),
                                      curve_flag, "delta", d, true);
                        if (emp)
                            sink.push("paoi_cdf", "simulated", emp->cdf(d),
                                      sim_flag, "delta", d, true);
                    }
                    if (curve && emp) {
                        if (curve->is_lower_bound())
                            sink.push("paoi_bound_excess", "compare",
                                      one_sided_excess(*emp, *curve),
                                      "lower_bound");
                        else
                            sink.push("paoi_ks", "compare",
                                      ks_distance(*emp, *curve));
                    }
                    break;
                }
                case Metric::P99Latency: {
                    std::optional<double> ana, sim;
                    if (analytic)
                        ana = percentile(scheme_latency(s.cfg, q), 0.99);
                    if (trace) {
                        auto samples = extract_latencies(*trace, q);
                        if (!samples.empty())
                            sim = percentile(
                                EmpiricalDistribution(std::move(samples)), 0.99);
                    }
                    if (ana) sink.push("p99_latency", "analytic", *ana);
                    if (sim) sink.push("p99_latency", "simulated", *sim, sim_flag);
                    if (ana && sim)
                        sink.push("p99_latency_gap_rel", "compare",
                                  std::abs(*sim - *ana) / *ana);
                    break;
                }
                case Metric::P99Paoi: {
                    std::optional<PaoiCurve> curve;
                    if (analytic) curve = scheme_paoi(s.cfg, q);
                    std::optional<double> ana, sim;
                    if (curve) ana = curve->quantile(0.99);
                    if (trace) {
                        auto samples = extract_paoi(
                            *trace, q, compare_semantics(s.cfg.scheme));
                        if (!samples.empty())
                            sim = percentile(
                                EmpiricalDistribution(std::move(samples)), 0.99);
                    }
                    const std::string curve_flag =
                        curve && curve->is_lower_bound() ? "lower_bound" : "";
                    if (ana) sink.push("p99_paoi", "analytic", *ana, curve_flag);
                    if (sim) sink.push("p99_paoi", "simulated", *sim, sim_flag);
                    if (ana && sim)
                        sink.push("p99_paoi_gap_rel", "compare",
                                  std::abs(*sim - *ana) / *ana, curve_flag);
                    break;
                }
                case Metric::DeliveryProb: {
                    if (analytic)
                        sink.push("delivery_prob", "analytic",
                                  delivery_probability(s.cfg.scheme, q,
                                                       s.cfg.paths[0].epsilon,
                                                       s.cfg.paths[1].epsilon));
                    if (trace && sim_frames > 0) {
                        const auto samples = extract_latencies(*trace, q);
                        sink.push("delivery_prob", "simulated",
                                  static_cast<double>(samples.size()) /
                                      sim_frames,
                                  sim_flag);
                    }
                    break;
                }
            }
        }
    }
    return rows;
}

namespace {

bool scalar_metric(Metric m) {
    return m == Metric::P99Latency || m == Metric::P99Paoi ||
           m == Metric::DeliveryProb;
}

const char* axis_name(SweepAxis a) {
    switch (a) {
        case SweepAxis::Tau: return "tau";
        case SweepAxis::Eta: return "eta";
        case SweepAxis::Epsilon: return "epsilon";
    }
    return "?";
}

Scenario at_grid_value(const Scenario& base, SweepAxis axis, double v) {
    Scenario s = base;
    switch (axis) {
        case SweepAxis::Tau:
            s.cfg.tau = v;
            break;
        case SweepAxis::Eta:
            if (s.cfg.scheme.kind != SchemeKind::Coded)
                throw std::invalid_argument("eta sweeps require the coded scheme");
            s.cfg.scheme.eta = v;
            break;
        case SweepAxis::Epsilon:
            s.cfg.paths[0].epsilon = v;
            s.cfg.paths[1].epsilon = v;
            break;
    }
    return s;
}

// Smallest tau keeping both paths stable, for bracketing tau searches.
double stability_tau(const SystemConfig& cfg) {
    const double mu_min = std::min(cfg.paths[0].mu, cfg.paths[1].mu);
    const double L = packet_size(cfg.scheme);
    const double lam_scale =
        (cfg.scheme.kind == SchemeKind::Alternating ||
         cfg.scheme.kind == SchemeKind::QueueBased)
            ? 0.5
            : 1.0;
    // rho = L*lam_scale/(mu*tau) < 1
    return L * lam_scale / mu_min;
}

void tag_axis(std::vector<ResultRow>& rows, std::size_t from, SweepAxis axis,
              double v) {
    for (std::size_t i = from; i < rows.size(); ++i) {
        rows[i].axis = axis_name(axis);
        rows[i].axis_value = v;
        rows[i].has_axis = true;
    }
}

}  // namespace

double optimize_tau(const std::function<double(double)>& objective, double lo,
                    double hi) {
    if (!(lo > 0.0 && hi > lo))
        throw std::invalid_argument("bad tau bracket");
    const double gr = (std::sqrt(5.0) - 1.0) / 2.0;
    double a = lo, b = hi;
    double c = b - gr * (b - a);
    double d = a + gr * (b - a);
    double fc = objective(c);
    double fd = objective(d);
    while (b - a > 5e-4 * (a + b)) {
        if (fc < fd) {
            b = d;
            d = c;
            fd = fc;
            c = b - gr * (b - a);
            fc = objective(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + gr * (b - a);
            fd = objective(d);
        }
    }
    return 0.5 * (a + b);
}

namespace {

// p99 objective over tau for the given scenario quality; analytic when the
// scheme has a law, otherwise simulated with common random numbers.
std::function<double(double)> tau_objective(const Scenario& base, Quality q,
                                            Objective obj,
                                            const RunOptions& opt) {
    const std::uint64_t frames = opt.frames.value_or(base.n_frames);
    const std::uint64_t seed = opt.seed.value_or(base.seed);
    return [base, q, obj, frames, seed](double tau) -> double {
        SystemConfig cfg = base.cfg;
        cfg.tau = tau;
        try {
            if (has_analytic(cfg.scheme)) {
                return obj == Objective::MinimizeP99Paoi
                           ? scheme_paoi(cfg, q).quantile(0.99)
                           : percentile(scheme_latency(cfg, q), 0.99);
            }
            const FrameTrace tr = run(cfg, frames, seed);
            auto samples = obj == Objective::MinimizeP99Paoi
                               ? extract_paoi(tr, q)
                               : extract_latencies(tr, q);
            if (samples.empty()) return kInf;
            return percentile(EmpiricalDistribution(std::move(samples)), 0.99);
        } catch (const std::domain_error&) {
            return kInf;
        }
    };
}

}  // namespace

std::vector<ResultRow> sweep(const SweepSpec& spec, const RunOptions& opt) {
    if (spec.grid.empty()) throw std::invalid_argument("sweep grid is empty");
    for (Metric m : spec.base.metrics)
        if (!scalar_metric(m))
            throw std::invalid_argument(
                "sweeps support scalar metrics only (p99_latency, p99_paoi, "
                "delivery_prob)");
    if (spec.optimize && spec.axis != SweepAxis::Eta)
        throw std::invalid_argument("optimize is defined for eta sweeps");

    std::vector<std::vector<ResultRow>> per_point(spec.grid.size());
    parallel_for(spec.grid.size(), opt.jobs, [&](std::size_t i) {
        const double v = spec.grid[i];
        Scenario s = at_grid_value(spec.base, spec.axis, v);
        s.seed = spec.base.seed + i;
        std::vector<ResultRow>& rows = per_point[i];
        if (!spec.optimize) {
            rows = run_scenario(s, opt);
            tag_axis(rows, 0, spec.axis, v);
            return;
        }
        const std::vector<Quality> quals =
            s.qualities.empty() ? default_qualities(s.cfg.scheme) : s.qualities;
        for (Quality q : quals) {
            const double lo = 1.02 * stability_tau(s.cfg);
            const double best_tau = optimize_tau(
                tau_objective(s, q, *spec.optimize, opt), lo, 64.0);
            Scenario pt = s;
            pt.cfg.tau = best_tau;
            pt.qualities = {q};
            const std::size_t from = rows.size();
            auto sub = run_scenario(pt, opt);
            rows.insert(rows.end(), sub.begin(), sub.end());
            rows.push_back({pt.name, to_string(pt.cfg.scheme.kind),
                            to_string(q), "opt_tau", "", 0.0, false, "analytic",
                            best_tau, ""});
            tag_axis(rows, from, spec.axis, v);
        }
    });

    std::vector<ResultRow> rows;
    for (auto& part : per_point)
        rows.insert(rows.end(), part.begin(), part.end());
    return rows;
}

void sort_rows(std::vector<ResultRow>& rows) {
    std::sort(rows.begin(), rows.end(),
              [](const ResultRow& a, const ResultRow& b) {
                  return std::tie(a.scenario, a.axis_value, a.scheme, a.quality,
                                  a.metric, a.source, a.axis, a.flag, a.value) <
                         std::tie(b.scenario, b.axis_value, b.scheme, b.quality,
                                  b.metric, b.source, b.axis, b.flag, b.value);
              });
}

void write_csv(const std::vector<ResultRow>& rows, std::ostream& out) {
    out << "scenario,scheme,quality,metric,axis,axis_value,source,value,flag\n";
    for (const auto& r : rows) {
        out << r.scenario << ',' << r.scheme << ',' << r.quality << ','
            << r.metric << ',' << r.axis << ','
            << (r.has_axis ? fmt9(r.axis_value) : std::string()) << ','
            << r.source << ',' << fmt9(r.value) << ',' << r.flag << '\n';
    }
}

void emit_csv(const std::vector<ResultRow>& rows, const std::string& path) {
    if (rows.empty()) throw std::invalid_argument("no rows to write");
    std::vector<ResultRow> sorted = rows;
    sort_rows(sorted);
    std::ofstream out(path);
    if (!out) throw IoError("cannot open for writing: " + path);
    write_csv(sorted, out);
    out.flush();
    if (!out) throw IoError("write failed: " + path);
}

// ---------------------------------------------------------------- presets

namespace {

Scenario make_scenario(std::string name, Scheme scheme, double tau, double mu1,
                       double mu2, double e1, double e2,
                       std::vector<Metric> metrics, std::uint64_t seed) {
    Scenario s;
    s.name = std::move(name);
    s.cfg.scheme = scheme;
    s.cfg.tau = tau;
    s.cfg.paths = {PathParams{mu1, e1}, PathParams{mu2, e2}};
    s.metrics = std::move(metrics);
    s.seed = seed;
    return s;
}

std::vector<double> linspace(double lo, double hi, int n) {
    std::vector<double> v(n);
    for (int i = 0; i < n; ++i) v[i] = lo + (hi - lo) * i / (n - 1);
    return v;
}

std::vector<double> logspace(double lo, double hi, int n) {
    std::vector<double> v(n);
    const double llo = std::log(lo), lhi = std::log(hi);
    for (int i = 0; i < n; ++i)
        v[i] = std::exp(llo + (lhi - llo) * i / (n - 1));
    return v;
}

struct SubScenario {
    const char* tag;
    double mu1, mu2, e1, e2;
};

// The paper's four operating points for the tau sweeps.
constexpr SubScenario kSubScenarios[] = {
    {"balanced", 1.0, 1.0, 0.0, 0.0},
    {"errors", 1.0, 1.0, 0.2, 0.2},
    {"unbalanced", 1.0, 1.5, 0.0, 0.0},
    {"mixed-errors", 1.0, 1.0, 0.1, 0.2},
};

std::vector<Scheme> figure_schemes() {
    return {Scheme::alternating(), Scheme::replicated(), Scheme::split(),
            Scheme::coded(0.75)};
}

void append(std::vector<ResultRow>& rows, std::vector<ResultRow>&& part) {
    rows.insert(rows.end(), std::make_move_iterator(part.begin()),
                std::make_move_iterator(part.end()));
}

// Latency or PAoI cdf families over tau in {0.75, 1.5, 2, 4}.
std::vector<ResultRow> preset_cdf_family(const std::string& name, Metric metric,
                                         double mu2, double eps,
                                         const RunOptions& opt) {
    const std::vector<double> taus = {0.75, 1.5, 2.0, 4.0};
    std::vector<Scenario> scns;
    std::uint64_t seed = 101;
    for (double tau : taus)
        for (const Scheme& sch : figure_schemes())
            scns.push_back(make_scenario(name + ":tau=" + fmt9(tau), sch, tau,
                                         1.0, mu2, eps, eps, {metric}, seed++));
    std::vector<std::vector<ResultRow>> parts(scns.size());
    parallel_for(scns.size(), opt.jobs,
                 [&](std::size_t i) { parts[i] = run_scenario(scns[i], opt); });
    std::vector<ResultRow> rows;
    for (auto& p : parts) append(rows, std::move(p));
    return rows;
}

// p99 vs tau over the four operating points; queue-based rides along in the
// error-free ones (simulation only).
std::vector<ResultRow> preset_vs_tau(const std::string& name, Metric metric,
                                     const RunOptions& opt) {
    std::vector<ResultRow> rows;
    for (const SubScenario& sub : kSubScenarios) {
        std::vector<Scheme> schemes = figure_schemes();
        if (sub.e1 == 0.0 && sub.e2 == 0.0)
            schemes.push_back(Scheme::queue_based());
        for (const Scheme& sch : schemes) {
            SweepSpec spec;
            spec.base = make_scenario(name + ":" + sub.tag, sch, 1.0, sub.mu1,
                                      sub.mu2, sub.e1, sub.e2, {metric}, 211);
            spec.axis = SweepAxis::Tau;
            spec.grid = logspace(0.6, 8.0, 25);
            append(rows, sweep(spec, opt));
        }
    }
    return rows;
}

// Reference rows for the eta-axis figures: the non-coded schemes do not
// depend on eta, so their value is computed once and repeated across the
// grid to plot as a horizontal line.
void append_reference_rows(std::vector<ResultRow>& rows,
                           std::vector<ResultRow>&& once,
                           const std::vector<double>& grid) {
    for (const ResultRow& r : once) {
        for (double v : grid) {
            ResultRow copy = r;
            copy.axis = "eta";
            copy.axis_value = v;
            copy.has_axis = true;
            rows.push_back(copy);
        }
    }
}

std::vector<ResultRow> preset_lat_eta(const RunOptions& opt) {
    const std::vector<double> taus = {0.75, 1.5, 2.0, 4.0};
    const std::vector<double> grid = linspace(0.5, 1.0, 21);
    std::vector<ResultRow> rows;
    std::uint64_t seed = 301;
    for (double tau : taus) {
        const std::string name = "lat-eta:tau=" + fmt9(tau);
        SweepSpec spec;
        spec.base = make_scenario(name, Scheme::coded(0.75), tau, 1.0, 1.0, 0.0,
                                  0.0, {Metric::P99Latency}, seed);
        spec.axis = SweepAxis::Eta;
        spec.grid = grid;
        append(rows, sweep(spec, opt));
        for (const Scheme& sch :
             {Scheme::alternating(), Scheme::replicated(), Scheme::split()}) {
            Scenario ref = make_scenario(name, sch, tau, 1.0, 1.0, 0.0, 0.0,
                                         {Metric::P99Latency}, seed + 50);
            append_reference_rows(rows, run_scenario(ref, opt), grid);
            ++seed;
        }
        seed += 50;
    }
    return rows;
}

std::vector<ResultRow> preset_err_prob(const RunOptions& opt) {
    const std::vector<double> grid = linspace(0.0, 0.4, 9);
    std::vector<ResultRow> rows;
    std::uint64_t seed = 401;
    for (const Scheme& sch : figure_schemes()) {
        SweepSpec spec;
        spec.base = make_scenario("err-prob", sch, 1.5, 1.0, 1.0, 0.0, 0.0,
                                  {Metric::DeliveryProb}, seed);
        spec.axis = SweepAxis::Epsilon;
        spec.grid = grid;
        append(rows, sweep(spec, opt));
        seed += 100;
    }
    return rows;
}

std::vector<ResultRow> preset_paoi_eta_optimized(const RunOptions& opt) {
    const std::vector<double> grid = linspace(0.5, 1.0, 11);
    std::vector<ResultRow> rows;
    std::uint64_t seed = 501;
    for (const SubScenario& sub : kSubScenarios) {
        const std::string name = std::string("paoi99-vs-eta-optimized:") + sub.tag;
        SweepSpec spec;
        spec.base = make_scenario(name, Scheme::coded(0.75), 1.0, sub.mu1,
                                  sub.mu2, sub.e1, sub.e2, {Metric::P99Paoi},
                                  seed++);
        spec.axis = SweepAxis::Eta;
        spec.grid = grid;
        spec.optimize = Objective::MinimizeP99Paoi;
        append(rows, sweep(spec, opt));

        std::vector<Scheme> refs = {Scheme::alternating(), Scheme::replicated(),
                                    Scheme::split()};
        if (sub.e1 == 0.0 && sub.e2 == 0.0) refs.push_back(Scheme::queue_based());
        for (const Scheme& sch : refs) {
            Scenario ref = make_scenario(name, sch, 1.0, sub.mu1, sub.mu2,
                                         sub.e1, sub.e2, {Metric::P99Paoi},
                                         seed++);
            const double lo = 1.02 * stability_tau(ref.cfg);
            const double best_tau = optimize_tau(
                tau_objective(ref, Quality::Whole, Objective::MinimizeP99Paoi,
                              opt),
                lo, 64.0);
            ref.cfg.tau = best_tau;
            std::vector<ResultRow> once = run_scenario(ref, opt);
            const char* source = has_analytic(sch) ? "analytic" : "simulated";
            const char* flag = has_analytic(sch) ? "" : "simulation_only";
            once.push_back({ref.name, to_string(sch.kind), "whole", "opt_tau",
                            "", 0.0, false, source, best_tau, flag});
            append_reference_rows(rows, std::move(once), grid);
        }
    }
    return rows;
}

}  // namespace

std::vector<std::string> preset_names() {
    return {"lat-cdf-balanced", "lat-eta",       "lat-cdf-unbalanced",
            "err-prob",         "lat-cdf-errors", "lat99-vs-tau",
            "paoi-cdf-balanced", "paoi-cdf-errors", "paoi99-vs-tau",
            "paoi99-vs-eta-optimized"};
}

std::vector<ResultRow> run_preset(const std::string& name,
                                  const RunOptions& opt) {
    if (name == "lat-cdf-balanced")
        return preset_cdf_family(name, Metric::LatencyCdf, 1.0, 0.0, opt);
    if (name == "lat-cdf-unbalanced")
        return preset_cdf_family(name, Metric::LatencyCdf, 1.5, 0.0, opt);
    if (name == "lat-cdf-errors")
        return preset_cdf_family(name, Metric::LatencyCdf, 1.0, 0.2, opt);
    if (name == "paoi-cdf-balanced")
        return preset_cdf_family(name, Metric::PaoiCdf, 1.0, 0.0, opt);
    if (name == "paoi-cdf-errors")
        return preset_cdf_family(name, Metric::PaoiCdf, 1.0, 0.2, opt);
    if (name == "lat-eta") return preset_lat_eta(opt);
    if (name == "err-prob") return preset_err_prob(opt);
    if (name == "lat99-vs-tau")
        return preset_vs_tau(name, Metric::P99Latency, opt);
    if (name == "paoi99-vs-tau")
        return preset_vs_tau(name, Metric::P99Paoi, opt);
    if (name == "paoi99-vs-eta-optimized")
        return preset_paoi_eta_optimized(opt);
    throw std::invalid_argument("unknown preset: " + name +
                                " (see list-presets)");
}

// ------------------------------------------------------------------ JSON

namespace {

using nlohmann::json;

SchemeKind scheme_kind_from_string(std::string s) {
    for (auto& c : s) c = static_cast<char>(std::tolower(c));
    if (s == "alternating") return SchemeKind::Alternating;
    if (s == "replicated") return SchemeKind::Replicated;
    if (s == "split") return SchemeKind::Split;
    if (s == "coded") return SchemeKind::Coded;
    if (s == "queuebased" || s == "queue_based" || s == "queue-based")
        return SchemeKind::QueueBased;
    throw std::invalid_argument("unknown scheme variant: " + s);
}

Quality quality_from_string(std::string s) {
    for (auto& c : s) c = static_cast<char>(std::tolower(c));
    if (s == "whole") return Quality::Whole;
    if (s == "lq") return Quality::LQ;
    if (s == "hq") return Quality::HQ;
    throw std::invalid_argument("unknown quality: " + s);
}

Metric metric_from_string(std::string s) {
    for (auto& c : s) c = static_cast<char>(std::tolower(c));
    if (s == "latency_cdf") return Metric::LatencyCdf;
    if (s == "paoi_cdf") return Metric::PaoiCdf;
    if (s == "p99_latency") return Metric::P99Latency;
    if (s == "p99_paoi") return Metric::P99Paoi;
    if (s == "delivery_prob") return Metric::DeliveryProb;
    throw std::invalid_argument("unknown metric: " + s);
}

Scenario scenario_from_json(const json& j) {
    Scenario s;
    s.name = j.value("name", std::string("scenario"));
    const json& cfg = j.at("cfg");
    const json& scheme = cfg.at("scheme");
    s.cfg.scheme.kind =
        scheme_kind_from_string(scheme.at("variant").get<std::string>());
    s.cfg.scheme.eta = scheme.value("eta", 1.0);
    if (s.cfg.scheme.kind == SchemeKind::Replicated) s.cfg.scheme.eta = 0.5;
    s.cfg.tau = cfg.at("tau").get<double>();
    const json& paths = cfg.at("paths");
    if (!paths.is_array() || paths.size() != 2)
        throw std::invalid_argument("cfg.paths must list exactly two paths");
    for (int i = 0; i < 2; ++i) {
        s.cfg.paths[i].mu = paths[i].at("mu").get<double>();
        s.cfg.paths[i].epsilon = paths[i].value("epsilon", 0.0);
    }
    s.n_frames = j.value("n_frames", kDefaultFrames);
    s.seed = j.value("seed", std::uint64_t{1});
    if (j.contains("metrics"))
        for (const auto& m : j.at("metrics"))
            s.metrics.push_back(metric_from_string(m.get<std::string>()));
    if (j.contains("qualities"))
        for (const auto& q : j.at("qualities"))
            s.qualities.push_back(quality_from_string(q.get<std::string>()));
    return s;
}

json parse_text(const std::string& text) {
    try {
        return json::parse(text);
    } catch (const json::exception& e) {
        throw std::invalid_argument(std::string("bad JSON config: ") + e.what());
    }
}

}  // namespace

Scenario scenario_from_json_text(const std::string& text) {
    json j = parse_text(text);
    try {
        if (j.contains("scenario")) j = j.at("scenario");
        return scenario_from_json(j);
    } catch (const json::exception& e) {
        throw std::invalid_argument(std::string("bad scenario config: ") +
                                    e.what());
    }
}

SweepSpec sweep_from_json_text(const std::string& text) {
    json j = parse_text(text);
    try {
        if (j.contains("sweep")) j = j.at("sweep");
        SweepSpec spec;
        spec.base = scenario_from_json(j.at("base"));
        const std::string axis = j.at("axis").get<std::string>();
        if (axis == "tau")
            spec.axis = SweepAxis::Tau;
        else if (axis == "eta")
            spec.axis = SweepAxis::Eta;
        else if (axis == "epsilon")
            spec.axis = SweepAxis::Epsilon;
        else
            throw std::invalid_argument("unknown sweep axis: " + axis);
        for (const auto& v : j.at("grid")) spec.grid.push_back(v.get<double>());
        if (j.contains("optimize")) {
            const std::string o = j.at("optimize").get<std::string>();
            if (o == "minimize_p99_paoi")
                spec.optimize = Objective::MinimizeP99Paoi;
            else if (o == "minimize_p99_latency")
                spec.optimize = Objective::MinimizeP99Latency;
            else
                throw std::invalid_argument("unknown optimize objective: " + o);
        }
        return spec;
    } catch (const json::exception& e) {
        throw std::invalid_argument(std::string("bad sweep config: ") + e.what());
    }
}

}  // namespace dm2
