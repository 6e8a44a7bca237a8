// Scenario runner, sweeps, tau optimization, figure presets and CSV output.
//
// CSV format (bit-specified): header row
//   scenario,scheme,quality,metric,axis,axis_value,source,value,flag
// floats printed with 9 significant digits, rows ordered by (scenario,
// axis_value, scheme, quality, metric, source). Curve metrics emit one row
// per grid point (axis "t" for latency, "delta" for PAoI); scalar metrics
// leave axis/axis_value empty. source is analytic, simulated or compare;
// flag is empty, "unstable", "lower_bound" or "simulation_only".
#pragma once

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "dm2/model.hpp"

namespace dm2 {

inline constexpr std::uint64_t kDefaultFrames = 1u << 20;  // 1,048,576

enum class Metric { LatencyCdf, PaoiCdf, P99Latency, P99Paoi, DeliveryProb };

const char* to_string(Metric m);

struct Scenario {
    std::string name;
    SystemConfig cfg;
    std::uint64_t n_frames = kDefaultFrames;
    std::uint64_t seed = 1;
    std::vector<Metric> metrics;
    std::vector<Quality> qualities;  // empty: scheme default (LQ+HQ for coded)
};

enum class SweepAxis { Tau, Eta, Epsilon };
enum class Objective { MinimizeP99Paoi, MinimizeP99Latency };

struct SweepSpec {
    Scenario base;
    SweepAxis axis = SweepAxis::Tau;
    std::vector<double> grid;
    std::optional<Objective> optimize;  // eta sweeps: metric at the best tau
};

struct ResultRow {
    std::string scenario;
    std::string scheme;
    std::string quality;
    std::string metric;
    std::string axis;        // "", "t", "delta", "tau", "eta", "epsilon"
    double axis_value = 0.0;
    bool has_axis = false;
    std::string source;      // analytic | simulated | compare
    double value = 0.0;
    std::string flag;        // "" | unstable | lower_bound | simulation_only
};

struct RunOptions {
    int grid_points = 200;                    // curve resolution
    std::optional<std::uint64_t> frames;      // override scenario n_frames
    std::optional<std::uint64_t> seed;        // override scenario seed
    bool with_simulation = true;
    bool with_analytic = true;
    int jobs = 0;                             // sweep workers; 0 = hardware
};

struct IoError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Scenario must have valid metrics/qualities for its scheme. QueueBased
// yields simulation-only rows flagged accordingly when analytics were
// requested.
std::vector<ResultRow> run_scenario(const Scenario& scn,
                                    const RunOptions& opt = {});

// One batch of rows per grid value; unstable points carry value = inf and
// flag "unstable". Points run in parallel; assembly order is deterministic.
std::vector<ResultRow> sweep(const SweepSpec& spec, const RunOptions& opt = {});

// Golden-section minimizer over tau, refined to 1e-3 relative.
double optimize_tau(const std::function<double(double)>& objective, double lo,
                    double hi);

void sort_rows(std::vector<ResultRow>& rows);
void write_csv(const std::vector<ResultRow>& rows, std::ostream& out);
// Sorted, deterministic file output; IoError on unwritable path.
void emit_csv(const std::vector<ResultRow>& rows, const std::string& path);

// Named figure families. Each preset reproduces one figure's data.
std::vector<std::string> preset_names();
std::vector<ResultRow> run_preset(const std::string& name,
                                  const RunOptions& opt = {});

// JSON configuration, field names mirroring Scenario/SweepSpec. The text is
// an object with either a "scenario" or a "sweep" key (or the bare scenario
// object). Throws std::invalid_argument on malformed input.
Scenario scenario_from_json_text(const std::string& text);
SweepSpec sweep_from_json_text(const std::string& text);

}  // namespace dm2
