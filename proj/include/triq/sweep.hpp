// sweep.hpp: run configurations, figure presets, the parallel sweep engine
// and the CSV / JSON-manifest writer.
//
// A run consists of one or more panels. Each panel fixes a base parameter set,
// sweeps up to two axes and evaluates a list of output groups at every grid
// point. Rows are ordered by orientation, then by the first axis, then by the
// second axis, whatever the thread count.

#pragma once

#include <array>
#include <filesystem>
#include <string>
#include <vector>

#include <json.hpp>

#include "triq/correlations.hpp"
#include "triq/model.hpp"

namespace triq::sweep {

inline constexpr const char* kEngineVersion = "1.0.0";

enum class Axis { TLeft, TRight, OmegaA, OmegaC, Omega, OmegaB, G, GAC, P };
enum class Spacing { Linear, Log };
enum class Orientation { Forward, Reverse };

enum class OutputGroup {
    Currents,
    ChannelSplit,
    PPoints,
    Rectification,
    Correlations,
    Asymmetry,
    SteadyState,
};
inline constexpr int kGroupCount = 7;

const char* to_string(Axis a);
const char* to_string(Spacing s);
const char* to_string(Orientation o);
const char* to_string(OutputGroup g);
Axis parse_axis(const std::string& s);
OutputGroup parse_output(const std::string& s);

struct AxisSpec {
    Axis axis = Axis::TLeft;
    double start = 0.0;
    double stop = 1.0;
    int count = 2;
    Spacing spacing = Spacing::Linear;

    // Endpoints are reproduced exactly.
    std::vector<double> values() const;
};

struct Panel {
    std::string name;  // file-name suffix; empty for single-panel runs
    SystemParams base;
    double p = 1.0;    // subspace-2 fraction unless p is an axis
    std::vector<AxisSpec> axes;
    std::vector<OutputGroup> outputs;
    std::vector<Orientation> orientations{Orientation::Forward};
    bool compare_independent = false;  // add forced-independent columns
};

struct RunConfig {
    std::string preset;  // figure id, empty for custom runs
    std::vector<Panel> panels;
    LogBase log_base = LogBase::Two;
    int theta_points = 64;
    int phi_points = 128;

    // Throws ConfigError naming the violated invariant.
    void validate() const;
};

// Figure presets: fig2a..fig2f, fig3, fig4ab, fig7, fig8, fig9.
const std::vector<std::string>& preset_ids();
RunConfig preset(const std::string& id);

// Throws ConfigError with line/column for malformed JSON and with the field
// path for invalid or unknown keys.
RunConfig parse_config(const std::string& text, const std::string& source = "<config>");
RunConfig load_config(const std::filesystem::path& path);
nlohmann::json to_json(const RunConfig& config);
nlohmann::json to_json(const SystemParams& params);

struct SweepRow {
    std::size_t index = 0;
    Orientation orientation = Orientation::Forward;
    std::vector<double> axis_values;
    SystemParams params;  // after axis values and orientation
    double p = 1.0;
    bool crossing = false;
    bool common = false;
    bool negative_gap = false;
    int null_dimension = 0;
    double residual = 0.0;  // max |L[rho]| of the forward steady state
    std::vector<std::string> warnings;
    std::string error;      // non-empty if the row failed; values are then NaN
    std::array<std::vector<double>, kGroupCount> values;
};

// Data columns of one group, in output order.
std::vector<std::string> group_columns(OutputGroup g, bool compare_independent);

struct RunOptions {
    Execution execution = Execution::Parallel;
    int threads = 0;  // 0: OpenMP default
};

struct PanelResult {
    std::string name;
    std::vector<SweepRow> rows;
};

struct RunResult {
    std::vector<PanelResult> panels;
};

// Throws ConfigError for an invalid config; row-level failures are recorded
// in the rows.
RunResult run_sweep(const RunConfig& config, const RunOptions& options = {});

// Evaluates a single grid point.
SweepRow evaluate_point(const Panel& panel, const RunConfig& config, std::size_t index,
                        Orientation orientation, const std::vector<double>& axis_values);

// Writes <prefix>[_<panel>]_<group>.csv and <prefix>_manifest.json; returns
// the paths written. Throws std::runtime_error naming the path on I/O failure.
std::vector<std::filesystem::path> write_outputs(const RunConfig& config, const RunResult& result,
                                                 const std::string& prefix);

// CSV text of one panel and group; what write_outputs puts in each file.
std::string csv_text(const Panel& panel, const PanelResult& result, OutputGroup g);
nlohmann::json manifest(const RunConfig& config, const RunResult& result,
                        const std::vector<std::filesystem::path>& files);

} // namespace triq::sweep
