// triqdiode: command-line front end (run / steady / validate).

#include <cstdlib>
#include <iostream>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "triq/correlations.hpp"
#include "triq/diagnostics.hpp"
#include "triq/errors.hpp"
#include "triq/liouvillian.hpp"
#include "triq/steady_state.hpp"
#include "triq/sweep.hpp"
#include "triq/thermodynamics.hpp"
#include "triq/validation.hpp"

using nlohmann::json;
using namespace triq;

namespace {

int threads_from_env() {
    const char* s = std::getenv("TRIQDIODE_THREADS");
    if (!s || !*s) return 0;
    char* end = nullptr;
    const long n = std::strtol(s, &end, 10);
    if (*end != '\0' || n < 1) throw ConfigError("TRIQDIODE_THREADS must be a positive integer");
    return static_cast<int>(n);
}

int cmd_run(const std::string& config_path, const std::string& preset_id, const std::string& out,
            int threads) {
    sweep::RunConfig config;
    if (!config_path.empty() && !preset_id.empty())
        throw ConfigError("--config and --preset are mutually exclusive");
    if (!preset_id.empty()) config = sweep::preset(preset_id);
    else if (!config_path.empty()) config = sweep::load_config(config_path);
    else throw ConfigError("run needs --config or --preset");

    sweep::RunOptions opts;
    opts.threads = threads > 0 ? threads : threads_from_env();
    const sweep::RunResult result = sweep::run_sweep(config, opts);
    const auto files = sweep::write_outputs(config, result, out);

    std::size_t rows = 0, failed = 0;
    for (const auto& pr : result.panels)
        for (const auto& r : pr.rows) {
            ++rows;
            failed += !r.error.empty();
        }
    std::cout << rows << " rows (" << failed << " with errors)\n";
    for (const auto& f : files) std::cout << f.string() << '\n';
    return 0;
}

json matrix_json(const Matrix8c& m, bool imag) {
    json rows = json::array();
    for (int i = 0; i < kDim; ++i) {
        json row = json::array();
        for (int j = 0; j < kDim; ++j) row.push_back(imag ? m(i, j).imag() : m(i, j).real());
        rows.push_back(row);
    }
    return rows;
}

int cmd_steady(const std::string& config_path) {
    const sweep::RunConfig config = sweep::load_config(config_path);
    const sweep::Panel& panel = config.panels.front();
    const SystemParams& params = panel.base;

    diagnostics::ScopedCapture capture;
    const Liouvillian gen(params);
    const bool common = common_mode_active(params);
    DensityMatrix rho;
    HeatReport heat;
    int null_dim = 0;
    if (common) {
        const SteadyDecomposition d = steady_chr(params, panel.p);
        rho = d.rho;
        heat = heat_report(gen, d);
        null_dim = null_space(build_M_chr(params).m).dimension;
    } else {
        rho = steady_ihr(params);
        heat = heat_report(gen, rho);
        null_dim = null_space(build_M_ihr(params).m).dimension;
    }
    MeasurementOptions mopts;
    mopts.theta_points = config.theta_points;
    mopts.phi_points = config.phi_points;
    const CorrelationReport c = correlation_report(rho, mopts, config.log_base);

    json out;
    out["params"] = sweep::to_json(params);
    out["p"] = panel.p;
    out["crossing"] = crossing_condition(params);
    out["common"] = common;
    out["rho"] = {{"re", matrix_json(rho.matrix(), false)}, {"im", matrix_json(rho.matrix(), true)}};
    json h{{"q_A", heat.q_a}, {"q_B", heat.q_b}, {"q_C", heat.q_c}, {"q_L", heat.q_l}, {"q_R", heat.q_r}};
    if (common) {
        h["q_L_direct"] = heat.q_l_direct;
        h["q_L_crossing"] = heat.q_l_crossing;
    }
    out["heat"] = h;
    out["correlations"] = {{"S_L", c.s_l}, {"S_R", c.s_r}, {"S_LR", c.s_lr},
                           {"I", c.mutual_information}, {"C", c.classical}, {"Q", c.discord},
                           {"N", c.negativity},
                           {"log_base", config.log_base == LogBase::Two ? "2" : "e"}};
    out["diagnostics"] = {{"null_dim", null_dim},
                          {"residual", gen.apply(rho.matrix(), Frame::Lab).cwiseAbs().maxCoeff()},
                          {"warnings", capture.messages()}};
    out["engine_version"] = sweep::kEngineVersion;
    std::cout << out.dump(2) << '\n';
    return 0;
}

int cmd_validate(int points) {
    OracleOptions opts;
    opts.points_per_mode = points;
    const OracleReport r = oracle_triangle(opts);
    std::cout << "oracle triangle: " << r.samples.size() << " points\n"
              << "  max elementwise disagreement " << r.max_disagreement << " (tol "
              << opts.tolerance << ")\n"
              << "  max conservation residual    " << r.max_conservation << " (tol "
              << opts.conservation_tol << ")\n"
              << (r.passed() ? "PASS" : "FAIL") << '\n';
    return r.passed() ? 0 : 1;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"triqdiode: steady states, heat currents and correlations of a three-qubit heat diode"};
    app.require_subcommand(1);

    std::string config_path, preset_id, out_prefix;
    int threads = 0;
    auto* run = app.add_subcommand("run", "Run a parameter sweep and write CSV files plus a manifest");
    run->add_option("--config", config_path, "JSON run configuration")->check(CLI::ExistingFile);
    run->add_option("--preset", preset_id, "Figure preset id")
        ->check(CLI::IsMember(sweep::preset_ids()));
    run->add_option("--out", out_prefix, "Output path prefix")->required();
    run->add_option("--threads", threads, "Worker threads (default: TRIQDIODE_THREADS or all)")
        ->check(CLI::PositiveNumber);

    std::string steady_config;
    auto* steady = app.add_subcommand("steady", "Print one steady state and its report as JSON");
    steady->add_option("--config", steady_config, "JSON configuration (base parameters and p)")
        ->required()
        ->check(CLI::ExistingFile);

    int points = 50;
    auto* validate = app.add_subcommand("validate", "Run the oracle-triangle self test");
    validate->add_option("--points", points, "Random points per dissipation mode")
        ->check(CLI::PositiveNumber);

    CLI11_PARSE(app, argc, argv);

    try {
        if (*run) return cmd_run(config_path, preset_id, out_prefix, threads);
        if (*steady) return cmd_steady(steady_config);
        if (*validate) return cmd_validate(points);
    } catch (const std::exception& e) {
        std::cerr << "triqdiode: " << e.what() << '\n';
        return 2;
    }
    return 0;
}
