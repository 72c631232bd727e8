#include "test_main.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <thread>

#include "triq/diagnostics.hpp"
#include "triq/errors.hpp"
#include "triq/sweep.hpp"

using namespace triq;
using namespace triq::sweep;

namespace {

std::size_t column(OutputGroup g, bool compare, const std::string& name) {
    const auto cols = group_columns(g, compare);
    const auto it = std::find(cols.begin(), cols.end(), name);
    REQUIRE(it != cols.end());
    return static_cast<std::size_t>(it - cols.begin());
}

double value(const SweepRow& r, OutputGroup g, bool compare, const std::string& name) {
    return r.values[static_cast<int>(g)].at(column(g, compare, name));
}

std::string read_file(const std::filesystem::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

std::filesystem::path scratch_dir(const std::string& name) {
    const auto dir = std::filesystem::temp_directory_path() / ("triq_test_sweep_" + name);
    std::filesystem::remove_all(dir);
    std::filesystem::create_directories(dir);
    return dir;
}

std::string expect_config_error(const std::string& text) {
    try {
        parse_config(text, "cfg.json");
    } catch (const ConfigError& e) {
        return e.what();
    }
    FAIL("expected ConfigError for: " << text);
    return {};
}

bool contains(const std::string& s, const std::string& sub) { return s.find(sub) != std::string::npos; }

// Figure parameters written out independently of the preset code.
struct FigureRow {
    const char* preset;
    const char* panel;
    double omega_a, omega_b, omega_c, g, g_ac, kappa, t_right;
};

const FigureRow kFigureTable[] = {
    {"fig2a", "", 3, 5, 3, 0.1, 0.1, 1e-3, 21},
    {"fig2b", "", 3, 5, 3, 0.1, 0.1, 1e-3, 21},
    {"fig2c", "", 3, 5, 2, 0.1, 0.1, 1e-3, 21},
    {"fig2d", "", 3, 5, 3, 0.1, 0.1, 1e-3, 21},
    {"fig2e", "", 3, 5, 2, 0.1, 0.1, 1e-3, 21},
    {"fig2f", "", 3, 5, 3, 0.1, 0.1, 1e-3, 21},
    {"fig3", "abc", 3, 5, 3, 0.1, 0.1, 1e-3, 21},
    {"fig3", "de", 3, 5, 3, 0.1, 0.1, 1e-3, 21},
    {"fig4ab", "", 3, 5, 3, 0.1, 0.1, 1e-3, 21},
    {"fig7", "ab", 1, 5, 1, 0.1, 0.1, 1e-3, 1},
    {"fig7", "cd", 5, 1, 5, 0.1, 0.1, 1e-3, 1},
    {"fig8", "ab", 3, 5, 3, 0.1, 0.1, 1e-3, 21},
    {"fig8", "cd", 3, 5, 3, 0.1, 0.1, 1e-3, 21},
    {"fig9", "ab", 3, 5, 3, 0.1, 0.1, 1e-3, 21},
    {"fig9", "cd", 3, 5, 3, 0.1, 0.1, 1e-3, 21},
};

RunConfig small_config() {
    return parse_config(R"({
        "base": {"omega_A": 3, "omega_B": 5, "omega_C": 3, "g_AB": 0.1, "g_BC": 0.1,
                 "g_AC": 0.1, "kappa": 0.001, "T_L": 100, "T_R": 21, "mode": "auto"},
        "p": 0.7,
        "axes": [{"name": "T_L", "start": 5, "stop": 60, "count": 3},
                 {"name": "g_AC", "start": 0.05, "stop": 0.2, "count": 2, "spacing": "log"}],
        "outputs": ["currents", "channel_split", "p_points", "rectification", "correlations",
                    "asymmetry", "steady_state"],
        "orientations": ["forward", "reverse"],
        "compare_independent": true,
        "measurement": {"theta_points": 16, "phi_points": 32}
    })");
}

} // namespace

TEST_CASE("every preset matches its figure parameters") {
    std::size_t checked = 0;
    for (const std::string& id : preset_ids()) {
        const RunConfig c = preset(id);
        CHECK(c.preset == id);
        for (const Panel& pn : c.panels) {
            const auto it = std::find_if(std::begin(kFigureTable), std::end(kFigureTable),
                                         [&](const FigureRow& r) { return id == r.preset && pn.name == r.panel; });
            REQUIRE_MESSAGE(it != std::end(kFigureTable), id << " panel '" << pn.name << "'");
            const SystemParams& b = pn.base;
            CHECK(b.omega_a == it->omega_a);
            CHECK(b.omega_b == it->omega_b);
            CHECK(b.omega_c == it->omega_c);
            CHECK(b.g_ab == it->g);
            CHECK(b.g_bc == it->g);
            CHECK(b.g_ac == it->g_ac);
            CHECK(b.kappa == it->kappa);
            CHECK(b.t_right == it->t_right);
            CHECK(pn.p == 1.0);
            ++checked;
        }
    }
    CHECK(checked == std::size(kFigureTable));
    CHECK_THROWS_AS(preset("fig5"), ConfigError);
}

TEST_CASE("preset axes and outputs") {
    const RunConfig c = preset("fig2c");
    REQUIRE(c.panels[0].axes.size() == 2);
    CHECK(c.panels[0].axes[0].axis == Axis::TLeft);
    CHECK(c.panels[0].axes[1].axis == Axis::G);
    CHECK(c.panels[0].axes[0].count == 61);
    CHECK(c.panels[0].axes[1].count == 61);

    const RunConfig f3 = preset("fig3");
    CHECK(f3.panels[0].axes[0].axis == Axis::P);
    CHECK(f3.panels[0].base.t_left == 100.0);
    CHECK(f3.panels[0].orientations.size() == 2);

    const RunConfig f7 = preset("fig7");
    for (const Panel& pn : f7.panels) {
        CHECK(pn.compare_independent);
        const auto cols = group_columns(OutputGroup::Asymmetry, true);
        for (const char* name : {"R", "A_I", "I_forward", "I_reverse"})
            CHECK(std::find(cols.begin(), cols.end(), name) != cols.end());
        CHECK(std::find(pn.outputs.begin(), pn.outputs.end(), OutputGroup::Asymmetry) != pn.outputs.end());
    }
}

TEST_CASE("axis values") {
    const AxisSpec lin{Axis::TLeft, 0.0, 100.0, 61, Spacing::Linear};
    const auto v = lin.values();
    REQUIRE(v.size() == 61);
    CHECK(v.front() == 0.0);
    CHECK(v.back() == 100.0);
    for (std::size_t i = 1; i < v.size(); ++i) CHECK(v[i] - v[i - 1] == doctest::Approx(100.0 / 60));

    const AxisSpec lg{Axis::TLeft, 0.1, 100.0, 4, Spacing::Log};
    const auto w = lg.values();
    CHECK(w.front() == 0.1);
    CHECK(w.back() == 100.0);
    CHECK(w[1] == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(w[2] == doctest::Approx(10.0).epsilon(1e-14));
}

TEST_CASE("config parsing and round trip") {
    const RunConfig c = small_config();
    REQUIRE(c.panels.size() == 1);
    const Panel& pn = c.panels[0];
    CHECK(pn.p == 0.7);
    CHECK(pn.axes[1].spacing == Spacing::Log);
    CHECK(pn.outputs.size() == 7);
    CHECK(pn.compare_independent);
    CHECK(c.theta_points == 16);

    // Echo parses back to the same config.
    nlohmann::json echo = to_json(c);
    const RunConfig again = parse_config(echo.dump());
    CHECK(to_json(again) == echo);

    const RunConfig pre = parse_config(R"({"preset": "fig7", "log_base": "e"})");
    CHECK(pre.panels.size() == 2);
    CHECK(pre.log_base == LogBase::E);
}

TEST_CASE("config validation errors name the violated invariant") {
    const std::string base = R"("base": {"omega_A": 3, "omega_C": 3, "mode": "force_independent"})";
    CHECK(contains(expect_config_error(R"({)" + base + R"(, "axes": [{"name": "p", "start": 0, "stop": 1, "count": 5}], "outputs": ["currents"]})"),
                   "p axis is only valid in common mode"));
    CHECK(contains(expect_config_error(R"({"outputs": []})"), "outputs"));
    CHECK(contains(expect_config_error(R"({"outputs": ["currents"], "axes": [{"name": "T_L", "start": 1, "stop": 2, "count": 1}]})"),
                   "count must be >= 2"));
    CHECK(contains(expect_config_error(R"({"outputs": ["currents"], "axes": [{"name": "T_L", "start": 3, "stop": 2, "count": 4}]})"),
                   "start must be < stop"));
    CHECK(contains(expect_config_error(R"({"outputs": ["currents"], "axes": [{"name": "T_L", "start": 0, "stop": 2, "count": 4, "spacing": "log"}]})"),
                   "log spacing requires start > 0"));
    CHECK(contains(expect_config_error(R"({"outputs": ["currents"], "axes": [
        {"name": "omega", "start": 1, "stop": 2, "count": 4}, {"name": "omega_A", "start": 1, "stop": 2, "count": 4}]})"),
                   "overlaps"));
    CHECK(contains(expect_config_error(R"({"outputs": ["currents"], "axes": [
        {"name": "T_L", "start": 1, "stop": 2, "count": 2}, {"name": "T_R", "start": 1, "stop": 2, "count": 2},
        {"name": "g", "start": 0, "stop": 0.2, "count": 2}]})"),
                   "at most 2 axes"));
    CHECK(contains(expect_config_error(R"({"outputs": ["heat"]})"), "outputs[0]"));
    CHECK(contains(expect_config_error(R"({"outputs": ["currents"], "base": {"T_L": -1}})"), "base"));
}

TEST_CASE("unknown keys and malformed JSON are reported with their location") {
    CHECK(contains(expect_config_error(R"({"outputs": ["currents"], "colour": 1})"), "colour: unknown key"));
    CHECK(contains(expect_config_error(R"({"outputs": ["currents"], "base": {"omega": 3}})"),
                   "base.omega: unknown key"));
    CHECK(contains(expect_config_error(R"({"outputs": ["currents"], "axes": [{"name": "T_L", "start": 1, "stop": 2, "count": 2, "step": 1}]})"),
                   "axes[0].step: unknown key"));
    CHECK(contains(expect_config_error(R"({"outputs": ["currents"], "axes": [{"name": "T_L", "start": "one", "stop": 2, "count": 2}]})"),
                   "axes[0].start: expected a number"));
    CHECK(contains(expect_config_error(R"({"preset": "fig7", "axes": []})"), "cannot be combined"));

    const std::string msg = expect_config_error("{\n  \"outputs\": [\"currents\"],\n  \"p\": 0.5,,\n}");
    CHECK(contains(msg, "cfg.json:3:"));
    CHECK(contains(msg, "malformed JSON"));
}

TEST_CASE("rows follow lexicographic axis order") {
    const RunConfig c = small_config();
    const RunResult r = run_sweep(c, {triq::Execution::Serial, 1});
    const auto& rows = r.panels[0].rows;
    REQUIRE(rows.size() == 2 * 3 * 2);
    const double tl[] = {5.0, 32.5, 60.0};
    const double gac[] = {0.05, 0.2};
    std::size_t i = 0;
    for (Orientation o : {Orientation::Forward, Orientation::Reverse})
        for (double t : tl)
            for (double g : gac) {
                const SweepRow& row = rows[i];
                CHECK(row.index == i);
                CHECK(row.orientation == o);
                CHECK(row.axis_values[0] == t);
                CHECK(row.axis_values[1] == g);
                CHECK(row.params.g_ac == g);
                CHECK((o == Orientation::Forward ? row.params.t_left : row.params.t_right) == t);
                CHECK(row.p == 0.7);
                CHECK(row.common);
                CHECK(row.crossing);
                CHECK(row.null_dimension == 2);
                CHECK(row.error.empty());
                ++i;
            }
}

TEST_CASE("parallel and serial sweeps agree exactly") {
    const RunConfig c = small_config();
    const RunResult serial = run_sweep(c, {triq::Execution::Serial, 1});
    const RunResult parallel = run_sweep(c, {triq::Execution::Parallel, 4});
    const RunResult one = run_sweep(c, {triq::Execution::Parallel, 1});
    const Panel& pn = c.panels[0];
    for (OutputGroup g : pn.outputs) {
        const std::string s = csv_text(pn, serial.panels[0], g);
        CHECK(s == csv_text(pn, parallel.panels[0], g));
        CHECK(s == csv_text(pn, one.panels[0], g));
    }
}

TEST_CASE("fig3 preset: q_L is linear in p with zero intercept") {
    RunConfig c = preset("fig3");
    c.panels.resize(1);
    const RunResult r = run_sweep(c);
    const auto& rows = r.panels[0].rows;
    REQUIRE(rows.size() == 202);
    for (std::size_t start : {std::size_t{0}, std::size_t{101}}) {
        const SweepRow& full = rows[start + 100];
        REQUIRE(full.p == 1.0);
        const double q1 = value(full, OutputGroup::Currents, false, "q_L");
        CHECK(std::abs(q1) > 1e-7);
        for (std::size_t k = 0; k <= 100; ++k) {
            const SweepRow& row = rows[start + k];
            const double q = value(row, OutputGroup::Currents, false, "q_L");
            CHECK(std::abs(q - row.p * q1) <= 1e-12 * std::abs(q1));
        }
        CHECK(std::abs(value(rows[start], OutputGroup::Currents, false, "q_L")) <= 1e-14 * std::abs(q1));
    }
    // The reverse orientation sends heat the other way.
    CHECK(value(rows[100], OutputGroup::Currents, false, "q_L") > 0.0);
    CHECK(value(rows[201], OutputGroup::Currents, false, "q_L") < 0.0);
}

TEST_CASE("fig4 preset: crossover fractions flatten above T = 10") {
    const RunConfig c = preset("fig4ab");
    const RunResult r = run_sweep(c);
    const auto& rows = r.panels[0].rows;
    REQUIRE(rows.size() == 242);
    for (Orientation o : {Orientation::Forward, Orientation::Reverse}) {
        double lo_d = 1, hi_d = 0, lo_c = 1, hi_c = 0, cold_lo_d = 1, cold_hi_d = 0;
        for (const SweepRow& row : rows) {
            if (row.orientation != o) continue;
            REQUIRE(row.error.empty());
            const double t = row.axis_values[0];
            const double pd = value(row, OutputGroup::PPoints, false, "p_d");
            const double pc = value(row, OutputGroup::PPoints, false, "p_c");
            CHECK(value(row, OutputGroup::PPoints, false, "p_c_in_range") == 1.0);
            if (t >= 10.0) {
                lo_d = std::min(lo_d, pd), hi_d = std::max(hi_d, pd);
                lo_c = std::min(lo_c, pc), hi_c = std::max(hi_c, pc);
            } else {
                cold_lo_d = std::min(cold_lo_d, pd), cold_hi_d = std::max(cold_hi_d, pd);
            }
        }
        CHECK(hi_c - lo_c < 5e-3);
        CHECK(hi_d - lo_d < 5e-3);
        if (o == Orientation::Forward) {
            CHECK(cold_hi_d - cold_lo_d > 0.2);
        } else {
            // Varying the cold side leaves p_c flat and moves p_d more.
            CHECK(hi_c - lo_c < 1e-4);
            CHECK(hi_c - lo_c < hi_d - lo_d);
        }
    }
}

TEST_CASE("equal temperatures give zero currents") {
    // In common mode the single-qubit channels still exchange heat through the
    // crossing channel; only the reservoir currents and q_B must vanish.
    for (const char* base : {R"("base": {})", R"("base": {"omega_C": 2})"}) {
        const RunConfig c = parse_config(std::string(R"({
            "axes": [{"name": "T_L", "start": 4, "stop": 9, "count": 2},
                     {"name": "T_R", "start": 4, "stop": 9, "count": 2}],
            "outputs": ["currents", "rectification"], )") + base + "}");
        const RunResult r = run_sweep(c);
        int equal = 0;
        for (const SweepRow& row : r.panels[0].rows) {
            if (row.params.t_left != row.params.t_right) continue;
            ++equal;
            std::vector<std::string> zero{"q_B", "q_L", "q_R"};
            if (!row.common) zero.insert(zero.end(), {"q_A", "q_C"});
            for (const auto& name : zero)
                CHECK(std::abs(value(row, OutputGroup::Currents, false, name)) <= 1e-14 * row.params.kappa);
            CHECK(value(row, OutputGroup::Rectification, false, "R") == 0.0);
        }
        CHECK(equal == 2);
    }
}

TEST_CASE("row failures are captured without aborting the sweep") {
    // omega_B = g_AB + g_BC closes a B gap, where the bath function is undefined.
    const RunConfig c = parse_config(R"({
        "axes": [{"name": "omega_B", "start": 0.2, "stop": 5, "count": 2}],
        "outputs": ["currents", "p_points"]
    })");
    const RunResult r = run_sweep(c);
    const auto& rows = r.panels[0].rows;
    REQUIRE(rows.size() == 2);
    CHECK_FALSE(rows[0].error.empty());
    CHECK(std::isnan(value(rows[0], OutputGroup::Currents, false, "q_L")));
    CHECK(std::isnan(value(rows[0], OutputGroup::PPoints, false, "p_d")));
    CHECK(rows[1].error.empty());
    CHECK(std::isfinite(value(rows[1], OutputGroup::PPoints, false, "p_d")));
    const nlohmann::json m = manifest(c, r, {});
    CHECK(m["rows"][0]["failed"] == true);
    CHECK(m["rows"][1]["failed"] == false);
}

TEST_CASE("independent rows leave common-mode columns empty") {
    const RunConfig c = parse_config(R"({
        "base": {"omega_C": 2},
        "outputs": ["channel_split", "p_points"],
        "axes": [{"name": "T_L", "start": 30, "stop": 60, "count": 2}]
    })");
    const RunResult r = run_sweep(c);
    for (const SweepRow& row : r.panels[0].rows) {
        CHECK_FALSE(row.common);
        CHECK(row.null_dimension == 1);
        CHECK(std::isnan(value(row, OutputGroup::ChannelSplit, false, "q_L_direct")));
        CHECK(std::isnan(value(row, OutputGroup::PPoints, false, "p_c")));
    }
}

TEST_CASE("write_outputs: CSV format, manifest and byte-identical reruns") {
    const RunConfig c = small_config();
    const auto dir = scratch_dir("write");
    const std::string prefix = (dir / "run").string();
    const auto files = write_outputs(c, run_sweep(c), prefix);
    REQUIRE(files.size() == 8);
    std::vector<std::string> first;
    for (const auto& f : files) first.push_back(read_file(f));

    const std::string& currents = first[0];
    CHECK(files[0].filename() == "run_currents.csv");
    CHECK(currents.find('\r') == std::string::npos);
    CHECK(currents.back() == '\n');
    CHECK(std::count(currents.begin(), currents.end(), '\n') == 13);
    const std::string header = currents.substr(0, currents.find('\n'));
    CHECK(header.rfind("index,orientation,axis_T_L,axis_g_AC,omega_A", 0) == 0);
    CHECK(contains(header, ",q_L_independent,q_R_independent"));
    CHECK(contains(currents, "0.10000000000000001"));  // 17 significant digits

    const nlohmann::json m = nlohmann::json::parse(first.back());
    CHECK(m["engine"]["version"] == kEngineVersion);
    CHECK(m["log_base"] == "2");
    CHECK(m["rows"].size() == 12);
    for (const auto& row : m["rows"]) CHECK(row["crossing"] == true);
    CHECK(m["config"] == to_json(c));
    for (OutputGroup g : c.panels[0].outputs)
        for (const auto& col : group_columns(g, true)) CHECK_MESSAGE(m["column_dictionary"].contains(col), col);

    const auto again = write_outputs(c, run_sweep(c, {triq::Execution::Parallel, 3}), prefix);
    for (std::size_t i = 0; i < again.size(); ++i) CHECK(read_file(again[i]) == first[i]);

    CHECK_THROWS_WITH_AS(write_outputs(c, run_sweep(c), (dir / "missing" / "run").string()),
                         doctest::Contains("missing"), std::runtime_error);
    std::filesystem::remove_all(dir);
}

TEST_CASE("manifest records the crossing flag per row") {
    const RunConfig c = parse_config(R"({
        "base": {"omega_C": 2},
        "axes": [{"name": "omega_C", "start": 2, "stop": 3, "count": 2}],
        "outputs": ["currents"]
    })");
    const RunResult r = run_sweep(c);
    const nlohmann::json m = manifest(c, r, {});
    REQUIRE(m["rows"].size() == 2);
    CHECK(m["rows"][0]["crossing"] == false);
    CHECK(m["rows"][1]["crossing"] == true);
    CHECK(m["rows"][1]["common"] == true);
}

TEST_CASE("warning capture is per thread") {
    std::vector<std::string> seen;
    auto prev = diagnostics::set_handler([&](const std::string& s) { seen.push_back(s); });
    {
        diagnostics::ScopedCapture outer;
        diagnostics::warn("a");
        {
            diagnostics::ScopedCapture inner;
            diagnostics::warn("b");
            std::thread([] { diagnostics::warn("other thread"); }).join();
            CHECK(inner.messages() == std::vector<std::string>{"b"});
        }
        diagnostics::warn("c");
        CHECK(outer.messages() == std::vector<std::string>{"a", "c"});
    }
    diagnostics::warn("d");
    diagnostics::set_handler(prev);
    CHECK(seen == std::vector<std::string>{"other thread", "d"});
}
