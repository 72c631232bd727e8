#include "triq/sweep.hpp"

#include <omp.h>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <limits>
#include <set>
#include <sstream>

#include "triq/diagnostics.hpp"
#include "triq/errors.hpp"
#include "triq/liouvillian.hpp"
#include "triq/steady_state.hpp"
#include "triq/thermodynamics.hpp"

namespace triq::sweep {

using json = nlohmann::json;

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

struct Named {
    const char* name;
    int value;
};

constexpr Named kAxisNames[] = {
    {"T_L", 0}, {"T_R", 1}, {"omega_A", 2}, {"omega_C", 3}, {"omega", 4},
    {"omega_B", 5}, {"g", 6}, {"g_AC", 7}, {"p", 8}};

constexpr Named kGroupNames[] = {
    {"currents", 0}, {"channel_split", 1}, {"p_points", 2}, {"rectification", 3},
    {"correlations", 4}, {"asymmetry", 5}, {"steady_state", 6}};

[[noreturn]] void fail(const std::string& path, const std::string& what) {
    throw ConfigError(path.empty() ? what : path + ": " + what);
}

} // namespace

const char* to_string(Axis a) { return kAxisNames[static_cast<int>(a)].name; }
const char* to_string(Spacing s) { return s == Spacing::Linear ? "linear" : "log"; }
const char* to_string(Orientation o) { return o == Orientation::Forward ? "forward" : "reverse"; }
const char* to_string(OutputGroup g) { return kGroupNames[static_cast<int>(g)].name; }

Axis parse_axis(const std::string& s) {
    for (const auto& n : kAxisNames)
        if (s == n.name) return static_cast<Axis>(n.value);
    throw ConfigError("unknown axis '" + s + "'");
}

OutputGroup parse_output(const std::string& s) {
    for (const auto& n : kGroupNames)
        if (s == n.name) return static_cast<OutputGroup>(n.value);
    throw ConfigError("unknown output group '" + s + "'");
}

std::vector<double> AxisSpec::values() const {
    std::vector<double> v(static_cast<std::size_t>(count));
    const double last = count - 1;
    if (spacing == Spacing::Linear) {
        for (int i = 0; i < count; ++i) v[i] = start + (stop - start) * (i / last);
    } else {
        const double a = std::log(start), b = std::log(stop);
        for (int i = 0; i < count; ++i) v[i] = std::exp(a + (b - a) * (i / last));
    }
    v.front() = start;
    v.back() = stop;
    return v;
}

// ---------------------------------------------------------------- validation

namespace {

bool is_temperature(Axis a) { return a == Axis::TLeft || a == Axis::TRight; }

// Parameters an axis writes to; overlapping axes are rejected.
std::vector<int> targets(Axis a) {
    switch (a) {
    case Axis::Omega: return {static_cast<int>(Axis::OmegaA), static_cast<int>(Axis::OmegaC)};
    default: return {static_cast<int>(a)};
    }
}

void validate_axis(const AxisSpec& ax, const std::string& path) {
    if (!std::isfinite(ax.start) || !std::isfinite(ax.stop)) fail(path, "start and stop must be finite");
    if (ax.count < 2) fail(path, "count must be >= 2");
    if (!(ax.start < ax.stop)) fail(path, "start must be < stop");
    if (ax.spacing == Spacing::Log && !(ax.start > 0.0)) fail(path, "log spacing requires start > 0");
    if (ax.axis == Axis::P && (ax.start < 0.0 || ax.stop > 1.0)) fail(path, "p must lie in [0, 1]");
    if (is_temperature(ax.axis) && ax.start < 0.0) fail(path, "temperatures must be >= 0");
}

void validate_panel(const Panel& panel, const std::string& path) {
    if (panel.axes.size() > 2) fail(path + ".axes", "at most 2 axes");
    std::set<int> written;
    bool p_axis = false, breaks_crossing = false;
    for (std::size_t i = 0; i < panel.axes.size(); ++i) {
        const AxisSpec& ax = panel.axes[i];
        validate_axis(ax, path + ".axes[" + std::to_string(i) + "]");
        for (int t : targets(ax.axis))
            if (!written.insert(t).second)
                fail(path + ".axes[" + std::to_string(i) + "]", "axis overlaps another axis");
        p_axis |= ax.axis == Axis::P;
        breaks_crossing |= ax.axis == Axis::OmegaA || ax.axis == Axis::OmegaC;
    }
    if (panel.outputs.empty()) fail(path + ".outputs", "at least one output group is required");
    if (std::set<OutputGroup>(panel.outputs.begin(), panel.outputs.end()).size() != panel.outputs.size())
        fail(path + ".outputs", "duplicate output group");
    if (panel.orientations.empty()) fail(path + ".orientations", "at least one orientation is required");
    if (std::set<Orientation>(panel.orientations.begin(), panel.orientations.end()).size()
        != panel.orientations.size())
        fail(path + ".orientations", "duplicate orientation");
    if (!(panel.p >= 0.0 && panel.p <= 1.0)) fail(path + ".p", "must lie in [0, 1]");
    try {
        panel.base.validate();
    } catch (const std::exception& e) {
        fail(path + ".base", e.what());
    }
    if (p_axis) {
        if (!common_mode_active(panel.base))
            fail(path + ".axes", "p axis is only valid in common mode");
        if (breaks_crossing && panel.base.mode != DissipationMode::ForceCommon)
            fail(path + ".axes", "p axis cannot be combined with an omega_A or omega_C axis");
    }
}

} // namespace

void RunConfig::validate() const {
    if (panels.empty()) fail("panels", "at least one panel is required");
    if (theta_points < 2) fail("measurement.theta_points", "must be >= 2");
    if (phi_points < 1) fail("measurement.phi_points", "must be >= 1");
    std::set<std::string> names;
    for (std::size_t i = 0; i < panels.size(); ++i) {
        const std::string path = panels.size() == 1 ? "" : "panels[" + std::to_string(i) + "]";
        validate_panel(panels[i], path.empty() ? "config" : path);
        if (!names.insert(panels[i].name).second) fail(path, "duplicate panel name");
    }
}

// ---------------------------------------------------------------- presets

namespace {

// Shared figure parameters: omega = 3, omega_B = 5, g = g_AC = 0.1,
// kappa = 1e-3, T_R = 21, p = 1.
SystemParams fig2_base() {
    SystemParams p;
    p.omega_a = 3.0;
    p.omega_b = 5.0;
    p.omega_c = 3.0;
    p.g_ab = p.g_bc = 0.1;
    p.g_ac = 0.1;
    p.kappa = 1e-3;
    p.t_left = 100.0;
    p.t_right = 21.0;
    p.mode = DissipationMode::Auto;
    return p;
}

AxisSpec lin(Axis a, double start, double stop, int count) {
    return {a, start, stop, count, Spacing::Linear};
}

AxisSpec logspace(Axis a, double start, double stop, int count) {
    return {a, start, stop, count, Spacing::Log};
}

constexpr int kSurface = 61;

const std::vector<Orientation> kBoth{Orientation::Forward, Orientation::Reverse};

Panel fig2_panel(bool unequal, AxisSpec second, bool compare) {
    Panel pn;
    pn.base = fig2_base();
    if (unequal) pn.base.omega_c = 2.0;
    pn.axes = {lin(Axis::TLeft, 0.0, 100.0, kSurface), second};
    pn.outputs = {OutputGroup::Currents};
    pn.compare_independent = compare;
    return pn;
}

Panel fig7_panel(const std::string& name, double omega, double omega_b) {
    Panel pn;
    pn.name = name;
    pn.base = fig2_base();
    pn.base.omega_a = pn.base.omega_c = omega;
    pn.base.omega_b = omega_b;
    pn.base.t_right = 1.0;
    pn.base.t_left = 3.0;
    pn.axes = {lin(Axis::TLeft, 0.1, 10.0, 100)};
    pn.outputs = {OutputGroup::Rectification, OutputGroup::Asymmetry};
    pn.compare_independent = true;
    return pn;
}

Panel crossover_panel(const std::string& name, AxisSpec first) {
    Panel pn;
    pn.name = name;
    pn.base = fig2_base();
    pn.axes = {first, logspace(Axis::TLeft, 0.1, 100.0, kSurface)};
    pn.outputs = {OutputGroup::PPoints};
    pn.orientations = kBoth;
    return pn;
}

} // namespace

const std::vector<std::string>& preset_ids() {
    static const std::vector<std::string> ids{"fig2a", "fig2b", "fig2c", "fig2d", "fig2e", "fig2f",
                                              "fig3", "fig4ab", "fig7", "fig8", "fig9"};
    return ids;
}

RunConfig preset(const std::string& id) {
    RunConfig c;
    c.preset = id;
    if (id == "fig2a") {
        Panel pn = fig2_panel(false, lin(Axis::OmegaC, 1.0, 5.0, kSurface), false);
        // omega_C = omega_A lies on the grid; keep the whole surface independent.
        pn.base.mode = DissipationMode::ForceIndependent;
        c.panels = {pn};
    } else if (id == "fig2b") {
        c.panels = {fig2_panel(false, lin(Axis::Omega, 1.0, 5.0, kSurface), true)};
    } else if (id == "fig2c") {
        c.panels = {fig2_panel(true, lin(Axis::G, 0.0, 0.3, kSurface), false)};
    } else if (id == "fig2d") {
        c.panels = {fig2_panel(false, lin(Axis::G, 0.0, 0.3, kSurface), true)};
    } else if (id == "fig2e") {
        c.panels = {fig2_panel(true, lin(Axis::GAC, 0.0, 0.3, kSurface), false)};
    } else if (id == "fig2f") {
        c.panels = {fig2_panel(false, lin(Axis::GAC, 0.0, 0.3, kSurface), true)};
    } else if (id == "fig3") {
        Panel fraction;
        fraction.name = "abc";
        fraction.base = fig2_base();
        fraction.axes = {lin(Axis::P, 0.0, 1.0, 101)};
        fraction.outputs = {OutputGroup::Currents, OutputGroup::ChannelSplit, OutputGroup::PPoints};
        fraction.orientations = kBoth;
        Panel temperature;
        temperature.name = "de";
        temperature.base = fig2_base();
        temperature.axes = {lin(Axis::TLeft, 0.0, 100.0, kSurface), lin(Axis::P, 0.0, 1.0, 5)};
        temperature.outputs = {OutputGroup::Currents, OutputGroup::ChannelSplit};
        c.panels = {fraction, temperature};
    } else if (id == "fig4ab") {
        Panel pn;
        pn.base = fig2_base();
        pn.axes = {logspace(Axis::TLeft, 0.1, 100.0, 121)};
        pn.outputs = {OutputGroup::PPoints};
        pn.orientations = kBoth;
        c.panels = {pn};
    } else if (id == "fig7") {
        c.panels = {fig7_panel("ab", 1.0, 5.0), fig7_panel("cd", 5.0, 1.0)};
    } else if (id == "fig8") {
        c.panels = {crossover_panel("ab", lin(Axis::Omega, 1.0, 10.0, kSurface)),
                    crossover_panel("cd", lin(Axis::OmegaB, 1.0, 10.0, kSurface))};
    } else if (id == "fig9") {
        c.panels = {crossover_panel("ab", lin(Axis::G, 0.0, 0.3, kSurface)),
                    crossover_panel("cd", lin(Axis::GAC, 0.0, 0.3, kSurface))};
    } else {
        throw ConfigError("unknown preset '" + id + "'");
    }
    c.validate();
    return c;
}

// ---------------------------------------------------------------- JSON

namespace {

void check_keys(const json& obj, const std::string& path, std::initializer_list<const char*> allowed) {
    if (!obj.is_object()) fail(path, "expected an object");
    for (const auto& [key, value] : obj.items()) {
        (void)value;
        if (std::none_of(allowed.begin(), allowed.end(), [&](const char* a) { return key == a; }))
            fail(path.empty() ? key : path + "." + key, "unknown key");
    }
}

std::string join(const std::string& path, const std::string& key) {
    return path.empty() ? key : path + "." + key;
}

double number(const json& j, const std::string& path) {
    if (!j.is_number()) fail(path, "expected a number");
    return j.get<double>();
}

int integer(const json& j, const std::string& path) {
    if (!j.is_number_integer()) fail(path, "expected an integer");
    return j.get<int>();
}

std::string text(const json& j, const std::string& path) {
    if (!j.is_string()) fail(path, "expected a string");
    return j.get<std::string>();
}

bool boolean(const json& j, const std::string& path) {
    if (!j.is_boolean()) fail(path, "expected true or false");
    return j.get<bool>();
}

const json& array(const json& j, const std::string& path) {
    if (!j.is_array()) fail(path, "expected an array");
    return j;
}

template <class F>
auto wrap(const std::string& path, F&& f) {
    try {
        return f();
    } catch (const ConfigError& e) {
        fail(path, e.what());
    }
}

SystemParams parse_params(const json& j, const std::string& path) {
    check_keys(j, path, {"omega_A", "omega_B", "omega_C", "g_AB", "g_BC", "g_AC", "kappa", "T_L",
                         "T_R", "mode"});
    SystemParams p;
    const std::pair<const char*, double*> fields[] = {
        {"omega_A", &p.omega_a}, {"omega_B", &p.omega_b}, {"omega_C", &p.omega_c},
        {"g_AB", &p.g_ab},       {"g_BC", &p.g_bc},       {"g_AC", &p.g_ac},
        {"kappa", &p.kappa},     {"T_L", &p.t_left},      {"T_R", &p.t_right}};
    for (const auto& [key, dst] : fields)
        if (j.contains(key)) *dst = number(j.at(key), join(path, key));
    if (j.contains("mode")) {
        const std::string m = text(j.at("mode"), join(path, "mode"));
        p.mode = wrap(join(path, "mode"), [&] { return parse_mode(m); });
    }
    return p;
}

AxisSpec parse_axis_spec(const json& j, const std::string& path) {
    check_keys(j, path, {"name", "start", "stop", "count", "spacing"});
    for (const char* k : {"name", "start", "stop", "count"})
        if (!j.contains(k)) fail(join(path, k), "missing");
    AxisSpec a;
    const std::string name = text(j.at("name"), join(path, "name"));
    a.axis = wrap(join(path, "name"), [&] { return parse_axis(name); });
    a.start = number(j.at("start"), join(path, "start"));
    a.stop = number(j.at("stop"), join(path, "stop"));
    a.count = integer(j.at("count"), join(path, "count"));
    if (j.contains("spacing")) {
        const std::string s = text(j.at("spacing"), join(path, "spacing"));
        if (s == "linear") a.spacing = Spacing::Linear;
        else if (s == "log") a.spacing = Spacing::Log;
        else fail(join(path, "spacing"), "expected 'linear' or 'log'");
    }
    return a;
}

constexpr std::initializer_list<const char*> kPanelKeys{
    "name", "base", "p", "axes", "outputs", "orientations", "compare_independent"};

void parse_panel_fields(const json& j, const std::string& path, Panel& pn) {
    if (j.contains("name")) pn.name = text(j.at("name"), join(path, "name"));
    if (j.contains("base")) pn.base = parse_params(j.at("base"), join(path, "base"));
    if (j.contains("p")) pn.p = number(j.at("p"), join(path, "p"));
    if (j.contains("axes")) {
        const std::string ap = join(path, "axes");
        const json& axes = array(j.at("axes"), ap);
        for (std::size_t i = 0; i < axes.size(); ++i)
            pn.axes.push_back(parse_axis_spec(axes[i], ap + "[" + std::to_string(i) + "]"));
    }
    if (j.contains("outputs")) {
        const std::string op = join(path, "outputs");
        const json& outs = array(j.at("outputs"), op);
        for (std::size_t i = 0; i < outs.size(); ++i) {
            const std::string ip = op + "[" + std::to_string(i) + "]";
            const std::string s = text(outs[i], ip);
            pn.outputs.push_back(wrap(ip, [&] { return parse_output(s); }));
        }
    }
    if (j.contains("orientations")) {
        const std::string op = join(path, "orientations");
        const json& os = array(j.at("orientations"), op);
        pn.orientations.clear();
        for (std::size_t i = 0; i < os.size(); ++i) {
            const std::string ip = op + "[" + std::to_string(i) + "]";
            const std::string s = text(os[i], ip);
            if (s == "forward") pn.orientations.push_back(Orientation::Forward);
            else if (s == "reverse") pn.orientations.push_back(Orientation::Reverse);
            else fail(ip, "expected 'forward' or 'reverse'");
        }
    }
    if (j.contains("compare_independent"))
        pn.compare_independent = boolean(j.at("compare_independent"), join(path, "compare_independent"));
}

std::pair<int, int> line_column(const std::string& s, std::size_t byte) {
    int line = 1, col = 1;
    const std::size_t end = std::min(byte > 0 ? byte - 1 : 0, s.size());
    for (std::size_t i = 0; i < end; ++i) {
        if (s[i] == '\n') {
            ++line;
            col = 1;
        } else {
            ++col;
        }
    }
    return {line, col};
}

} // namespace

RunConfig parse_config(const std::string& source_text, const std::string& source) {
    json j;
    try {
        j = json::parse(source_text);
    } catch (const json::parse_error& e) {
        const auto [line, col] = line_column(source_text, e.byte);
        throw ConfigError(source + ":" + std::to_string(line) + ":" + std::to_string(col)
                          + ": malformed JSON: " + e.what());
    }
    if (!j.is_object()) throw ConfigError(source + ": top level must be an object");

    check_keys(j, "", {"preset", "log_base", "measurement", "panels", "name", "base", "p", "axes",
                       "outputs", "orientations", "compare_independent"});
    RunConfig c;
    if (j.contains("preset")) {
        for (const char* k : kPanelKeys)
            if (j.contains(k)) fail(k, "cannot be combined with a preset");
        if (j.contains("panels")) fail("panels", "cannot be combined with a preset");
        const std::string id = text(j.at("preset"), "preset");
        c = wrap("preset", [&] { return preset(id); });
    } else if (j.contains("panels")) {
        for (const char* k : kPanelKeys)
            if (j.contains(k)) fail(k, "must be given inside each panel when 'panels' is used");
        const json& ps = array(j.at("panels"), "panels");
        for (std::size_t i = 0; i < ps.size(); ++i) {
            const std::string path = "panels[" + std::to_string(i) + "]";
            check_keys(ps[i], path, kPanelKeys);
            Panel pn;
            parse_panel_fields(ps[i], path, pn);
            c.panels.push_back(pn);
        }
    } else {
        Panel pn;
        parse_panel_fields(j, "", pn);
        c.panels.push_back(pn);
    }
    if (j.contains("log_base")) {
        const std::string b = text(j.at("log_base"), "log_base");
        if (b == "2") c.log_base = LogBase::Two;
        else if (b == "e") c.log_base = LogBase::E;
        else fail("log_base", "expected \"2\" or \"e\"");
    }
    if (j.contains("measurement")) {
        const json& m = j.at("measurement");
        check_keys(m, "measurement", {"theta_points", "phi_points"});
        if (m.contains("theta_points")) c.theta_points = integer(m.at("theta_points"), "measurement.theta_points");
        if (m.contains("phi_points")) c.phi_points = integer(m.at("phi_points"), "measurement.phi_points");
    }
    c.validate();
    return c;
}

RunConfig load_config(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ConfigError(path.string() + ": cannot open");
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_config(ss.str(), path.string());
}

json to_json(const SystemParams& p) {
    return json{{"omega_A", p.omega_a}, {"omega_B", p.omega_b}, {"omega_C", p.omega_c},
                {"g_AB", p.g_ab},       {"g_BC", p.g_bc},       {"g_AC", p.g_ac},
                {"kappa", p.kappa},     {"T_L", p.t_left},      {"T_R", p.t_right},
                {"mode", to_string(p.mode)}};
}

json to_json(const RunConfig& c) {
    json panels = json::array();
    for (const Panel& pn : c.panels) {
        json axes = json::array();
        for (const AxisSpec& a : pn.axes)
            axes.push_back({{"name", to_string(a.axis)}, {"start", a.start}, {"stop", a.stop},
                            {"count", a.count}, {"spacing", to_string(a.spacing)}});
        json outputs = json::array();
        for (OutputGroup g : pn.outputs) outputs.push_back(to_string(g));
        json orientations = json::array();
        for (Orientation o : pn.orientations) orientations.push_back(to_string(o));
        panels.push_back({{"name", pn.name}, {"base", to_json(pn.base)}, {"p", pn.p}, {"axes", axes},
                          {"outputs", outputs}, {"orientations", orientations},
                          {"compare_independent", pn.compare_independent}});
    }
    json out{{"panels", panels},
             {"log_base", c.log_base == LogBase::Two ? "2" : "e"},
             {"measurement", {{"theta_points", c.theta_points}, {"phi_points", c.phi_points}}}};
    if (!c.preset.empty()) out["preset"] = c.preset;
    return out;
}

// ---------------------------------------------------------------- evaluation

std::vector<std::string> group_columns(OutputGroup g, bool compare) {
    std::vector<std::string> c;
    switch (g) {
    case OutputGroup::Currents:
        c = {"q_A", "q_B", "q_C", "q_L", "q_R"};
        if (compare) c.insert(c.end(), {"q_L_independent", "q_R_independent"});
        break;
    case OutputGroup::ChannelSplit:
        c = {"q_L_direct", "q_L_crossing"};
        break;
    case OutputGroup::PPoints:
        c = {"p_d", "p_c", "p_d_in_range", "p_c_in_range"};
        break;
    case OutputGroup::Rectification:
        c = {"q_forward", "q_reverse", "R", "R_defined", "R_from_right"};
        if (compare)
            c.insert(c.end(), {"q_forward_independent", "q_reverse_independent", "R_independent",
                               "R_defined_independent"});
        break;
    case OutputGroup::Correlations:
        c = {"S_L", "S_R", "S_LR", "I", "C", "Q", "N"};
        break;
    case OutputGroup::Asymmetry:
        c = {"R", "A_I", "I_forward", "I_reverse", "A_I_defined"};
        if (compare)
            c.insert(c.end(), {"R_independent", "A_I_independent", "I_forward_independent",
                               "I_reverse_independent"});
        break;
    case OutputGroup::SteadyState:
        c = {"rho_11", "rho_22", "rho_33", "rho_44", "rho_55", "rho_66", "rho_77", "rho_88",
             "re_rho_25", "im_rho_25", "re_rho_47", "im_rho_47"};
        break;
    }
    return c;
}

namespace {

void apply_axis(Axis a, double v, SystemParams& params, double& p) {
    switch (a) {
    case Axis::TLeft: params.t_left = v; break;
    case Axis::TRight: params.t_right = v; break;
    case Axis::OmegaA: params.omega_a = v; break;
    case Axis::OmegaC: params.omega_c = v; break;
    case Axis::Omega: params.omega_a = params.omega_c = v; break;
    case Axis::OmegaB: params.omega_b = v; break;
    case Axis::G: params.g_ab = params.g_bc = v; break;
    case Axis::GAC: params.g_ac = v; break;
    case Axis::P: p = v; break;
    }
}

double flag(bool b) { return b ? 1.0 : 0.0; }

struct PointState {
    SystemParams params;
    SystemParams independent;
    double p = 1.0;
    LogBase base = LogBase::Two;
    DensityMatrix rho;
    HeatReport heat;
    bool common = false;
};

std::vector<double> evaluate_group(OutputGroup g, const PointState& s, bool compare,
                                   const MeasurementOptions& mopts) {
    switch (g) {
    case OutputGroup::Currents: {
        std::vector<double> v{s.heat.q_a, s.heat.q_b, s.heat.q_c, s.heat.q_l, s.heat.q_r};
        if (compare) {
            const HeatReport h = heat_report(s.independent, steady_ihr(s.independent));
            v.insert(v.end(), {h.q_l, h.q_r});
        }
        return v;
    }
    case OutputGroup::ChannelSplit:
        if (!s.common) return {kNaN, kNaN};
        return {s.heat.q_l_direct, s.heat.q_l_crossing};
    case OutputGroup::PPoints: {
        if (!s.common) return {kNaN, kNaN, kNaN, kNaN};
        const CrossoverFractions f = crossover_fractions(s.params);
        return {f.p_d, f.p_c, flag(f.p_d_in_range), flag(f.p_c_in_range)};
    }
    case OutputGroup::Rectification: {
        const RectificationResult r = rectification(s.params, s.p);
        std::vector<double> v{r.q_forward, r.q_reverse, r.r, flag(r.defined), r.r_from_right};
        if (compare) {
            const RectificationResult ri = rectification(s.independent, 1.0);
            v.insert(v.end(), {ri.q_forward, ri.q_reverse, ri.r, flag(ri.defined)});
        }
        return v;
    }
    case OutputGroup::Correlations: {
        const CorrelationReport c = correlation_report(s.rho, mopts, s.base);
        return {c.s_l, c.s_r, c.s_lr, c.mutual_information, c.classical, c.discord, c.negativity};
    }
    case OutputGroup::Asymmetry: {
        const RectificationResult r = rectification(s.params, s.p);
        const AsymmetryResult a = asymmetry_factor(s.params, s.p, s.base);
        std::vector<double> v{r.r, a.a, a.i_forward, a.i_reverse, flag(a.defined)};
        if (compare) {
            const RectificationResult ri = rectification(s.independent, 1.0);
            const AsymmetryResult ai = asymmetry_factor(s.independent, 1.0, s.base);
            v.insert(v.end(), {ri.r, ai.a, ai.i_forward, ai.i_reverse});
        }
        return v;
    }
    case OutputGroup::SteadyState: {
        std::vector<double> v;
        for (int k = 0; k < kDim; ++k) v.push_back(s.rho(k, k).real());
        v.insert(v.end(), {s.rho(1, 4).real(), s.rho(1, 4).imag(), s.rho(3, 6).real(),
                           s.rho(3, 6).imag()});
        return v;
    }
    }
    return {};
}

} // namespace

SweepRow evaluate_point(const Panel& panel, const RunConfig& config, std::size_t index,
                        Orientation orientation, const std::vector<double>& axis_values) {
    SweepRow row;
    row.index = index;
    row.orientation = orientation;
    row.axis_values = axis_values;

    PointState s;
    s.params = panel.base;
    s.p = panel.p;
    s.base = config.log_base;
    for (std::size_t k = 0; k < panel.axes.size(); ++k)
        apply_axis(panel.axes[k].axis, axis_values[k], s.params, s.p);
    if (orientation == Orientation::Reverse) s.params = s.params.swapped_temperatures();
    s.independent = s.params;
    s.independent.mode = DissipationMode::ForceIndependent;
    row.params = s.params;
    row.p = s.p;

    for (OutputGroup g : panel.outputs)
        row.values[static_cast<int>(g)].assign(group_columns(g, panel.compare_independent).size(), kNaN);

    MeasurementOptions mopts;
    mopts.theta_points = config.theta_points;
    mopts.phi_points = config.phi_points;
    mopts.execution = triq::Execution::Serial;

    diagnostics::ScopedCapture capture;
    std::vector<std::string> errors;
    try {
        s.params.validate();
        const TransitionTable table = transition_table(s.params);
        row.crossing = crossing_condition(s.params);
        row.common = s.common = common_mode_active(s.params);
        row.negative_gap = table.has_negative_gap;
        const Liouvillian gen(s.params);
        if (s.common) {
            const SteadyDecomposition d = steady_chr(s.params, s.p);
            s.rho = d.rho;
            s.heat = heat_report(gen, d);
            row.null_dimension = null_space(build_M_chr(s.params).m).dimension;
        } else {
            s.rho = steady_ihr(s.params);
            s.heat = heat_report(gen, s.rho);
            row.null_dimension = null_space(build_M_ihr(s.params).m).dimension;
        }
        row.residual = gen.apply(s.rho.matrix(), Frame::Lab).cwiseAbs().maxCoeff();

        for (OutputGroup g : panel.outputs) {
            try {
                row.values[static_cast<int>(g)] = evaluate_group(g, s, panel.compare_independent, mopts);
            } catch (const std::exception& e) {
                errors.push_back(std::string(to_string(g)) + ": " + e.what());
            }
        }
    } catch (const std::exception& e) {
        errors.push_back(e.what());
    }
    for (std::size_t i = 0; i < errors.size(); ++i) row.error += (i ? "; " : "") + errors[i];
    row.warnings = capture.messages();
    return row;
}

RunResult run_sweep(const RunConfig& config, const RunOptions& options) {
    config.validate();
    RunResult result;
    for (const Panel& panel : config.panels) {
        std::vector<std::vector<double>> grids;
        for (const AxisSpec& a : panel.axes) grids.push_back(a.values());
        std::size_t per_orientation = 1;
        for (const auto& g : grids) per_orientation *= g.size();
        const std::size_t n = per_orientation * panel.orientations.size();

        // Row index -> (orientation, i0, i1), last axis fastest.
        auto point = [&](std::size_t idx, Orientation& o, std::vector<double>& values) {
            o = panel.orientations[idx / per_orientation];
            std::size_t rem = idx % per_orientation;
            values.assign(grids.size(), 0.0);
            for (std::size_t k = grids.size(); k-- > 0;) {
                values[k] = grids[k][rem % grids[k].size()];
                rem /= grids[k].size();
            }
        };

        PanelResult pr;
        pr.name = panel.name;
        pr.rows.resize(n);
        if (options.execution == triq::Execution::Serial) {
            for (std::size_t i = 0; i < n; ++i) {
                Orientation o;
                std::vector<double> v;
                point(i, o, v);
                pr.rows[i] = evaluate_point(panel, config, i, o, v);
            }
        } else {
            const int threads = options.threads > 0 ? options.threads : omp_get_max_threads();
            const long long count = static_cast<long long>(n);
#pragma omp parallel for schedule(dynamic) num_threads(threads)
            for (long long i = 0; i < count; ++i) {
                Orientation o;
                std::vector<double> v;
                point(static_cast<std::size_t>(i), o, v);
                pr.rows[i] = evaluate_point(panel, config, static_cast<std::size_t>(i), o, v);
            }
        }
        result.panels.push_back(std::move(pr));
    }
    return result;
}

// ---------------------------------------------------------------- output

namespace {

std::string fmt(double x) {
    if (std::isnan(x)) return "nan";
    if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

std::string csv_field(const std::string& s) {
    if (s.find_first_of(",\"\n\r") == std::string::npos) return s;
    std::string out = "\"";
    for (char ch : s) {
        if (ch == '"') out += '"';
        out += ch;
    }
    return out + '"';
}

std::string join_warnings(const std::vector<std::string>& w) {
    std::string out;
    for (std::size_t i = 0; i < w.size(); ++i) out += (i ? " | " : "") + w[i];
    return out;
}

const std::vector<std::string>& echo_columns() {
    static const std::vector<std::string> c{
        "omega_A", "omega_B", "omega_C", "g_AB", "g_BC", "g_AC", "kappa", "T_L", "T_R", "mode", "p",
        "crossing", "common", "negative_gap", "null_dim", "residual", "warnings", "error"};
    return c;
}

std::string file_stem(const std::string& prefix, const std::string& panel) {
    return panel.empty() ? prefix : prefix + "_" + panel;
}

void write_file(const std::filesystem::path& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error(path.string() + ": cannot open for writing");
    out.write(content.data(), static_cast<std::streamsize>(content.size()));
    out.close();
    if (!out) throw std::runtime_error(path.string() + ": write failed");
}

json column_dictionary(LogBase base) {
    const std::string ent = base == LogBase::Two ? "bits" : "nats";
    const std::string cur = "omega_0^2";
    json d;
    auto add = [&](const char* name, const std::string& desc, const std::string& unit) {
        d[name] = {{"description", desc}, {"unit", unit}};
    };
    add("index", "row number in lexicographic axis order", "");
    add("orientation", "forward: temperatures as configured; reverse: T_L and T_R exchanged", "");
    add("axis_<name>", "value of the named sweep axis", "as the parameter");
    for (const auto& n : kAxisNames) add(n.name, "parameter value", n.value == 8 ? "" : "omega_0");
    for (const char* n : {"omega_B", "g_AB", "g_BC", "kappa"}) add(n, "parameter value", "omega_0");
    add("mode", "requested dissipation mode", "");
    add("crossing", "crossing condition holds (omega_A == omega_C, g_AB == g_BC)", "");
    add("common", "crossing dissipator active", "");
    add("negative_gap", "some transition gap is <= 0", "");
    add("null_dim", "null-space dimension of the rate-equation coefficient matrix", "");
    add("residual", "max |L[rho]| of the steady state", "omega_0");
    add("warnings", "numerical warnings raised at this point", "");
    add("error", "failure message; affected values are nan", "");
    add("q_A", "heat current into the system through qubit A", cur);
    add("q_B", "heat current into the system through qubit B", cur);
    add("q_C", "heat current into the system through qubit C", cur);
    add("q_L", "heat current from the left reservoir", cur);
    add("q_R", "heat current from the right reservoir", cur);
    add("q_L_independent", "q_L with the crossing dissipator switched off", cur);
    add("q_R_independent", "q_R with the crossing dissipator switched off", cur);
    add("q_L_direct", "left current through the direct channels", cur);
    add("q_L_crossing", "left current through the crossing channel", cur);
    add("p_d", "fraction at which the direct left current vanishes", "");
    add("p_c", "fraction at which the crossing left current vanishes", "");
    add("p_d_in_range", "p_d lies in [0, 1]", "");
    add("p_c_in_range", "p_c lies in [0, 1]", "");
    add("q_forward", "q_L at (T_L, T_R)", cur);
    add("q_reverse", "q_L at (T_R, T_L)", cur);
    add("R", "rectification factor", "");
    add("R_defined", "R is defined (some current above 1e-16)", "");
    add("R_from_right", "rectification factor from q_R", "");
    add("q_forward_independent", "q_forward without crossing dissipator", cur);
    add("q_reverse_independent", "q_reverse without crossing dissipator", cur);
    add("R_independent", "R without crossing dissipator", "");
    add("R_defined_independent", "R_independent is defined", "");
    add("S_L", "entropy of the (A, C) subsystem", ent);
    add("S_R", "entropy of qubit B", ent);
    add("S_LR", "entropy of the full state", ent);
    add("I", "mutual information between (A, C) and B", ent);
    add("C", "classical correlation, measurement on B", ent);
    add("Q", "quantum discord I - C", ent);
    add("N", "negativity of the partial transpose over B", "");
    add("A_I", "asymmetry factor of the mutual information", "");
    add("I_forward", "mutual information at (T_L, T_R)", ent);
    add("I_reverse", "mutual information at (T_R, T_L)", ent);
    add("A_I_defined", "A_I is defined", "");
    add("A_I_independent", "A_I without crossing dissipator", "");
    add("I_forward_independent", "I_forward without crossing dissipator", ent);
    add("I_reverse_independent", "I_reverse without crossing dissipator", ent);
    for (int k = 1; k <= 8; ++k)
        add(("rho_" + std::to_string(k) + std::to_string(k)).c_str(), "steady-state population", "");
    add("re_rho_25", "real part of rho_25", "");
    add("im_rho_25", "imaginary part of rho_25", "");
    add("re_rho_47", "real part of rho_47", "");
    add("im_rho_47", "imaginary part of rho_47", "");
    return d;
}

} // namespace

std::string csv_text(const Panel& panel, const PanelResult& result, OutputGroup g) {
    std::string out = "index,orientation";
    for (const AxisSpec& a : panel.axes) out += std::string(",axis_") + to_string(a.axis);
    for (const auto& c : echo_columns()) out += "," + c;
    for (const auto& c : group_columns(g, panel.compare_independent)) out += "," + c;
    out += '\n';
    for (const SweepRow& r : result.rows) {
        out += std::to_string(r.index);
        out += ',';
        out += to_string(r.orientation);
        for (double v : r.axis_values) out += "," + fmt(v);
        const SystemParams& p = r.params;
        for (double v : {p.omega_a, p.omega_b, p.omega_c, p.g_ab, p.g_bc, p.g_ac, p.kappa, p.t_left,
                         p.t_right})
            out += "," + fmt(v);
        out += std::string(",") + triq::to_string(p.mode);
        out += "," + fmt(r.p);
        out += std::string(",") + (r.crossing ? "1" : "0");
        out += std::string(",") + (r.common ? "1" : "0");
        out += std::string(",") + (r.negative_gap ? "1" : "0");
        out += "," + std::to_string(r.null_dimension);
        out += "," + fmt(r.residual);
        out += "," + csv_field(join_warnings(r.warnings));
        out += "," + csv_field(r.error);
        for (double v : r.values[static_cast<int>(g)]) out += "," + fmt(v);
        out += '\n';
    }
    return out;
}

json manifest(const RunConfig& config, const RunResult& result,
              const std::vector<std::filesystem::path>& files) {
    json m;
    m["engine"] = {{"name", "triqdiode"}, {"version", kEngineVersion}};
    m["config"] = to_json(config);
    m["log_base"] = config.log_base == LogBase::Two ? "2" : "e";
    m["units"] = {{"energy", "omega_0 (hbar = 1)"},
                  {"temperature", "omega_0 (k_B = 1)"},
                  {"heat_current", "omega_0^2"},
                  {"entropy", config.log_base == LogBase::Two ? "bits" : "nats"}};
    json grids = json::array();
    for (std::size_t i = 0; i < config.panels.size(); ++i) {
        const Panel& pn = config.panels[i];
        json axes = json::array();
        for (const AxisSpec& a : pn.axes)
            axes.push_back({{"name", to_string(a.axis)}, {"count", a.count},
                            {"spacing", to_string(a.spacing)}});
        grids.push_back({{"panel", pn.name}, {"axes", axes}, {"rows", result.panels[i].rows.size()}});
    }
    m["grid"] = grids;
    if (!config.preset.empty())
        m["grid_note"] = "preset grid resolutions are engine defaults; the figures do not state them";
    m["column_dictionary"] = column_dictionary(config.log_base);
    json names = json::array();
    for (const auto& f : files) names.push_back(f.filename().string());
    m["files"] = names;
    json rows = json::array();
    for (const PanelResult& pr : result.panels)
        for (const SweepRow& r : pr.rows)
            rows.push_back({{"panel", pr.name}, {"index", r.index}, {"crossing", r.crossing},
                            {"common", r.common}, {"failed", !r.error.empty()}});
    m["rows"] = rows;
    return m;
}

std::vector<std::filesystem::path> write_outputs(const RunConfig& config, const RunResult& result,
                                                 const std::string& prefix) {
    if (result.panels.size() != config.panels.size())
        throw std::invalid_argument("write_outputs: result does not match config");
    std::vector<std::filesystem::path> files;
    for (std::size_t i = 0; i < config.panels.size(); ++i) {
        const Panel& pn = config.panels[i];
        for (OutputGroup g : pn.outputs) {
            const std::filesystem::path path =
                file_stem(prefix, pn.name) + "_" + to_string(g) + ".csv";
            write_file(path, csv_text(pn, result.panels[i], g));
            files.push_back(path);
        }
    }
    const std::filesystem::path mpath = prefix + "_manifest.json";
    write_file(mpath, manifest(config, result, files).dump(2) + "\n");
    files.push_back(mpath);
    return files;
}

} // namespace triq::sweep
