#include "triq/model.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <map>
#include <set>
#include <sstream>

#include "triq/errors.hpp"

namespace triq {

const char* to_string(Qubit q) {
    switch (q) {
    case Qubit::A: return "A";
    case Qubit::B: return "B";
    case Qubit::C: return "C";
    }
    return "?";
}

const char* to_string(DissipationMode m) {
    switch (m) {
    case DissipationMode::Auto: return "auto";
    case DissipationMode::ForceIndependent: return "force_independent";
    case DissipationMode::ForceCommon: return "force_common";
    }
    return "?";
}

DissipationMode parse_mode(const std::string& s) {
    if (s == "auto" || s == "Auto") return DissipationMode::Auto;
    if (s == "force_independent" || s == "ForceIndependent") return DissipationMode::ForceIndependent;
    if (s == "force_common" || s == "ForceCommon") return DissipationMode::ForceCommon;
    throw ConfigError("unknown dissipation mode '" + s + "'");
}

namespace {

void require(bool ok, const char* what) {
    if (!ok) throw DomainError(std::string("SystemParams: ") + what);
}

} // namespace

void SystemParams::validate() const {
    require(std::isfinite(omega_a) && omega_a > 0.0, "omega_A must be > 0");
    require(std::isfinite(omega_b) && omega_b > 0.0, "omega_B must be > 0");
    require(std::isfinite(omega_c) && omega_c > 0.0, "omega_C must be > 0");
    require(std::isfinite(g_ab) && std::isfinite(g_bc) && std::isfinite(g_ac),
            "couplings must be finite");
    require(std::isfinite(kappa) && kappa > 0.0, "kappa must be > 0");
    require(std::isfinite(t_left) && t_left >= 0.0, "T_L must be finite and >= 0");
    require(std::isfinite(t_right) && t_right >= 0.0, "T_R must be finite and >= 0");
    if (mode == DissipationMode::ForceCommon && !crossing_condition(*this))
        throw ModeError("SystemParams: ForceCommon requires the crossing condition "
                        "(omega_A == omega_C and g_AB == g_BC)");
}

SystemParams SystemParams::swapped_temperatures() const {
    SystemParams out = *this;
    std::swap(out.t_left, out.t_right);
    return out;
}

double temperature_of(const SystemParams& p, Qubit q) {
    return q == Qubit::B ? p.t_right : p.t_left;
}

Reservoir reservoir_of(Qubit q) {
    return q == Qubit::B ? Reservoir::Right : Reservoir::Left;
}

bool crossing_condition(const SystemParams& p) {
    const double domega = std::abs(p.omega_a - p.omega_c);
    const double dg = std::abs(p.g_ab - p.g_bc);
    const double omega_scale = std::max(p.omega_a, p.omega_c);
    const double g_scale = std::max({std::abs(p.g_ab), std::abs(p.g_bc), 1.0});
    return domega <= kDegeneracyTol * omega_scale && dg <= kDegeneracyTol * g_scale;
}

bool common_mode_active(const SystemParams& p) {
    switch (p.mode) {
    case DissipationMode::ForceIndependent: return false;
    case DissipationMode::ForceCommon: return true;
    case DissipationMode::Auto: return crossing_condition(p);
    }
    return false;
}

int spin(int level, Qubit q) {
    const int bit = 2 - static_cast<int>(q);  // A is the most significant
    return ((level >> bit) & 1) ? -1 : +1;
}

EigenSystem eigenvalues(const SystemParams& p) {
    EigenSystem es;
    for (int k = 0; k < 8; ++k) {
        const int sa = spin(k, Qubit::A);
        const int sb = spin(k, Qubit::B);
        const int sc = spin(k, Qubit::C);
        es.lambdas[k] = 0.5 * (sa * p.omega_a + sb * p.omega_b + sc * p.omega_c
                               + sa * sb * p.g_ab + sb * sc * p.g_bc + sa * sc * p.g_ac);
    }
    return es;
}

std::array<Transition, 4> TransitionTable::of(Qubit q) const {
    const int base = 4 * static_cast<int>(q);
    return {entries[base], entries[base + 1], entries[base + 2], entries[base + 3]};
}

TransitionTable transition_table(const SystemParams& p) {
    static constexpr std::array<std::array<int, 2>, 12> kPairs{{
        {0, 4}, {1, 5}, {2, 6}, {3, 7},   // A: 15 26 37 48
        {0, 2}, {1, 3}, {4, 6}, {5, 7},   // B: 13 24 57 68
        {0, 1}, {2, 3}, {4, 5}, {6, 7}}}; // C: 12 34 56 78

    TransitionTable t;
    t.spectrum = eigenvalues(p);
    t.degenerate = crossing_condition(p);
    for (int n = 0; n < 12; ++n) {
        const auto q = static_cast<Qubit>(n / 4);
        const int from = kPairs[n][0];
        const int to = kPairs[n][1];
        const double w = t.spectrum.lambdas[from] - t.spectrum.lambdas[to];
        t.entries[n] = Transition{q, from, to, w};
        if (w <= 0.0) t.has_negative_gap = true;
    }
    const double w24 = t.entries[kDegenerateBPair[0]].frequency;
    const double w57 = t.entries[kDegenerateBPair[1]].frequency;
    t.b_pair_degenerate = std::abs(w24 - w57) <= kDegeneracyTol * std::max({std::abs(w24), std::abs(w57), 1.0});
    return t;
}

double bose_occupation(double omega, double temperature) {
    if (temperature == 0.0) return 0.0;
    return 1.0 / std::expm1(omega / temperature);
}

double bath_rate(double kappa, double signed_omega, double temperature) {
    if (signed_omega == 0.0)
        throw DomainError("bath_rate: zero transition frequency has no Bose occupation");
    const double w = std::abs(signed_omega);
    const double n = bose_occupation(w, temperature);
    return signed_omega > 0.0 ? kappa * n : kappa * (n + 1.0);
}

SpectralDensity spectral_density(double kappa, double omega, double temperature) {
    if (!(omega > 0.0)) throw DomainError("spectral_density: omega must be > 0");
    if (!(kappa > 0.0)) throw DomainError("spectral_density: kappa must be > 0");
    if (!(temperature >= 0.0)) throw DomainError("spectral_density: temperature must be >= 0");
    const double n = bose_occupation(omega, temperature);
    return {kappa * n, kappa * (n + 1.0)};
}

// ---------------------------------------------------------------- cycles

namespace {

int reduced_label(int level) {
    static constexpr std::array<int, 8> kMerge{1, 2, 3, 4, 2, 6, 4, 8};
    return kMerge[level];
}

struct Arc {
    int to;
    Reservoir reservoir;
};

std::vector<TransitionCycle> enumerate_impl(const TransitionTable& table, int excluded_qubit) {
    if (!table.degenerate)
        throw ModeError("enumerate_cycles: the reduced level diagram requires the crossing condition");

    std::map<int, std::vector<Arc>> adj;
    std::set<std::pair<int, int>> seen;
    for (const auto& e : table.entries) {
        if (static_cast<int>(e.qubit) == excluded_qubit) continue;
        const int u = reduced_label(e.from);
        const int v = reduced_label(e.to);
        if (u == v || !seen.insert({std::min(u, v), std::max(u, v)}).second) continue;
        const Reservoir r = reservoir_of(e.qubit);
        adj[u].push_back({v, r});
        adj[v].push_back({u, r});
    }
    for (auto& [node, arcs] : adj)
        std::sort(arcs.begin(), arcs.end(), [](const Arc& a, const Arc& b) { return a.to > b.to; });

    auto energy = [&](int label) { return table.spectrum.lambdas[label - 1]; };

    // Each cycle is rooted at its largest label; DFS only through smaller ones.
    std::vector<TransitionCycle> cycles;
    std::vector<int> path;
    std::vector<Reservoir> path_res;
    std::function<void(int, int)> dfs = [&](int root, int node) {
        for (const Arc& arc : adj[node]) {
            if (arc.to == root && path.size() >= 3) {
                TransitionCycle c;
                c.labels = path;
                c.labels.push_back(root);
                auto res = path_res;
                res.push_back(arc.reservoir);
                for (std::size_t i = 0; i + 1 < c.labels.size(); ++i) {
                    const int a = c.labels[i];
                    const int b = c.labels[i + 1];
                    const double w = energy(a) - energy(b);
                    c.edges.push_back({a, b, res[i], w});
                    c.energy_sum += w;
                    if (res[i] == Reservoir::Left) {
                        c.uses_left = true;
                        c.heat_from_left -= w;
                    } else {
                        c.uses_right = true;
                    }
                }
                cycles.push_back(std::move(c));
                continue;
            }
            if (arc.to >= root) continue;
            if (std::find(path.begin(), path.end(), arc.to) != path.end()) continue;
            path.push_back(arc.to);
            path_res.push_back(arc.reservoir);
            dfs(root, arc.to);
            path.pop_back();
            path_res.pop_back();
        }
    };

    std::vector<int> roots;
    for (const auto& [node, arcs] : adj) roots.push_back(node);
    std::sort(roots.rbegin(), roots.rend());
    for (int root : roots) {
        path = {root};
        path_res.clear();
        dfs(root, root);
    }
    return cycles;
}

} // namespace

std::vector<TransitionCycle> enumerate_cycles(const TransitionTable& table) {
    return enumerate_impl(table, -1);
}

std::vector<TransitionCycle> enumerate_cycles(const TransitionTable& table, Qubit exclude) {
    return enumerate_impl(table, static_cast<int>(exclude));
}

} // namespace triq
