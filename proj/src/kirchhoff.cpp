#include "triq/kirchhoff.hpp"

#include <functional>
#include <numeric>

#include "triq/errors.hpp"

namespace triq::kirchhoff {

namespace {

int find_root(std::vector<int>& parent, int x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
}

bool is_tree(const Graph& g, const std::vector<int>& chosen) {
    std::vector<int> parent(g.nodes);
    std::iota(parent.begin(), parent.end(), 0);
    for (int e : chosen) {
        const int a = find_root(parent, g.edges[e].u);
        const int b = find_root(parent, g.edges[e].v);
        if (a == b) return false;
        parent[a] = b;
    }
    return true;
}

} // namespace

std::vector<std::vector<int>> spanning_trees(const Graph& g) {
    std::vector<std::vector<int>> trees;
    const int need = g.nodes - 1;
    const int m = static_cast<int>(g.edges.size());
    std::vector<int> chosen;
    std::function<void(int)> pick = [&](int start) {
        if (static_cast<int>(chosen.size()) == need) {
            if (is_tree(g, chosen)) trees.push_back(chosen);
            return;
        }
        for (int e = start; e <= m - (need - static_cast<int>(chosen.size())); ++e) {
            chosen.push_back(e);
            pick(e + 1);
            chosen.pop_back();
        }
    };
    if (need >= 0) pick(0);
    return trees;
}

std::vector<double> tree_weights(const Graph& g) {
    const auto trees = spanning_trees(g);
    std::vector<double> w(g.nodes, 0.0);
    std::vector<std::vector<std::pair<int, int>>> adj(g.nodes);  // (neighbour, edge)
    for (int root = 0; root < g.nodes; ++root) {
        for (const auto& tree : trees) {
            for (auto& a : adj) a.clear();
            for (int e : tree) {
                adj[g.edges[e].u].push_back({g.edges[e].v, e});
                adj[g.edges[e].v].push_back({g.edges[e].u, e});
            }
            // Walk outward from the root; each edge points from child to parent.
            double prod = 1.0;
            std::vector<int> stack{root};
            std::vector<bool> seen(g.nodes, false);
            seen[root] = true;
            while (!stack.empty()) {
                const int parent = stack.back();
                stack.pop_back();
                for (auto [child, e] : adj[parent]) {
                    if (seen[child]) continue;
                    seen[child] = true;
                    const Edge& ed = g.edges[e];
                    prod *= (ed.u == child) ? ed.rate_uv : ed.rate_vu;
                    stack.push_back(child);
                }
            }
            w[root] += prod;
        }
    }
    return w;
}

std::vector<double> stationary(const Graph& g) {
    auto w = tree_weights(g);
    const double total = std::accumulate(w.begin(), w.end(), 0.0);
    if (!(total > 0.0)) throw DomainError("kirchhoff: all tree weights vanish");
    for (double& x : w) x /= total;
    return w;
}

} // namespace triq::kirchhoff
