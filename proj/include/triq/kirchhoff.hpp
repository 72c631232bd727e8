// kirchhoff.hpp: stationary distribution of a continuous-time Markov chain
// on a small undirected graph via the matrix-tree theorem. The weight of
// node r is the sum over spanning trees of the product of rates on edges
// oriented toward r. Used as an analytic oracle for rate-equation steady
// states; exponential in the edge count, so meant for a handful of nodes.

#pragma once

#include <vector>

namespace triq::kirchhoff {

struct Edge {
    int u;
    int v;
    double rate_uv;  // u -> v
    double rate_vu;  // v -> u
};

struct Graph {
    int nodes = 0;
    std::vector<Edge> edges;
};

// Every spanning tree as a list of edge indices.
std::vector<std::vector<int>> spanning_trees(const Graph& g);

// Unnormalized tree weights, one per node.
std::vector<double> tree_weights(const Graph& g);

// Normalized stationary distribution. Throws DomainError if all weights vanish.
std::vector<double> stationary(const Graph& g);

} // namespace triq::kirchhoff
