#pragma once

#include <complex>
#include <cstddef>
#include <vector>

#include "matchpoly/exact.hpp"
#include "matchpoly/graph.hpp"
#include "matchpoly/rational.hpp"

namespace matchpoly {

// Rooted tree of self-avoiding walks from a root vertex: each node is a
// simple path in G starting at the root, children extend the walk by one
// unvisited neighbor (ordered by vertex id, so construction is
// deterministic). Nodes are stored in BFS order.
struct SawNode {
    int parent;         // -1 for the root
    int depth;          // root depth 0
    int source_vertex;  // originating vertex of G
};

struct SawTree {
    std::vector<SawNode> nodes;
    std::vector<std::vector<int>> children;
    int root = 0;
    std::vector<int> cut_leaves;  // nodes truncated at depth_cap
    int depth_cap = 0;

    size_t size() const { return nodes.size(); }
    bool is_cut(int id) const;
    // The tree as a plain Graph (node i becomes vertex i).
    Graph to_graph() const;
    // Number of nodes at each depth 0..depth_cap.
    std::vector<size_t> depth_histogram() const;
};

SawTree build_saw_tree(const Graph& g, int v, int depth_cap, size_t node_cap = 4'000'000);

// Bottom-up evaluation of x = 1/(1 + gamma * sum of child values); leaves
// (genuine ones and cut leaves alike) take leaf_value. With leaf_value = 1
// this computes p_root of the (truncated) tree. Throws
// VanishingDenominatorError with the offending node id.
ExactComplex eval_tree_ratio(const SawTree& t, const ExactComplex& gamma,
                             const ExactComplex& leaf_value);
std::complex<double> eval_tree_ratio(const SawTree& t, std::complex<double> gamma,
                                     std::complex<double> leaf_value);

// Exact difference p_v(G) - p_root(T_SAW(v,G)), both sides via the exact
// engine. Must be zero whenever both partition functions are nonzero.
ExactComplex walk_tree_residual(const Graph& g, int v, const ExactComplex& gamma,
                             size_t node_cap = 4'000'000);

}  // namespace matchpoly
