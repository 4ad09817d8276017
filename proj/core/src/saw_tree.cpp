#include "matchpoly/saw_tree.hpp"

#include <algorithm>

namespace matchpoly {

bool SawTree::is_cut(int id) const {
    return std::binary_search(cut_leaves.begin(), cut_leaves.end(), id);
}

Graph SawTree::to_graph() const {
    std::vector<std::pair<int, int>> edges;
    for (int i = 0; i < static_cast<int>(nodes.size()); ++i)
        if (nodes[i].parent >= 0) edges.emplace_back(nodes[i].parent, i);
    return Graph(static_cast<int>(nodes.size()), std::move(edges));
}

std::vector<size_t> SawTree::depth_histogram() const {
    std::vector<size_t> hist;
    for (const auto& n : nodes) {
        if (n.depth >= static_cast<int>(hist.size())) hist.resize(n.depth + 1, 0);
        ++hist[n.depth];
    }
    return hist;
}

SawTree build_saw_tree(const Graph& g, int v, int depth_cap, size_t node_cap) {
    if (v < 0 || v >= g.vertex_count()) throw DomainError("build_saw_tree: root out of range");
    if (depth_cap < 0) throw DomainError("build_saw_tree: negative depth cap");
    if (node_cap == 0) throw DomainError("build_saw_tree: node cap must be positive");

    SawTree t;
    t.depth_cap = depth_cap;
    t.nodes.push_back({-1, 0, v});
    t.children.emplace_back();

    std::vector<int> walk;  // scratch: source vertices on the root path
    for (size_t head = 0; head < t.nodes.size(); ++head) {
        const int depth = t.nodes[head].depth;
        if (depth == depth_cap) {
            t.cut_leaves.push_back(static_cast<int>(head));
            continue;
        }
        walk.clear();
        for (int a = static_cast<int>(head); a != -1; a = t.nodes[a].parent)
            walk.push_back(t.nodes[a].source_vertex);
        // Neighbor lists are sorted, so children come out ordered by id.
        for (int u : g.neighbors(t.nodes[head].source_vertex)) {
            if (std::find(walk.begin(), walk.end(), u) != walk.end()) continue;
            if (t.nodes.size() >= node_cap)
                throw CapExceededError(
                    "build_saw_tree: node cap " + std::to_string(node_cap) +
                        " exceeded at depth " + std::to_string(depth + 1),
                    depth + 1);
            t.children[head].push_back(static_cast<int>(t.nodes.size()));
            t.nodes.push_back({static_cast<int>(head), depth + 1, u});
            t.children.emplace_back();
        }
    }
    return t;
}

namespace {

template <class C>
bool denom_vanishes(const C& x) {
    return x == C(0);
}
template <>
bool denom_vanishes<ExactComplex>(const ExactComplex& x) {
    return x.is_zero();
}

template <class C>
C eval_tree_ratio_impl(const SawTree& t, const C& gamma, const C& leaf_value) {
    std::vector<C> value(t.size(), C(0));
    // Nodes are in BFS order; reverse iteration is bottom-up.
    for (size_t i = t.size(); i-- > 0;) {
        if (t.children[i].empty()) {
            value[i] = leaf_value;
            continue;
        }
        C sum(0);
        for (int c : t.children[i]) sum += value[c];
        C denom = C(1) + gamma * sum;
        if (denom_vanishes(denom))
            throw VanishingDenominatorError("eval_tree_ratio: 1 + gamma * sum vanished",
                                            static_cast<int>(i));
        value[i] = C(1) / denom;
    }
    return value[t.root];
}

}  // namespace

ExactComplex eval_tree_ratio(const SawTree& t, const ExactComplex& gamma,
                             const ExactComplex& leaf_value) {
    return eval_tree_ratio_impl(t, gamma, leaf_value);
}

std::complex<double> eval_tree_ratio(const SawTree& t, std::complex<double> gamma,
                                     std::complex<double> leaf_value) {
    return eval_tree_ratio_impl(t, gamma, leaf_value);
}

ExactComplex walk_tree_residual(const Graph& g, int v, const ExactComplex& gamma, size_t node_cap) {
    // Paths have at most n-1 edges, so this depth cap never truncates.
    SawTree t = build_saw_tree(g, v, g.vertex_count(), node_cap);
    ExactComplex lhs = p_unmatched(g, v, gamma);             // throws on Z_G = 0
    ExactComplex rhs = p_unmatched(t.to_graph(), t.root, gamma);  // throws on Z_T = 0
    return lhs - rhs;
}

}  // namespace matchpoly
