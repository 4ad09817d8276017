#pragma once

#include <gmpxx.h>

#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "matchpoly/errors.hpp"

namespace matchpoly {

// Undirected simple graph over dense 0-based vertex ids. Immutable after
// construction; derived graphs (vertex/edge deletion) are new values.
class Graph {
public:
    Graph() = default;
    Graph(int vertex_count, std::vector<std::pair<int, int>> edges,
          std::optional<std::map<int, std::string>> labels = std::nullopt);

    // File format: first line "n m", then m lines "u v" with 0 <= u < v < n.
    // '#' starts a comment. Errors carry 1-based line numbers.
    static Graph parse(std::string_view text);
    std::string serialize() const;

    int vertex_count() const { return n_; }
    int edge_count() const { return static_cast<int>(edges_.size()); }
    const std::vector<std::pair<int, int>>& edges() const { return edges_; }
    const std::vector<int>& neighbors(int v) const;
    int degree(int v) const;
    int max_degree() const;
    bool has_edge(int u, int v) const;
    const std::optional<std::map<int, std::string>>& labels() const { return labels_; }

    // New graph with the given vertices removed and ids re-densified.
    // old_to_new, when given, receives the id map (-1 for deleted).
    Graph without_vertices(std::span<const int> vs, std::vector<int>* old_to_new = nullptr) const;
    Graph without_vertex(int v, std::vector<int>* old_to_new = nullptr) const;
    Graph without_edge(int u, int v) const;

    // Proper 2-coloring, or nullopt when an odd cycle exists.
    std::optional<std::vector<int>> bipartition() const;
    bool is_acyclic() const;
    std::vector<std::vector<int>> components() const;
    // Hop distances from v; -1 for unreachable vertices.
    std::vector<int> bfs_distances(int v) const;

    friend bool operator==(const Graph& a, const Graph& b) {
        return a.n_ == b.n_ && a.edges_ == b.edges_;
    }

private:
    void check_vertex(int v) const;

    int n_ = 0;
    std::vector<std::pair<int, int>> edges_;     // normalized u < v, sorted
    std::vector<std::vector<int>> adj_;          // sorted neighbor lists
    std::optional<std::map<int, std::string>> labels_;
};

// Number of k-edge self-avoiding paths starting at v, counted as directed
// traversals from v (a path and its reverse from the other endpoint are
// distinct starts; two orderings from the same start are distinct).
mpz_class count_paths(const Graph& g, int v, int k);

struct ProfileRow {
    int ell;
    mpz_class max_sum;   // max over v of sum_{k=1..ell} N_G(v,k)
    double bound;        // c * Delta^ell
    int argmax_vertex;
};

struct ProfileReport {
    double delta = 0, a = 0, c = 0;
    std::vector<ProfileRow> checked_lengths;
    bool pass = true;
    std::optional<std::pair<int, int>> first_failure;  // (vertex, ell)
};

// Checks sum_{k=1..ell} N_G(v,k) <= c * Delta^ell for every vertex and every
// ell in [ceil(a*log n), l_max]. Natural log; the threshold convention only
// rescales a.
ProfileReport check_profile(const Graph& g, double delta, double a, double c, int l_max);

}  // namespace matchpoly
