#include "matchpoly/graph.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <set>
#include <sstream>

namespace matchpoly {

Graph::Graph(int vertex_count, std::vector<std::pair<int, int>> edges,
             std::optional<std::map<int, std::string>> labels)
    : n_(vertex_count), labels_(std::move(labels)) {
    if (vertex_count < 0) throw DomainError("negative vertex count");
    std::set<std::pair<int, int>> seen;
    for (auto [u, v] : edges) {
        if (u == v) throw DomainError("self-loop at vertex " + std::to_string(u));
        if (u > v) std::swap(u, v);
        if (u < 0 || v >= n_)
            throw DomainError("edge endpoint out of range: (" + std::to_string(u) + "," +
                              std::to_string(v) + ")");
        if (!seen.insert({u, v}).second)
            throw DomainError("parallel edge (" + std::to_string(u) + "," + std::to_string(v) + ")");
    }
    edges_.assign(seen.begin(), seen.end());
    adj_.assign(n_, {});
    for (auto [u, v] : edges_) {
        adj_[u].push_back(v);
        adj_[v].push_back(u);
    }
    for (auto& a : adj_) std::sort(a.begin(), a.end());
}

Graph Graph::parse(std::string_view text) {
    std::istringstream in{std::string(text)};
    std::string raw;
    int line_no = 0;
    long n = -1, m = -1;
    std::vector<std::pair<int, int>> edges;
    std::set<std::pair<int, int>> seen;

    auto next_fields = [&](std::string& out) -> bool {
        while (std::getline(in, raw)) {
            ++line_no;
            auto hash = raw.find('#');
            if (hash != std::string::npos) raw.erase(hash);
            bool blank = raw.find_first_not_of(" \t\r\n") == std::string::npos;
            if (!blank) {
                out = raw;
                return true;
            }
        }
        return false;
    };

    std::string fields;
    if (!next_fields(fields)) throw ParseError("missing header line \"n m\"", line_no);
    {
        std::istringstream hs(fields);
        std::string extra;
        if (!(hs >> n >> m) || (hs >> extra))
            throw ParseError("header must be \"n m\"", line_no);
        if (n < 0 || m < 0) throw ParseError("negative counts in header", line_no);
    }
    for (long i = 0; i < m; ++i) {
        if (!next_fields(fields))
            throw ParseError("expected " + std::to_string(m) + " edges, got " + std::to_string(i),
                             line_no);
        std::istringstream es(fields);
        long u, v;
        std::string extra;
        if (!(es >> u >> v) || (es >> extra)) throw ParseError("malformed edge line", line_no);
        if (u == v) throw ParseError("self-loop at vertex " + std::to_string(u), line_no);
        if (u > v) std::swap(u, v);
        if (u < 0 || v >= n) throw ParseError("endpoint out of range", line_no);
        if (!seen.insert({(int)u, (int)v}).second) throw ParseError("duplicate edge", line_no);
        edges.emplace_back((int)u, (int)v);
    }
    if (next_fields(fields)) throw ParseError("trailing content after edge list", line_no);
    return Graph(static_cast<int>(n), std::move(edges));
}

std::string Graph::serialize() const {
    std::ostringstream out;
    out << n_ << " " << edges_.size() << "\n";
    for (auto [u, v] : edges_) out << u << " " << v << "\n";
    return out.str();
}

void Graph::check_vertex(int v) const {
    if (v < 0 || v >= n_)
        throw DomainError("vertex " + std::to_string(v) + " out of range [0," +
                          std::to_string(n_) + ")");
}

const std::vector<int>& Graph::neighbors(int v) const {
    check_vertex(v);
    return adj_[v];
}

int Graph::degree(int v) const {
    check_vertex(v);
    return static_cast<int>(adj_[v].size());
}

int Graph::max_degree() const {
    int d = 0;
    for (const auto& a : adj_) d = std::max(d, static_cast<int>(a.size()));
    return d;
}

bool Graph::has_edge(int u, int v) const {
    check_vertex(u);
    check_vertex(v);
    const auto& a = adj_[u];
    return std::binary_search(a.begin(), a.end(), v);
}

Graph Graph::without_vertices(std::span<const int> vs, std::vector<int>* old_to_new) const {
    std::vector<char> gone(n_, 0);
    for (int v : vs) {
        check_vertex(v);
        gone[v] = 1;
    }
    std::vector<int> map(n_, -1);
    int next = 0;
    for (int v = 0; v < n_; ++v)
        if (!gone[v]) map[v] = next++;
    std::vector<std::pair<int, int>> edges;
    for (auto [u, v] : edges_)
        if (!gone[u] && !gone[v]) edges.emplace_back(map[u], map[v]);
    if (old_to_new) *old_to_new = map;
    return Graph(next, std::move(edges));
}

Graph Graph::without_vertex(int v, std::vector<int>* old_to_new) const {
    int vs[1] = {v};
    return without_vertices(vs, old_to_new);
}

Graph Graph::without_edge(int u, int v) const {
    if (u > v) std::swap(u, v);
    if (!has_edge(u, v))
        throw DomainError("no edge (" + std::to_string(u) + "," + std::to_string(v) + ")");
    std::vector<std::pair<int, int>> edges;
    for (auto e : edges_)
        if (e != std::make_pair(u, v)) edges.push_back(e);
    return Graph(n_, std::move(edges));
}

std::optional<std::vector<int>> Graph::bipartition() const {
    std::vector<int> color(n_, -1);
    std::deque<int> queue;
    for (int s = 0; s < n_; ++s) {
        if (color[s] != -1) continue;
        color[s] = 0;
        queue.push_back(s);
        while (!queue.empty()) {
            int v = queue.front();
            queue.pop_front();
            for (int u : adj_[v]) {
                if (color[u] == -1) {
                    color[u] = 1 - color[v];
                    queue.push_back(u);
                } else if (color[u] == color[v]) {
                    return std::nullopt;
                }
            }
        }
    }
    return color;
}

bool Graph::is_acyclic() const {
    // A forest has exactly n - (#components) edges.
    return static_cast<long>(edges_.size()) + static_cast<long>(components().size()) == n_;
}

std::vector<std::vector<int>> Graph::components() const {
    std::vector<int> comp(n_, -1);
    std::vector<std::vector<int>> out;
    for (int s = 0; s < n_; ++s) {
        if (comp[s] != -1) continue;
        int id = static_cast<int>(out.size());
        out.emplace_back();
        std::deque<int> queue{s};
        comp[s] = id;
        while (!queue.empty()) {
            int v = queue.front();
            queue.pop_front();
            out[id].push_back(v);
            for (int u : adj_[v])
                if (comp[u] == -1) {
                    comp[u] = id;
                    queue.push_back(u);
                }
        }
        std::sort(out[id].begin(), out[id].end());
    }
    return out;
}

std::vector<int> Graph::bfs_distances(int v) const {
    check_vertex(v);
    std::vector<int> dist(n_, -1);
    dist[v] = 0;
    std::deque<int> queue{v};
    while (!queue.empty()) {
        int x = queue.front();
        queue.pop_front();
        for (int u : adj_[x])
            if (dist[u] == -1) {
                dist[u] = dist[x] + 1;
                queue.push_back(u);
            }
    }
    return dist;
}

namespace {

void count_paths_rec(const Graph& g, int v, int remaining, std::vector<char>& visited,
                     mpz_class& total) {
    if (remaining == 0) {
        total += 1;
        return;
    }
    for (int u : g.neighbors(v)) {
        if (visited[u]) continue;
        visited[u] = 1;
        count_paths_rec(g, u, remaining - 1, visited, total);
        visited[u] = 0;
    }
}

}  // namespace

mpz_class count_paths(const Graph& g, int v, int k) {
    if (v < 0 || v >= g.vertex_count())
        throw DomainError("count_paths: vertex out of range");
    if (k < 0) throw DomainError("count_paths: negative length");
    std::vector<char> visited(g.vertex_count(), 0);
    visited[v] = 1;
    mpz_class total = 0;
    count_paths_rec(g, v, k, visited, total);
    return total;
}

ProfileReport check_profile(const Graph& g, double delta, double a, double c, int l_max) {
    if (!(delta > 1)) throw DomainError("check_profile: delta must exceed 1");
    if (!(a > 0) || !(c > 0)) throw DomainError("check_profile: a and c must be positive");
    int n = g.vertex_count();
    if (n == 0) throw DomainError("check_profile: empty graph");
    int ell_min = static_cast<int>(std::ceil(a * std::log(static_cast<double>(n))));
    if (ell_min < 1) ell_min = 1;
    if (l_max < ell_min)
        throw DomainError("check_profile: l_max below threshold ceil(a log n) = " +
                          std::to_string(ell_min));

    // Cumulative path counts per vertex up to l_max.
    std::vector<std::vector<mpz_class>> sums(n);
    for (int v = 0; v < n; ++v) {
        sums[v].resize(l_max + 1);
        sums[v][0] = 0;
        for (int k = 1; k <= l_max; ++k) sums[v][k] = sums[v][k - 1] + count_paths(g, v, k);
    }

    ProfileReport report;
    report.delta = delta;
    report.a = a;
    report.c = c;
    for (int ell = ell_min; ell <= l_max; ++ell) {
        double bound = c * std::pow(delta, ell);
        ProfileRow row;
        row.ell = ell;
        row.bound = bound;
        row.max_sum = 0;
        row.argmax_vertex = 0;
        for (int v = 0; v < n; ++v) {
            if (sums[v][ell] > row.max_sum) {
                row.max_sum = sums[v][ell];
                row.argmax_vertex = v;
            }
            if (report.pass && sums[v][ell].get_d() > bound) {
                report.pass = false;
                report.first_failure = {v, ell};
            }
        }
        report.checked_lengths.push_back(row);
    }
    return report;
}

}  // namespace matchpoly
