#include "matchpoly/exact.hpp"

#include <algorithm>
#include <cstdint>
#include <set>
#include <unordered_map>

namespace matchpoly {

namespace {

template <class F>
bool field_is_zero(const F& x) {
    return x == 0;
}
template <>
bool field_is_zero<ExactComplex>(const ExactComplex& x) {
    return x.is_zero();
}

struct VecHash {
    size_t operator()(const std::vector<int32_t>& v) const {
        size_t h = 1469598103934665603ull;
        for (int32_t x : v) {
            for (int i = 0; i < 4; ++i) {
                h ^= static_cast<unsigned char>(x >> (8 * i));
                h *= 1099511628211ull;
            }
        }
        return h;
    }
};

template <class F>
class Engine {
public:
    Engine(const Graph& g, F gamma)
        : g_(g), gamma_(std::move(gamma)), active_(g.vertex_count(), 0) {}

    // Z of the subgraph induced by `verts` (sorted vertex ids).
    F eval_set(const std::vector<int32_t>& verts) {
        for (int32_t v : verts) active_[v] = 1;
        F result(1);
        std::vector<char> seen(g_.vertex_count(), 0);
        std::vector<int32_t> comp;
        for (int32_t s : verts) {
            if (seen[s]) continue;
            comp.clear();
            collect_component(s, seen, comp);
            std::sort(comp.begin(), comp.end());
            result *= eval_component(comp);
        }
        for (int32_t v : verts) active_[v] = 0;
        return result;
    }

    F eval_all() {
        std::vector<int32_t> all(g_.vertex_count());
        for (int i = 0; i < g_.vertex_count(); ++i) all[i] = i;
        return eval_set(all);
    }

    F eval_all_minus(std::span<const int> deleted) {
        std::vector<char> gone(g_.vertex_count(), 0);
        for (int v : deleted) gone[v] = 1;
        std::vector<int32_t> verts;
        for (int v = 0; v < g_.vertex_count(); ++v)
            if (!gone[v]) verts.push_back(v);
        return eval_set(verts);
    }

private:
    void collect_component(int32_t s, std::vector<char>& seen, std::vector<int32_t>& comp) {
        std::vector<int32_t> stack{s};
        seen[s] = 1;
        while (!stack.empty()) {
            int32_t v = stack.back();
            stack.pop_back();
            comp.push_back(v);
            for (int u : g_.neighbors(v))
                if (active_[u] && !seen[u]) {
                    seen[u] = 1;
                    stack.push_back(u);
                }
        }
    }

    // `comp` is sorted and connected inside the current active mask.
    // Callers guarantee the active mask covers comp.
    F eval_component(const std::vector<int32_t>& comp) {
        if (comp.size() == 1) return F(1);
        long edge_ends = 0;
        for (int32_t v : comp)
            for (int u : g_.neighbors(v))
                if (active_[u]) ++edge_ends;
        if (edge_ends == 2 * (static_cast<long>(comp.size()) - 1)) return tree_z(comp);

        auto it = memo_.find(comp);
        if (it != memo_.end()) return it->second;

        int32_t v = comp[0];
        // The recursion re-enters eval_set with the component's own mask, so
        // temporarily drop vertices rather than touching the global mask.
        std::vector<int32_t> rest(comp.begin() + 1, comp.end());
        active_[v] = 0;
        F total = eval_set_local(rest);
        for (int u : g_.neighbors(v)) {
            if (!active_[u]) continue;
            std::vector<int32_t> rest2;
            rest2.reserve(rest.size() - 1);
            for (int32_t w : rest)
                if (w != u) rest2.push_back(w);
            active_[u] = 0;
            total += gamma_ * eval_set_local(rest2);
            active_[u] = 1;
        }
        active_[v] = 1;
        memo_.emplace(comp, total);
        return total;
    }

    // Like eval_set but assumes the active mask already covers verts.
    F eval_set_local(const std::vector<int32_t>& verts) {
        F result(1);
        std::vector<char> seen(g_.vertex_count(), 0);
        std::vector<int32_t> comp;
        for (int32_t s : verts) {
            if (seen[s]) continue;
            comp.clear();
            collect_component(s, seen, comp);
            std::sort(comp.begin(), comp.end());
            result *= eval_component(comp);
        }
        return result;
    }

    // Bottom-up evaluation of the deletion recurrence on an acyclic
    // component: per subtree keep (Z, Z with the subtree root unmatched).
    F tree_z(const std::vector<int32_t>& comp) {
        int32_t root = comp[0];
        // Iterative post-order.
        std::vector<std::pair<int32_t, int32_t>> order;  // (vertex, parent)
        std::vector<std::pair<int32_t, int32_t>> stack{{root, -1}};
        while (!stack.empty()) {
            auto [v, parent] = stack.back();
            stack.pop_back();
            order.emplace_back(v, parent);
            for (int u : g_.neighbors(v))
                if (active_[u] && u != parent) stack.emplace_back(u, v);
        }
        std::unordered_map<int32_t, std::pair<F, F>> val;  // v -> (z, z_root_unmatched)
        val.reserve(order.size() * 2);
        for (auto it = order.rbegin(); it != order.rend(); ++it) {
            auto [v, parent] = *it;
            std::vector<const std::pair<F, F>*> kids;
            for (int u : g_.neighbors(v))
                if (active_[u] && u != parent) kids.push_back(&val.at(u));
            F z_not(1);
            for (auto* k : kids) z_not *= k->first;
            F z = z_not;
            if (!kids.empty()) {
                size_t d = kids.size();
                std::vector<F> prefix(d + 1, F(1)), suffix(d + 1, F(1));
                for (size_t i = 0; i < d; ++i) prefix[i + 1] = prefix[i] * kids[i]->first;
                for (size_t i = d; i-- > 0;) suffix[i] = suffix[i + 1] * kids[i]->first;
                F cross(0);
                for (size_t i = 0; i < d; ++i) cross += kids[i]->second * (prefix[i] * suffix[i + 1]);
                z += gamma_ * cross;
            }
            val.emplace(v, std::make_pair(std::move(z), std::move(z_not)));
        }
        return val.at(root).first;
    }

    const Graph& g_;
    F gamma_;
    std::vector<char> active_;
    std::unordered_map<std::vector<int32_t>, F, VecHash> memo_;
};

template <class F>
F z_exact_impl(const Graph& g, const F& gamma) {
    Engine<F> engine(g, gamma);
    return engine.eval_all();
}

template <class F>
F z_enumerate_impl(const Graph& g, const F& gamma) {
    if (g.vertex_count() > 20)
        throw CapExceededError("z_enumerate capped at 20 vertices", g.vertex_count());
    const auto& edges = g.edges();
    std::vector<F> powers(g.vertex_count() / 2 + 1, F(1));
    for (size_t k = 1; k < powers.size(); ++k) powers[k] = powers[k - 1] * gamma;

    F total(0);
    std::vector<char> used(g.vertex_count(), 0);
    // Every matching is visited exactly once as an increasing edge-index
    // sequence; the weight is added on arrival.
    auto rec = [&](auto&& self, size_t min_index, int size) -> void {
        total += powers[size];
        for (size_t j = min_index; j < edges.size(); ++j) {
            auto [u, v] = edges[j];
            if (used[u] || used[v]) continue;
            used[u] = used[v] = 1;
            self(self, j + 1, size + 1);
            used[u] = used[v] = 0;
        }
    };
    rec(rec, 0, 0);
    return total;
}

template <class F>
F z_conditioned_impl(const Graph& g, const F& gamma,
                     std::span<const std::pair<int, VertexCond>> conds) {
    std::set<int> seen;
    std::vector<int> unmatched, matched;
    for (auto [v, c] : conds) {
        if (v < 0 || v >= g.vertex_count()) throw DomainError("conditioned vertex out of range");
        if (!seen.insert(v).second)
            throw DomainError("duplicate vertex " + std::to_string(v) + " in conditions");
        (c == VertexCond::unmatched ? unmatched : matched).push_back(v);
    }
    Engine<F> engine(g, gamma);
    // Unmatched vertices are deleted outright; matched ones enter by
    // inclusion-exclusion: Z_{S matched} = sum_{T subset S} (-1)^|T| Z_{G-T}.
    F total(0);
    size_t subsets = size_t{1} << matched.size();
    std::vector<int> deleted;
    for (size_t bits = 0; bits < subsets; ++bits) {
        deleted = unmatched;
        int parity = 0;
        for (size_t i = 0; i < matched.size(); ++i)
            if (bits & (size_t{1} << i)) {
                deleted.push_back(matched[i]);
                ++parity;
            }
        F term = engine.eval_all_minus(deleted);
        if (parity % 2)
            total = total - term;
        else
            total += term;
    }
    return total;
}

template <class F>
F p_unmatched_impl(const Graph& g, int v, const F& gamma) {
    if (v < 0 || v >= g.vertex_count()) throw DomainError("p_unmatched: vertex out of range");
    Engine<F> engine(g, gamma);
    F z = engine.eval_all();
    if (field_is_zero(z))
        throw ZeroPartitionError("p_unmatched: Z_G(gamma) = 0");
    int del[1] = {v};
    return engine.eval_all_minus(del) / z;
}

}  // namespace

ExactComplex z_exact(const Graph& g, const ExactComplex& gamma) { return z_exact_impl(g, gamma); }
Rat z_exact(const Graph& g, const Rat& gamma) { return z_exact_impl(g, gamma); }

ExactComplex z_enumerate(const Graph& g, const ExactComplex& gamma) {
    return z_enumerate_impl(g, gamma);
}
Rat z_enumerate(const Graph& g, const Rat& gamma) { return z_enumerate_impl(g, gamma); }

ExactComplex z_conditioned(const Graph& g, const ExactComplex& gamma,
                           std::span<const std::pair<int, VertexCond>> conds) {
    return z_conditioned_impl(g, gamma, conds);
}
Rat z_conditioned(const Graph& g, const Rat& gamma,
                  std::span<const std::pair<int, VertexCond>> conds) {
    return z_conditioned_impl(g, gamma, conds);
}

ExactComplex p_unmatched(const Graph& g, int v, const ExactComplex& gamma) {
    return p_unmatched_impl(g, v, gamma);
}
Rat p_unmatched(const Graph& g, int v, const Rat& gamma) { return p_unmatched_impl(g, v, gamma); }

std::array<Rat, 4> pairwise_conditioned(const Graph& g, const Rat& gamma, int u, int v) {
    if (u == v) throw DomainError("pairwise_conditioned: vertices must differ");
    Engine<Rat> engine(g, gamma);
    Rat z = engine.eval_all();
    int du[1] = {u}, dv[1] = {v}, duv[2] = {u, v};
    Rat z_nu = engine.eval_all_minus(du);       // u unmatched
    Rat z_nv = engine.eval_all_minus(dv);       // v unmatched
    Rat z_nunv = engine.eval_all_minus(duv);    // both unmatched
    Rat z_nu_v = z_nu - z_nunv;
    Rat z_u_nv = z_nv - z_nunv;
    Rat z_uv = z - z_nu - z_u_nv;
    return {z_uv, z_u_nv, z_nu_v, z_nunv};
}

MatchSummary summarize(const Graph& g, const ExactComplex& gamma, int u, std::optional<int> v) {
    Engine<ExactComplex> engine(g, gamma);
    MatchSummary out;
    out.z = engine.eval_all();
    int du[1] = {u};
    out.z_not_u = engine.eval_all_minus(du);
    out.z_u = out.z - out.z_not_u;
    if (v) {
        if (*v == u) throw DomainError("summarize: u and v must differ");
        int dv[1] = {*v};
        int duv[2] = {u, *v};
        ExactComplex z_nv = engine.eval_all_minus(dv);
        ExactComplex z_nunv = engine.eval_all_minus(duv);
        ExactComplex z_nu_v = out.z_not_u - z_nunv;
        ExactComplex z_u_nv = z_nv - z_nunv;
        ExactComplex z_uv = out.z - out.z_not_u - z_u_nv;
        out.pairwise = {{z_uv, z_u_nv, z_nu_v, z_nunv}};
    }
    return out;
}

ZeroFreeReport zero_free_check(const Graph& g, const ExactComplex& gamma) {
    ZeroFreeReport report;
    int delta_eff = std::max(2, g.max_degree());
    Rat threshold = Rat(-1) / Rat(4 * (delta_eff - 1));
    report.in_forbidden_ray = gamma.is_real() && gamma.re < threshold;
    report.z = z_exact(g, gamma);
    report.consistent = report.in_forbidden_ray || !report.z.is_zero();
    return report;
}

}  // namespace matchpoly
