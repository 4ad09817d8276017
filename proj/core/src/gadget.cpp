#include "matchpoly/gadget.hpp"

#include <algorithm>
#include <array>
#include <sstream>

#include "matchpoly/exact.hpp"
#include "matchpoly/polynomial.hpp"

namespace matchpoly {

namespace {

struct GraphAssembly {
    int n = 0;
    std::vector<std::pair<int, int>> edges;
    int add_vertex() { return n++; }
    void add_edge(int u, int v) { edges.emplace_back(u, v); }
    int append(const Graph& g) {
        int off = n;
        n += g.vertex_count();
        for (auto [u, v] : g.edges()) edges.emplace_back(off + u, off + v);
        return off;
    }
    Graph build() { return Graph(n, std::move(edges)); }
};

Rat threshold_for(int degree) { return Rat(-1) / Rat(4 * (degree - 1)); }

void require_hardness_range(const Rat& gamma, int degree, const char* who) {
    if (degree < 3) throw DomainError(std::string(who) + ": degree must be at least 3");
    if (!(gamma < threshold_for(degree)))
        throw DomainError(std::string(who) + ": gamma must lie below -1/(4(degree-1))");
}

// Builds the record from already-known certificate values (exact by
// construction identities); the from-scratch recompute lives in
// verify_gadget.
Gadget assemble_vertex_gadget_impl(Graph graph, int terminal, const Rat& gamma,
                                   const Rat& target, const Rat& accuracy, Rat z, Rat z_nu) {
    Gadget g;
    g.graph = std::move(graph);
    g.kind = GadgetKind::vertex_activity;
    g.activity = gamma;
    g.target = target;
    g.accuracy = accuracy;
    g.terminals = {terminal};
    if (g.graph.degree(terminal) != 1)
        throw Error("vertex gadget terminal must have degree 1");
    if (z == 0) throw Error("vertex gadget has Z = 0");
    g.achieved = {Rat(z_nu / z)};
    g.certificate = {std::move(z), std::move(z_nu)};
    if (rat_abs(g.achieved[0] - target) > accuracy)
        throw Error("vertex gadget missed its accuracy target");
    return g;
}

Gadget certify_vertex_gadget_impl(Graph graph, int terminal, const Rat& gamma,
                                  const Rat& target, const Rat& accuracy) {
    Rat z = z_exact(graph, gamma);
    Rat z_nu = z_exact(graph.without_vertex(terminal), gamma);
    return assemble_vertex_gadget_impl(std::move(graph), terminal, gamma, target, accuracy,
                                       std::move(z), std::move(z_nu));
}

Gadget assemble_edge_gadget_impl(Graph graph, int u, int v, const Rat& gamma,
                                 const Rat& target, const Rat& accuracy,
                                 std::array<Rat, 4> values) {
    Gadget g;
    g.graph = std::move(graph);
    g.kind = GadgetKind::edge_activity;
    g.activity = gamma;
    g.target = target;
    g.accuracy = accuracy;
    g.terminals = {u, v};
    if (g.graph.degree(u) != 1 || g.graph.degree(v) != 1)
        throw Error("edge gadget terminals must have degree 1");
    if (g.graph.has_edge(u, v)) throw Error("edge gadget terminals must not be adjacent");
    auto colors = g.graph.bipartition();
    if (!colors || (*colors)[u] != (*colors)[v])
        throw Error("edge gadget must be bipartite with both terminals in one part");
    if (values[3] == 0) throw Error("edge gadget has Z_{not u, not v} = 0");
    g.achieved = {Rat(values[0] / values[3]), Rat(values[1] / values[3]),
                  Rat(values[2] / values[3])};
    g.certificate = {std::move(values[0]), std::move(values[1]), std::move(values[2]),
                     std::move(values[3])};
    if (rat_abs(g.achieved[0] - target) > accuracy || rat_abs(g.achieved[1]) > accuracy ||
        rat_abs(g.achieved[2]) > accuracy)
        throw Error("edge gadget missed its accuracy target");
    return g;
}

Gadget certify_edge_gadget_impl(Graph graph, int u, int v, const Rat& gamma,
                                const Rat& target, const Rat& accuracy) {
    auto pw = pairwise_conditioned(graph, gamma, u, v);  // (uv, u&!v, !u&v, neither)
    return assemble_edge_gadget_impl(std::move(graph), u, v, gamma, target, accuracy,
                                     std::move(pw));
}

// Complete (branch)-ary tree of the given height, root id 0, BFS ids.
Graph ary_tree(int branch, int height, size_t node_cap = SIZE_MAX) {
    GraphAssembly a;
    int root = a.add_vertex();
    std::vector<int> level{root};
    for (int h = 0; h < height; ++h) {
        std::vector<int> next;
        for (int p : level)
            for (int c = 0; c < branch; ++c) {
                if (static_cast<size_t>(a.n) >= node_cap)
                    throw CapExceededError("ary_tree: node cap exceeded", a.n);
                int w = a.add_vertex();
                a.add_edge(p, w);
                next.push_back(w);
            }
        level = std::move(next);
    }
    return a.build();
}

// Word of f1/f2 applications (first applied first) realizing s from -1 under
// f1(x) = 1/(1-x), f2(x) = -1/x.
void minus_one_word(const Rat& s, std::vector<int>& out) {
    if (s == 0) throw DomainError("minus_one_word: 0 is unreachable");
    if (out.size() > 1000000)
        throw CapExceededError("minus_one_word: decomposition word blew past the working cap "
                               "(target rational too tall)",
                               static_cast<long>(out.size()));
    if (s == -1) return;
    if (s == 1) {
        out.push_back(2);  // f2(-1) = 1
        return;
    }
    if (s > -1 && s < 0) {
        mpz_class p = -s.get_num(), q = s.get_den();
        if (q == 2 * p) {
            minus_one_word(Rat(-1), out);
        } else if (q > 2 * p) {
            minus_one_word(Rat(mpz_class(-p), mpz_class(q - p)), out);
        } else {
            minus_one_word(Rat(mpz_class(-(2 * p - q)), p), out);
            out.insert(out.end(), {2, 1, 1, 2});  // with the trailing {1,1,2} below: f2 f1 f1 f2 f1 f1 f2
        }
        out.insert(out.end(), {1, 1, 2});
        return;
    }
    if (s > 0 && s < 1) {
        minus_one_word(Rat(s - 1), out);
        out.insert(out.end(), {2, 1, 1});
        return;
    }
    minus_one_word(Rat(-1 / s), out);
    out.push_back(2);
}

}  // namespace

Gadget certify_vertex_gadget(Graph graph, int terminal, const Rat& gamma, const Rat& target,
                             const Rat& accuracy) {
    return certify_vertex_gadget_impl(std::move(graph), terminal, gamma, target, accuracy);
}

Gadget certify_edge_gadget(Graph graph, int u, int v, const Rat& gamma, const Rat& target,
                           const Rat& accuracy) {
    return certify_edge_gadget_impl(std::move(graph), u, v, gamma, target, accuracy);
}

Gadget assemble_vertex_gadget(Graph graph, int terminal, const Rat& gamma, const Rat& target,
                              const Rat& accuracy, Rat z, Rat z_not_terminal) {
    return assemble_vertex_gadget_impl(std::move(graph), terminal, gamma, target, accuracy,
                                       std::move(z), std::move(z_not_terminal));
}

Gadget assemble_edge_gadget(Graph graph, int u, int v, const Rat& gamma, const Rat& target,
                            const Rat& accuracy, std::array<Rat, 4> values) {
    return assemble_edge_gadget_impl(std::move(graph), u, v, gamma, target, accuracy,
                                     std::move(values));
}

bool Gadget::is_perfect() const {
    if (accuracy != 0) {
        // A stored positive accuracy may still hide exact values.
        if (kind == GadgetKind::vertex_activity) return achieved[0] == target;
        return achieved[0] == target && achieved[1] == 0 && achieved[2] == 0;
    }
    return true;
}

std::vector<TreeRatioEntry> tree_ratio_sequence(const Rat& gamma, int degree, int n_max) {
    require_hardness_range(gamma, degree, "tree_ratio_sequence");
    if (n_max < 0) throw DomainError("tree_ratio_sequence: n_max must be non-negative");
    std::vector<TreeRatioEntry> out;
    out.reserve(n_max + 1);
    Rat r(1);
    bool dead = false;  // once Z_{T_n} = 0 it stays 0 for every later height
    out.push_back({true, r});
    Rat factor = Rat(degree - 1) * gamma;
    for (int n = 1; n <= n_max; ++n) {
        if (dead) {
            out.push_back({false, Rat(0)});
            continue;
        }
        Rat denom = 1 + factor * r;
        if (denom == 0) {
            dead = true;
            out.push_back({false, Rat(0)});
            continue;
        }
        r = 1 / denom;
        out.push_back({true, r});
    }
    return out;
}

bool is_exceptional_activity(const Rat& gamma, int degree) {
    require_hardness_range(gamma, degree, "is_exceptional_activity");
    Rat s = Rat(-1) / (Rat(4 * (degree - 1)) * gamma);
    return s == Rat(1, 4) || s == Rat(1, 2) || s == Rat(3, 4);
}

Gadget build_dense_vertex_gadget(const Rat& gamma, int degree, const Rat& lambda, const Rat& eps,
                                 long iter_cap, size_t node_cap) {
    require_hardness_range(gamma, degree, "build_dense_vertex_gadget");
    if (eps < 0) throw DomainError("build_dense_vertex_gadget: eps must be non-negative");
    if (is_exceptional_activity(gamma, degree))
        throw DomainError(
            "build_dense_vertex_gadget: exceptional activity; use the exceptional pipeline");

    const int branch = degree - 1;
    Rat r(1);
    Rat factor = Rat(branch) * gamma;
    Rat best_err(-1);
    long best_n = -1;
    // Node count of the height-n tree plus its pendant, tracked alongside.
    mpz_class level(1), nodes(2);
    for (long n = 0; n <= iter_cap; ++n) {
        Rat denom_v = 1 + gamma * r;
        if (denom_v != 0) {
            Rat v = 1 / denom_v;
            Rat err = rat_abs(v - lambda);
            if (err <= eps) {
                if (nodes > static_cast<long>(node_cap))
                    throw CapExceededError(
                        "build_dense_vertex_gadget: height " + std::to_string(n) +
                            " matches but its tree exceeds the node cap (desk-scale limit)",
                        n);
                GraphAssembly a;
                a.append(ary_tree(branch, static_cast<int>(n)));
                int pend = a.add_vertex();
                a.add_edge(0, pend);
                return certify_vertex_gadget_impl(a.build(), pend, gamma, lambda, eps);
            }
            if (best_n < 0 || err < best_err) {
                best_err = err;
                best_n = n;
            }
        }
        Rat denom_r = 1 + factor * r;
        if (denom_r == 0)
            throw Error("build_dense_vertex_gadget: tree partition function vanished off the "
                        "exceptional set");
        r = 1 / denom_r;
        level *= branch;
        nodes += level;
        if ((n & 0xff) == 0 && mpz_sizeinbase(r.get_den().get_mpz_t(), 2) > 200000)
            throw CapExceededError("build_dense_vertex_gadget: orbit numbers grew past the "
                                   "working-size cap before a hit (best n=" +
                                       std::to_string(best_n) + ")",
                                   n);
    }
    throw CapExceededError("build_dense_vertex_gadget: no height within iter_cap lands in the "
                           "window; best |value-lambda| at n=" +
                               std::to_string(best_n),
                           iter_cap);
}

Gadget build_minus_one_vertex_tree(const Rat& lambda) {
    const Rat gamma(-1);
    if (lambda == 0) {
        Graph p3(3, {{0, 1}, {1, 2}});
        return certify_vertex_gadget_impl(std::move(p3), 0, gamma, lambda, Rat(0));
    }
    if (lambda == 1) {
        Graph p4(4, {{0, 1}, {1, 2}, {2, 3}});
        return certify_vertex_gadget_impl(std::move(p4), 0, gamma, lambda, Rat(0));
    }
    Rat s = (lambda - 1) / lambda;
    std::vector<int> word;
    minus_one_word(s, word);

    GraphAssembly a;
    int v0 = a.add_vertex(), v1 = a.add_vertex(), v2 = a.add_vertex();
    a.add_edge(v0, v1);
    a.add_edge(v1, v2);
    int term = v1;  // middle of the 3-path carries ratio -1
    for (int op : word) {
        int w = a.add_vertex();
        a.add_edge(term, w);
        if (op == 2) {
            int leaf = a.add_vertex();
            a.add_edge(w, leaf);
        }
        term = w;
    }
    int closing = a.add_vertex();
    a.add_edge(term, closing);
    return certify_vertex_gadget_impl(a.build(), closing, gamma, lambda, Rat(0));
}

namespace {

// Trees over gamma = -1/4 built from the pendant step f1(x) = 1/(1 - x/4)
// and the star step f2(x) = 2/(1 - x/2), starting from the ratio-0 base.
Graph quarter_tree(const std::vector<int>& word, int& terminal_out) {
    GraphAssembly a;
    // Height-2 binary tree plus a pendant at the root; the pendant has
    // unmatched-ratio exactly 0 at gamma = -1/4.
    int root = a.add_vertex();
    int c1 = a.add_vertex(), c2 = a.add_vertex();
    a.add_edge(root, c1);
    a.add_edge(root, c2);
    for (int c : {c1, c2}) {
        int l1 = a.add_vertex(), l2 = a.add_vertex();
        a.add_edge(c, l1);
        a.add_edge(c, l2);
    }
    int term = a.add_vertex();
    a.add_edge(root, term);
    for (int op : word) {
        int w = a.add_vertex();
        a.add_edge(term, w);
        if (op == 2) {
            int center = a.add_vertex(), l1 = a.add_vertex(), l2 = a.add_vertex(),
                rho = a.add_vertex();
            a.add_edge(center, l1);
            a.add_edge(center, l2);
            a.add_edge(center, rho);
            a.add_edge(w, rho);
        }
        term = w;
    }
    terminal_out = term;
    return a.build();
}

}  // namespace

Gadget build_quarter_edge_gadget() {
    const Rat gamma(-1, 4);
    int t_term = 0, tp_term = 0;
    Graph t4 = quarter_tree({1, 2, 2, 1, 2, 1}, t_term);   // vertex activity 4
    Graph t1 = quarter_tree({1}, tp_term);                 // vertex activity 1

    GraphAssembly a;
    int off1 = a.append(t4);
    int off2 = a.append(t1);
    int off3 = a.append(t4);
    int u = a.add_vertex(), v = a.add_vertex();
    int y1 = off1 + t_term, y2 = off2 + tp_term, y3 = off3 + t_term;
    a.add_edge(u, y1);
    a.add_edge(y1, y2);
    a.add_edge(y2, y3);
    a.add_edge(y3, v);
    return certify_edge_gadget_impl(a.build(), u, v, gamma, Rat(-1), Rat(0));
}

Gadget build_exceptional_edge_gadget(const Rat& gamma, int degree) {
    if (!is_exceptional_activity(gamma, degree))
        throw DomainError("build_exceptional_edge_gadget: activity is not exceptional");
    const int branch = degree - 1;

    auto seq = tree_ratio_sequence(gamma, degree, 64);
    int n0 = -1;
    for (int n = 0; n < static_cast<int>(seq.size()); ++n)
        if (!seq[n].z_nonzero) {
            n0 = n;
            break;
        }
    if (n0 < 0) throw Error("build_exceptional_edge_gadget: no vanishing tree found");

    Graph zero_tree = ary_tree(branch, n0);
    if (z_exact(zero_tree, gamma) != 0)
        throw Error("build_exceptional_edge_gadget: recurrence and tree evaluation disagree");

    // Strip leaves while the stripped tree still vanishes; stop at a zero
    // tree whose stripped core has Z != 0.
    struct Candidate {
        bool pair;  // true: two leaves under p; false: single leaf with deg-2 parent
        std::vector<int> removed;
        int p;
    };
    for (int guard = 0; guard < 100000; ++guard) {
        std::vector<Candidate> cands;
        int n = zero_tree.vertex_count();
        for (int p = 0; p < n; ++p) {
            std::vector<int> leaf_kids;
            for (int u : zero_tree.neighbors(p))
                if (zero_tree.degree(u) == 1) leaf_kids.push_back(u);
            if (leaf_kids.size() >= 2)
                cands.push_back({true, {leaf_kids[0], leaf_kids[1]}, p});
        }
        for (int l = 0; l < n; ++l) {
            if (zero_tree.degree(l) != 1) continue;
            int p = zero_tree.neighbors(l)[0];
            if (zero_tree.degree(p) == 2) cands.push_back({false, {l}, p});
        }
        if (cands.empty())
            throw Error("build_exceptional_edge_gadget: zero tree too small to strip");

        const Candidate* shrink_to = nullptr;
        for (const auto& cand : cands) {
            std::vector<int> old_to_new;
            Graph core = zero_tree.without_vertices(cand.removed, &old_to_new);
            Rat z_core = z_exact(core, gamma);
            if (z_core == 0) {
                if (!shrink_to) shrink_to = &cand;
                continue;
            }
            int p = old_to_new[cand.p];
            Rat z_core_np = z_exact(core.without_vertex(p), gamma);
            if (!cand.pair) {
                // Z_T = 0 forces gamma * Z_{core,not p} + Z_core = 0.
                if (gamma * z_core_np + z_core != 0)
                    throw Error("build_exceptional_edge_gadget: case-A identity failed");
                GraphAssembly a;
                int o1 = a.append(core), o3 = a.append(core);
                int y2 = a.add_vertex();
                int u = a.add_vertex(), v = a.add_vertex();
                a.add_edge(u, o1 + p);
                a.add_edge(o1 + p, y2);
                a.add_edge(y2, o3 + p);
                a.add_edge(o3 + p, v);
                return certify_edge_gadget_impl(a.build(), u, v, gamma, Rat(-1), Rat(0));
            }
            // Two stripped leaves: 2 gamma Z_{core,not p} + Z_core = 0 and the
            // chain lands on edge activity -1/4; compose through the
            // quarter-activity gadget to reach -1.
            if (2 * gamma * z_core_np + z_core != 0)
                throw Error("build_exceptional_edge_gadget: case-B identity failed");
            GraphAssembly a;
            int o1 = a.append(core), o2 = a.append(core), o3 = a.append(core);
            int y2 = a.add_vertex();
            a.add_edge(o2 + p, y2);
            int u = a.add_vertex(), v = a.add_vertex();
            a.add_edge(u, o1 + p);
            a.add_edge(o1 + p, y2);
            a.add_edge(y2, o3 + p);
            a.add_edge(o3 + p, v);
            Gadget quarter_impl =
                certify_edge_gadget_impl(a.build(), u, v, gamma, Rat(-1, 4), Rat(0));
            Gadget host = build_quarter_edge_gadget();
            Graph composed = substitute_edges(host.graph, quarter_impl);
            Rat c = rat_pow(quarter_impl.certificate[3], host.graph.edge_count());
            std::array<Rat, 4> values{Rat(c * host.certificate[0]), Rat(c * host.certificate[1]),
                                      Rat(c * host.certificate[2]), Rat(c * host.certificate[3])};
            return assemble_edge_gadget_impl(std::move(composed), host.terminals[0],
                                             host.terminals[1], gamma, Rat(-1), Rat(0),
                                             std::move(values));
        }
        zero_tree = zero_tree.without_vertices(shrink_to->removed);
        if (z_exact(zero_tree, gamma) != 0)
            throw Error("build_exceptional_edge_gadget: stripping lost the zero");
    }
    throw Error("build_exceptional_edge_gadget: stripping loop did not terminate");
}

Graph substitute_edges(const Graph& host, const Gadget& edge_gadget) {
    if (edge_gadget.kind != GadgetKind::edge_activity)
        throw DomainError("substitute_edges: gadget must implement an edge activity");
    if (!edge_gadget.is_perfect())
        throw DomainError("substitute_edges: only perfect gadgets preserve exactness");
    const Graph& gg = edge_gadget.graph;
    const int gu = edge_gadget.terminals[0], gv = edge_gadget.terminals[1];

    GraphAssembly a;
    a.n = host.vertex_count();
    for (auto [hu, hv] : host.edges()) {
        // Fresh interior ids for this copy; terminals collapse onto hu/hv.
        std::vector<int> map(gg.vertex_count(), -1);
        map[gu] = hu;
        map[gv] = hv;
        for (int w = 0; w < gg.vertex_count(); ++w)
            if (map[w] < 0) map[w] = a.add_vertex();
        for (auto [x, y] : gg.edges()) a.add_edge(map[x], map[y]);
    }
    return a.build();
}

VertexGadgetPipeline::VertexGadgetPipeline(const Rat& gamma, int degree)
    : gamma_(gamma), degree_(degree) {
    require_hardness_range(gamma, degree, "VertexGadgetPipeline");
    if (is_exceptional_activity(gamma, degree))
        throw DomainError("VertexGadgetPipeline: exceptional activities take the perfect route");

    CoverSystem base = make_cover_system(gamma);
    Rat half_r = base.r / 2;
    Rat delta_prime = std::min(base.delta, half_r);

    auto aux = [&](const Rat& target) -> Gadget {
        if (gamma == -1) return build_minus_one_vertex_tree(target);
        return build_dense_vertex_gadget(gamma, degree, target, delta_prime);
    };

    std::vector<Rat> realized;
    for (const Rat& star : base.lambdas_star) {
        net_.push_back(aux(star));
        realized.push_back(net_.back().achieved[0]);
    }
    sys_ = with_realized_lambdas(base, std::move(realized));

    Rat lambda0_star = -1 / gamma - 1 - sys_.x0;
    g0_ = aux(lambda0_star);
    lambda0_ = g0_.achieved[0];
    h0_ = aux(sys_.x0);
    y0_ = h0_.achieved[0];
    if (!sys_.contains(y0_))
        throw Error("VertexGadgetPipeline: realized base point left the working interval");
}

Gadget VertexGadgetPipeline::build(const Rat& lambda, const Rat& eps) const {
    if (eps <= 0) throw DomainError("VertexGadgetPipeline::build: eps must be positive");
    Rat two_over_r = 2 / sys_.r;
    if (lambda == 1) {
        Rat eps2 = std::min(two_over_r, eps);
        Gadget near = build_near_one(1 + eps2 / 2, eps2 / 2);
        // Same record, re-targeted at 1 with the wider budget.
        return assemble_vertex_gadget_impl(std::move(near.graph), near.terminals[0], gamma_,
                                           lambda, eps, std::move(near.certificate[0]),
                                           std::move(near.certificate[1]));
    }
    if (rat_abs(lambda - 1) >= two_over_r) return build_away_from_one(lambda, eps);
    return build_near_one(lambda, eps);
}

Gadget VertexGadgetPipeline::build_away_from_one(const Rat& lambda, const Rat& eps) const {
    Rat y = -(1 / gamma_ + lambda0_ + 1 + 1 / (lambda - 1));
    if (!sys_.contains(y))
        throw Error("VertexGadgetPipeline: target point escaped the working interval");

    // lambda-hat as a function of the achieved chain value x:
    //   (1 + gamma(lambda0 + x)) / (1 + gamma(1 + lambda0 + x)).
    Polynomial x = Polynomial::variable(1, 0);
    Polynomial P = Polynomial::constant(1, 1 + gamma_ * lambda0_) + x.scaled(gamma_);
    Polynomial Q = Polynomial::constant(1, 1 + gamma_ * (1 + lambda0_)) + x.scaled(gamma_);
    Rat point[1] = {y};
    Rat eps_prime = ratio_perturbation_radius(P, Q, point, eps);

    CoverWord cw = iterate_cover_maps(sys_, y0_, y, eps_prime);

    GraphAssembly a;
    int off0 = a.append(h0_.graph);
    int cur_term = off0 + h0_.terminals[0];
    // Certificate values ride along: appending a gadget copy G at a fresh
    // vertex w adjacent to the old terminal gives
    //   Z'_{not w} = Z * Z_G,   Z' = Z*Z_G + gamma (Z_{not t} Z_G + Z Z_{G,not t}).
    Rat zc = h0_.certificate[0], znu = h0_.certificate[1];
    Rat cur = y0_;
    for (int j : cw.word) {
        int offn = a.append(net_[j].graph);
        int w = a.add_vertex();
        a.add_edge(cur_term, w);
        a.add_edge(w, offn + net_[j].terminals[0]);
        const Rat& zg = net_[j].certificate[0];
        const Rat& zg_nu = net_[j].certificate[1];
        Rat znu_next = zc * zg;
        Rat z_next = znu_next + gamma_ * (znu * zg + zc * zg_nu);
        znu = std::move(znu_next);
        zc = std::move(z_next);
        cur = cover_map(sys_, j, cur);
        cur_term = w;
    }
    if (cur != cw.y_hat) throw Error("VertexGadgetPipeline: chain ratio drifted from the orbit");
    if (zc == 0 || znu / zc != cur)
        throw Error("VertexGadgetPipeline: chain certificate disagrees with the orbit value");

    int offg = a.append(g0_.graph);
    int z = a.add_vertex();
    a.add_edge(cur_term, z);
    a.add_edge(z, offg + g0_.terminals[0]);
    int v = a.add_vertex();
    a.add_edge(z, v);
    // z can stay free or match the chain terminal or match g0's terminal;
    // v then hangs off z.
    const Rat& z0 = g0_.certificate[0];
    const Rat& z0_nu = g0_.certificate[1];
    Rat z_not_v = zc * z0 + gamma_ * (znu * z0 + zc * z0_nu);
    Rat z_all = z_not_v + gamma_ * zc * z0;
    return assemble_vertex_gadget_impl(a.build(), v, gamma_, lambda, eps, std::move(z_all),
                                       std::move(z_not_v));
}

Gadget VertexGadgetPipeline::build_near_one(const Rat& lambda, const Rat& eps) const {
    if (lambda == 1) throw DomainError("build_near_one: lambda = 1 is handled by the caller");
    Rat two_over_r = 2 / sys_.r;
    // Split the target across two far-from-one activities.
    Rat S = -1 / gamma_ - lambda / (lambda - 1);
    Rat y1 = rat_abs(S) + 2 + two_over_r;
    Rat y2 = S - y1;
    if (rat_abs(y1 - 1) < two_over_r || rat_abs(y2 - 1) < two_over_r)
        throw Error("build_near_one: split points landed too close to 1");

    Polynomial x1 = Polynomial::variable(2, 0), x2 = Polynomial::variable(2, 1);
    Polynomial P =
        Polynomial::constant(2, Rat(1)) + x1.scaled(gamma_) + x2.scaled(gamma_);
    Polynomial Q = Polynomial::constant(2, 1 + gamma_) + x1.scaled(gamma_) + x2.scaled(gamma_);
    Rat point[2] = {y1, y2};
    Rat eps_prime = ratio_perturbation_radius(P, Q, point, eps);

    Gadget j1 = build_away_from_one(y1, eps_prime);
    Gadget j2 = build_away_from_one(y2, eps_prime);

    GraphAssembly a;
    int o1 = a.append(j1.graph), o2 = a.append(j2.graph);
    int z = a.add_vertex();
    a.add_edge(o1 + j1.terminals[0], z);
    a.add_edge(o2 + j2.terminals[0], z);
    int u = a.add_vertex();
    a.add_edge(z, u);
    const Rat &z1 = j1.certificate[0], &znu1 = j1.certificate[1];
    const Rat &z2 = j2.certificate[0], &znu2 = j2.certificate[1];
    Rat z_not_u = z1 * z2 + gamma_ * (znu1 * z2 + z1 * znu2);
    Rat z_all = z_not_u + gamma_ * z1 * z2;
    return assemble_vertex_gadget_impl(a.build(), u, gamma_, lambda, eps, std::move(z_all),
                                       std::move(z_not_u));
}

Gadget build_vertex_gadget(const Rat& gamma, int degree, const Rat& lambda, const Rat& eps) {
    require_hardness_range(gamma, degree, "build_vertex_gadget");
    if (eps <= 0) throw DomainError("build_vertex_gadget: eps must be positive");
    if (is_exceptional_activity(gamma, degree)) {
        // Perfect route: a -1 edge gadget substituted into the perfect
        // gamma = -1 tree for lambda. Substitution scales every conditioned
        // value by C = Z_{not u,not v}^{|E_host|}.
        Gadget edge = build_exceptional_edge_gadget(gamma, degree);
        Gadget host = build_minus_one_vertex_tree(lambda);
        Graph composed = substitute_edges(host.graph, edge);
        Rat c = rat_pow(edge.certificate[3], host.graph.edge_count());
        return assemble_vertex_gadget_impl(std::move(composed), host.terminals[0], gamma, lambda,
                                           eps, Rat(c * host.certificate[0]),
                                           Rat(c * host.certificate[1]));
    }
    return VertexGadgetPipeline(gamma, degree).build(lambda, eps);
}

Gadget build_edge_gadget(const Rat& gamma, int degree, const Rat& gamma_prime, const Rat& eps) {
    require_hardness_range(gamma, degree, "build_edge_gadget");
    if (gamma_prime > 0) throw DomainError("build_edge_gadget: gamma' must be <= 0");
    if (eps <= 0) throw DomainError("build_edge_gadget: eps must be positive");

    // A rational gamma'' < 0 with |gamma' + gamma''^2| <= eps/2 keeps the
    // remaining construction inside the rationals.
    Rat hi = -gamma_prime + eps / 2;
    Rat lo = -gamma_prime - eps / 2;
    if (lo <= 0) lo = hi / 1000;
    Rat gamma_dd = -simplest_rational_with_square_in(lo, hi);

    Rat lambda1 = -gamma_dd / gamma;
    Rat lambda2 = 1 / gamma_dd;

    Polynomial x1 = Polynomial::variable(3, 0), x2 = Polynomial::variable(3, 1),
               x3 = Polynomial::variable(3, 2);
    Polynomial one = Polynomial::constant(3, Rat(1));
    Polynomial Q = one + (x1 * x2).scaled(gamma) + (x2 * x3).scaled(gamma);
    Polynomial P1 = x1.scaled(gamma) + (x1 * x2 * x3).scaled(gamma * gamma);
    Polynomial P2 = (x1 * x3).scaled(gamma * gamma);
    Polynomial P3 = x3.scaled(gamma) + (x1 * x2 * x3).scaled(gamma * gamma);

    Rat point[3] = {lambda1, lambda2, lambda1};
    Rat half_eps = eps / 2;
    Rat r1 = ratio_perturbation_radius(P1, Q, point, half_eps);
    Rat r2 = ratio_perturbation_radius(P2, Q, point, half_eps);
    Rat r3 = ratio_perturbation_radius(P3, Q, point, half_eps);
    Rat eps_prime = std::min(std::min(r1, r2), r3);

    Gadget h1, h2, h3;
    if (is_exceptional_activity(gamma, degree)) {
        h1 = build_vertex_gadget(gamma, degree, lambda1, eps_prime);
        h2 = build_vertex_gadget(gamma, degree, lambda2, eps_prime);
        h3 = build_vertex_gadget(gamma, degree, lambda1, eps_prime);
    } else {
        VertexGadgetPipeline pipe(gamma, degree);
        h1 = pipe.build(lambda1, eps_prime);
        h2 = pipe.build(lambda2, eps_prime);
        h3 = pipe.build(lambda1, eps_prime);
    }

    GraphAssembly a;
    int o1 = a.append(h1.graph), o2 = a.append(h2.graph), o3 = a.append(h3.graph);
    int u = a.add_vertex(), v = a.add_vertex();
    a.add_edge(u, o1 + h1.terminals[0]);
    a.add_edge(o1 + h1.terminals[0], o2 + h2.terminals[0]);
    a.add_edge(o2 + h2.terminals[0], o3 + h3.terminals[0]);
    a.add_edge(o3 + h3.terminals[0], v);
    // Conditioned values of the 5-link chain in terms of the component
    // certificates (q_i unmatched-terminal, z_i full).
    const Rat &z1 = h1.certificate[0], &q1 = h1.certificate[1];
    const Rat &z2 = h2.certificate[0], &q2 = h2.certificate[1];
    const Rat &z3 = h3.certificate[0], &q3 = h3.certificate[1];
    std::array<Rat, 4> values{
        Rat(gamma * gamma * q1 * z2 * q3),
        Rat(gamma * q1 * (z2 * z3 + gamma * q2 * q3)),
        Rat(gamma * q3 * (z1 * z2 + gamma * q1 * q2)),
        Rat(z1 * z2 * z3 + gamma * (q1 * q2 * z3 + z1 * q2 * q3)),
    };
    return assemble_edge_gadget_impl(a.build(), u, v, gamma, gamma_prime, eps,
                                     std::move(values));
}

std::string serialize_gadget(const Gadget& g) {
    std::ostringstream out;
    out << "gadget v1\n";
    out << "kind " << (g.kind == GadgetKind::vertex_activity ? "vertex" : "edge") << "\n";
    out << "activity " << rat_to_string(g.activity) << "\n";
    out << "target " << rat_to_string(g.target) << "\n";
    out << "accuracy " << rat_to_string(g.accuracy) << "\n";
    out << "terminals";
    for (int t : g.terminals) out << " " << t;
    out << "\nachieved";
    for (const Rat& r : g.achieved) out << " " << rat_to_string(r);
    out << "\ncertificate";
    for (const Rat& r : g.certificate) out << " " << rat_to_string(r);
    out << "\ngraph\n" << g.graph.serialize() << "end\n";
    return out.str();
}

Gadget parse_gadget(std::string_view text) {
    std::istringstream in{std::string(text)};
    std::string line;
    auto next = [&](const char* what) {
        if (!std::getline(in, line)) throw ParseError(std::string("gadget record: missing ") + what);
        return line;
    };
    if (next("header") != "gadget v1") throw ParseError("gadget record: bad header");

    Gadget g;
    auto expect_key = [&](const std::string& l, const char* key) {
        if (l.rfind(key, 0) != 0) throw ParseError(std::string("gadget record: expected ") + key);
        return l.substr(std::string(key).size());
    };
    std::string kind = expect_key(next("kind"), "kind ");
    if (kind == "vertex")
        g.kind = GadgetKind::vertex_activity;
    else if (kind == "edge")
        g.kind = GadgetKind::edge_activity;
    else
        throw ParseError("gadget record: unknown kind '" + kind + "'");
    g.activity = parse_rational(expect_key(next("activity"), "activity "));
    g.target = parse_rational(expect_key(next("target"), "target "));
    g.accuracy = parse_rational(expect_key(next("accuracy"), "accuracy "));
    {
        std::istringstream ts(expect_key(next("terminals"), "terminals"));
        int t;
        while (ts >> t) g.terminals.push_back(t);
    }
    {
        std::istringstream as(expect_key(next("achieved"), "achieved"));
        std::string tok;
        while (as >> tok) g.achieved.push_back(parse_rational(tok));
    }
    {
        std::istringstream cs(expect_key(next("certificate"), "certificate"));
        std::string tok;
        while (cs >> tok) g.certificate.push_back(parse_rational(tok));
    }
    if (next("graph") != "graph") throw ParseError("gadget record: expected graph section");
    std::string gtext;
    for (;;) {
        if (!std::getline(in, line)) throw ParseError("gadget record: unterminated graph");
        if (line == "end") break;
        gtext += line;
        gtext += '\n';
    }
    g.graph = Graph::parse(gtext);
    return g;
}

void verify_gadget(const Gadget& g) {
    if (g.kind == GadgetKind::vertex_activity) {
        if (g.terminals.size() != 1 || g.achieved.size() != 1 || g.certificate.size() != 2)
            throw Error("verify_gadget: malformed vertex gadget record");
        int u = g.terminals[0];
        if (g.graph.degree(u) != 1) throw Error("verify_gadget: terminal degree must be 1");
        Rat z = z_exact(g.graph, g.activity);
        Rat z_nu = z_exact(g.graph.without_vertex(u), g.activity);
        if (z != g.certificate[0] || z_nu != g.certificate[1])
            throw Error("verify_gadget: certificate mismatch on recompute");
        if (z == 0) throw Error("verify_gadget: Z = 0");
        if (g.achieved[0] != z_nu / z) throw Error("verify_gadget: achieved ratio mismatch");
        if (rat_abs(g.achieved[0] - g.target) > g.accuracy)
            throw Error("verify_gadget: accuracy bound violated");
        return;
    }
    if (g.terminals.size() != 2 || g.achieved.size() != 3 || g.certificate.size() != 4)
        throw Error("verify_gadget: malformed edge gadget record");
    int u = g.terminals[0], v = g.terminals[1];
    if (g.graph.degree(u) != 1 || g.graph.degree(v) != 1)
        throw Error("verify_gadget: terminal degrees must be 1");
    if (g.graph.has_edge(u, v)) throw Error("verify_gadget: terminals must not be adjacent");
    auto colors = g.graph.bipartition();
    if (!colors || (*colors)[u] != (*colors)[v])
        throw Error("verify_gadget: bipartite same-part requirement violated");
    auto pw = pairwise_conditioned(g.graph, g.activity, u, v);
    for (int i = 0; i < 4; ++i)
        if (pw[i] != g.certificate[i]) throw Error("verify_gadget: certificate mismatch");
    if (pw[3] == 0) throw Error("verify_gadget: Z_{not u, not v} = 0");
    if (g.achieved[0] != pw[0] / pw[3] || g.achieved[1] != pw[1] / pw[3] ||
        g.achieved[2] != pw[2] / pw[3])
        throw Error("verify_gadget: achieved ratios mismatch");
    if (rat_abs(g.achieved[0] - g.target) > g.accuracy || rat_abs(g.achieved[1]) > g.accuracy ||
        rat_abs(g.achieved[2]) > g.accuracy)
        throw Error("verify_gadget: accuracy bound violated");
}

}  // namespace matchpoly
