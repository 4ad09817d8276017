#include "matchpoly/reduction.hpp"

#include <algorithm>
#include <array>

#include "matchpoly/exact.hpp"

namespace matchpoly {

namespace {

const Rat kGamma0(-1, 10);

// Splices a gadget copy over every host edge (terminals onto endpoints);
// imperfect gadgets allowed here, unlike substitute_edges.
Graph splice(const Graph& host, const std::vector<const Gadget*>& per_edge) {
    int n = host.vertex_count();
    std::vector<std::pair<int, int>> edges;
    int next = n;
    for (size_t k = 0; k < host.edges().size(); ++k) {
        auto [hu, hv] = host.edges()[k];
        const Gadget& gg = *per_edge[k];
        std::vector<int> map(gg.graph.vertex_count(), -1);
        map[gg.terminals[0]] = hu;
        map[gg.terminals[1]] = hv;
        for (int w = 0; w < gg.graph.vertex_count(); ++w)
            if (map[w] < 0) map[w] = next++;
        for (auto [x, y] : gg.graph.edges()) edges.emplace_back(map[x], map[y]);
    }
    return Graph(next, std::move(edges));
}

mpz_class pow_mpz(long base, long exp) {
    mpz_class out;
    mpz_ui_pow_ui(out.get_mpz_t(), base, exp);
    return out;
}

}  // namespace

ReductionInstance build_reduction_instance(const Graph& g, std::pair<int, int> e_star,
                                           const Rat& R, const Rat& eps_prime, const Rat& gamma,
                                           int degree) {
    if (g.max_degree() > 3)
        throw DomainError("build_reduction_instance: host must have max degree 3");
    auto [us, vs] = e_star;
    if (us > vs) std::swap(us, vs);
    if (!g.has_edge(us, vs)) throw DomainError("build_reduction_instance: e* is not an edge");
    if (eps_prime <= 0) throw DomainError("build_reduction_instance: eps' must be positive");

    ReductionInstance inst;
    int del[2] = {us, vs};
    inst.alpha = z_exact(g.without_vertices(del), kGamma0);
    inst.beta = z_exact(g.without_edge(us, vs), kGamma0);
    if (inst.alpha <= 0 || inst.beta <= 0)
        throw Error("build_reduction_instance: positivity failed at gamma0 = -1/10");
    inst.r_goal = -inst.beta / inst.alpha;
    inst.eps_prime = eps_prime;

    const long n = g.vertex_count();
    Rat scale = rat_abs(R) > rat_abs(kGamma0) ? rat_abs(R) : rat_abs(kGamma0);
    Rat eps_g = eps_prime / (Rat(pow_mpz(5, 4 * n)) * scale);
    // The phase analysis also wants the accuracy below half of |gamma0|.
    Rat cap(1, 20);
    inst.gadget_eps = std::min(eps_g, cap);

    inst.h0 = build_edge_gadget(gamma, degree, kGamma0, inst.gadget_eps);
    inst.h1 = build_edge_gadget(gamma, degree, R, inst.gadget_eps);

    std::vector<const Gadget*> per_edge;
    for (auto e : g.edges())
        per_edge.push_back(e == std::make_pair(us, vs) ? &inst.h1 : &inst.h0);
    inst.g_r = splice(g, per_edge);
    std::vector<int> host_ids(g.vertex_count());
    for (int i = 0; i < g.vertex_count(); ++i) host_ids[i] = i;
    inst.t_r = inst.g_r.without_vertices(host_ids);
    return inst;
}

SearchResult binary_search_ratio(const Graph& g, std::pair<int, int> e_star, OracleKind oracle,
                                 int iters, SearchMode mode, const Rat& gamma, int degree) {
    auto [us, vs] = e_star;
    if (us > vs) std::swap(us, vs);
    if (!g.has_edge(us, vs)) throw DomainError("binary_search_ratio: e* is not an edge");
    if (g.max_degree() > 3) throw DomainError("binary_search_ratio: host must have max degree 3");
    if (iters < 1) throw DomainError("binary_search_ratio: need at least one round");
    if (mode == SearchMode::composed_graph && (g.vertex_count() > 4 || iters > 40))
        throw DomainError(
            "binary_search_ratio: composed mode is gated to tiny hosts and few rounds (gadget "
            "substitution inflates sizes multiplicatively)");

    const long n = g.vertex_count();
    int del[2] = {us, vs};
    Rat alpha = z_exact(g.without_vertices(del), kGamma0);
    Rat beta = z_exact(g.without_edge(us, vs), kGamma0);
    if (alpha <= 0 || beta <= 0) throw Error("binary_search_ratio: positivity failed");
    Rat r_goal = -beta / alpha;

    // Interval state over a common denominator D: [a/D, b/D].
    mpz_class bound = pow_mpz(20, 2 * n);
    mpz_class a = -bound, b = 0, D = 1;
    if (!(make_rat(a, D) <= r_goal && r_goal <= 0))
        throw Error("binary_search_ratio: r_goal escaped its a-priori bounds");

    // f(c/D) = alpha c/D + beta has the sign of A c + B D (common positive
    // denominators drop out).
    mpz_class A = alpha.get_num() * beta.get_den();
    mpz_class B = beta.get_num() * alpha.get_den();

    // Composite-instance oracle support.
    Rat composed_epsp;
    if (mode == SearchMode::composed_graph) {
        // Well below the smallest |alpha R + beta| separation we will probe.
        composed_epsp = Rat(alpha) / (Rat(pow_mpz(8, iters + 2)) * Rat(bound) * 400);
    }
    auto f_value = [&](const mpz_class& c, const mpz_class& denom) -> Rat {
        Rat R(c, denom);
        R.canonicalize();
        if (mode == SearchMode::direct_f) return alpha * R + beta;
        ReductionInstance inst =
            build_reduction_instance(g, {us, vs}, R, composed_epsp, gamma, degree);
        Rat zg = z_exact(inst.g_r, gamma);
        Rat zt = z_exact(inst.t_r, gamma);
        if (zt == 0) throw Error("binary_search_ratio: composed T_R lost its partition function");
        return zg / zt;
    };

    SearchResult out;
    out.trace.emplace_back(make_rat(a, D), make_rat(b, D));
    const Rat noise_up = Rat(101, 100) * Rat(101, 100);
    const Rat noise_dn = Rat(100, 100) / (Rat(101, 100) * Rat(101, 100));

    for (int round = 0; round < iters; ++round) {
        mpz_class step = b - a;  // width * D; divisible into 8 after scaling
        a *= 8;
        b *= 8;
        D *= 8;
        // Probe points R_j = (a + j*step)/D for j = 0..8.
        std::array<Rat, 9> fhat;
        std::array<int, 9> sign{};
        for (int j = 0; j <= 8; ++j) {
            mpz_class c = a + j * step;
            Rat f = f_value(c, D);
            int s = f > 0 ? 1 : (f < 0 ? -1 : 1);  // a zero may answer either way
            sign[j] = s;
            Rat af = rat_abs(f);
            if (oracle == OracleKind::norm_factor_1_01)
                af *= ((round + j) % 2 == 0 ? noise_up : noise_dn);
            fhat[j] = af;
        }

        bool cut_low;
        if (oracle == OracleKind::sign_only) {
            if (sign[0] < 0 && sign[1] < 0 && sign[2] < 0 && sign[3] < 0)
                cut_low = true;
            else if (sign[5] > 0 && sign[6] > 0 && sign[7] > 0 && sign[8] > 0)
                cut_low = false;
            else
                throw Error("binary_search_ratio: sign oracle produced no admissible cut");
        } else {
            if (fhat[0] > fhat[1] && fhat[1] > fhat[2] && fhat[2] > fhat[3])
                cut_low = true;
            else if (fhat[5] < fhat[6] && fhat[6] < fhat[7] && fhat[7] < fhat[8])
                cut_low = false;
            else
                throw Error("binary_search_ratio: norm oracle produced no admissible cut");
        }
        if (cut_low)
            a += step;  // [R1, R8]
        else
            b = a + 7 * step;  // [R0, R7]
        out.trace.emplace_back(make_rat(a, D), make_rat(b, D));
        ++out.rounds;
        if (make_rat(b - a, D) < make_rat(1, bound * bound)) break;
    }

    out.lo = make_rat(a, D);
    out.hi = make_rat(b, D);
    // Distinct rationals with numerator/denominator up to `bound` sit at
    // least 1/bound^2 apart, so a narrower interval pins r_goal.
    if (make_rat(b - a, D) < make_rat(1, bound * bound)) {
        out.reconstructed = simplest_rational_in(out.lo, out.hi);
        if (*out.reconstructed != r_goal)
            throw Error("binary_search_ratio: reconstruction missed r_goal");
        out.ratio = 1 - kGamma0 / *out.reconstructed;
    }
    return out;
}

std::vector<Rat> path_partition_values(int k_max) {
    if (k_max < 1) throw DomainError("path_partition_values: k_max must be positive");
    const Rat gamma_star(-1);
    std::vector<Rat> out;
    out.reserve(k_max);
    Rat prev2(1), prev1(1);  // Z_{P_0} = 1 (empty), Z_{P_1} = 1
    out.push_back(prev1);
    for (int n = 2; n <= k_max; ++n) {
        Rat cur = prev1 + gamma_star * prev2;
        out.push_back(cur);
        prev2 = prev1;
        prev1 = cur;
    }
    static const int pattern[6] = {1, 0, -1, -1, 0, 1};
    for (int n = 1; n <= k_max; ++n)
        if (out[n - 1] != pattern[(n - 1) % 6])
            throw Error("path_partition_values: period-6 pattern broke at n=" + std::to_string(n));
    return out;
}

Gadget stretch_edge_gadget(const Rat& gamma, int k, int d_max) {
    if (k < 0) throw DomainError("stretch_edge_gadget: k must be non-negative");
    int d_found = -1;
    for (int d = 3; d <= d_max; ++d) {
        if (!(gamma < Rat(-1) / Rat(4 * (d - 1)))) continue;
        if (is_exceptional_activity(gamma, d)) {
            d_found = d;
            break;
        }
    }
    if (d_found < 0)
        throw DomainError("stretch_edge_gadget: gamma is not an exceptional activity for any "
                          "degree up to " +
                          std::to_string(d_max));
    Gadget base = build_exceptional_edge_gadget(gamma, d_found);

    const int n = 6 * k + 5;
    std::vector<std::pair<int, int>> path_edges;
    for (int i = 0; i + 1 < n; ++i) path_edges.emplace_back(i, i + 1);
    Graph path(n, std::move(path_edges));
    Graph stretched = substitute_edges(path, base);
    // Host values at -1 for a (6k+5)-vertex path: (Z_uv, Z_u!v, Z_!uv, Z_!u!v)
    // = (1, 0, 0, -1); substitution scales them by Z_nn^{edges}.
    Rat c = rat_pow(base.certificate[3], n - 1);
    std::array<Rat, 4> values{c, Rat(0), Rat(0), Rat(-c)};
    return assemble_edge_gadget(std::move(stretched), 0, n - 1, gamma, Rat(-1), Rat(0),
                                std::move(values));
}

}  // namespace matchpoly
