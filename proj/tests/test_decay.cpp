#include <doctest.h>

#include <cmath>
#include <complex>
#include <random>

#include "matchpoly/decay.hpp"
#include "matchpoly/exact.hpp"
#include "support/corpus.hpp"

using namespace matchpoly;
using namespace matchpoly::testsupport;

using cplx = std::complex<double>;

namespace {

cplx to_cplx(const ExactComplex& z) { return {rat_to_double(z.re), rat_to_double(z.im)}; }

// |log(z_hat / z_exact)| with the principal branch.
double log_ratio_mod(cplx z_hat, const ExactComplex& z) {
    return std::abs(std::log(z_hat / to_cplx(z)));
}

const Family kFam{2.0, 1.0, 3.0};  // covers every max-degree <= 3 graph

}  // namespace

TEST_CASE("parameter derivation at gamma = i") {
    DecayParams P = derive_params({0.0, 1.0}, {3.0, 1.0, 1.0}, 10, 0.1);
    CHECK(P.gamma_hat == doctest::Approx(2.0).epsilon(1e-12));
    CHECK(P.Q.real() == doctest::Approx(std::sqrt(2.0) / 2).epsilon(1e-12));
    // gamma_hat = 1/Re(Q)^2 to high accuracy.
    CHECK(P.gamma_hat == doctest::Approx(1.0 / (P.Q.real() * P.Q.real())).epsilon(1e-12));
    CHECK(P.D == doctest::Approx(3.0));
    CHECK(P.p == doctest::Approx(1.25).epsilon(1e-12));
    CHECK(P.q == doctest::Approx(5.0).epsilon(1e-12));
    // alpha = D^{-1/q} (1 - 2/(1+sqrt(1+4*gamma_hat*D))) = 3^{-1/5} * (2/3).
    CHECK(P.alpha == doctest::Approx(std::pow(3.0, -0.2) * (2.0 / 3.0)).epsilon(1e-12));
    double step = std::pow(3.0, 0.2) * P.alpha;
    CHECK(step < 1.0);
    CHECK(step == doctest::Approx(2.0 / 3.0).epsilon(1e-12));
    // Conjugacy and the truncation-depth conditions.
    CHECK(1.0 / P.p + 1.0 / P.q == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(P.ell >= std::ceil(1.0 * std::log(10.0)));
    double lhs = (P.M / P.L) * std::pow(P.c_hat, 1.0 / P.q) * std::pow(step, P.ell);
    double rhs = P.delta_per_vertex * P.Q.real() /
                 (2.0 * std::pow(std::abs(P.Q) + 10.0 / P.Q.real(), 2));
    CHECK(lhs <= rhs);
    // And ell is minimal subject to the floor.
    if (P.ell > std::ceil(std::log(10.0))) {
        double prev = (P.M / P.L) * std::pow(P.c_hat, 1.0 / P.q) * std::pow(step, P.ell - 1);
        CHECK(prev > rhs);
    }
}

TEST_CASE("parameter derivation for positive reals and rejections") {
    DecayParams P = derive_params({1.0, 0.0}, {3.0, 1.0, 1.0}, 5, 0.5);
    CHECK(P.Q == cplx(1.0, 0.0));
    CHECK(P.gamma_hat == doctest::Approx(1.0));

    CHECK_THROWS_AS(derive_params({-1.0, 0.0}, kFam, 5, 0.1), DomainError);
    CHECK_THROWS_AS(derive_params({0.0, 0.0}, kFam, 5, 0.1), DomainError);
    CHECK_THROWS_AS(derive_params({1.0, 1.0}, kFam, 5, 1.5), DomainError);
    CHECK_THROWS_AS(derive_params({1.0, 1.0}, {0.0, 1.0, 1.0}, 5, 0.1), DomainError);
}

TEST_CASE("single-vertex and single-edge estimates are tight") {
    Graph lone(1, {});
    DecayParams P = derive_params({0.0, 1.0}, kFam, 1, 0.5);
    auto r = approx_p(lone, 0, P);
    CHECK(r.p_tilde == cplx(1.0, 0.0));

    Graph k2 = path_graph(2);
    DecayParams P2 = derive_params({0.0, 1.0}, kFam, 2, 0.001);
    auto r2 = approx_p(k2, 0, P2);
    cplx expect = 1.0 / (1.0 + cplx(0.0, 1.0));
    CHECK(std::abs(r2.p_tilde - expect) / std::abs(expect) <= P2.delta_per_vertex / 2);
    CHECK(r2.diag.domain_ok);
}

TEST_CASE("approx_p lands within the per-vertex budget on a random graph") {
    std::mt19937 rng(41);
    cplx gamma(0.5, 0.5);
    for (int trial = 0; trial < 10; ++trial) {
        Graph g = random_graph_max_degree(12, 3, 14, rng);
        DecayParams P = derive_params(gamma, kFam, g.vertex_count(), 0.01);
        auto r = approx_p(g, 0, P);
        ExactComplex exact = p_unmatched(g, 0, ExactComplex(Rat(1, 2), Rat(1, 2)));
        CHECK(std::abs(r.p_tilde - to_cplx(exact)) / std::abs(to_cplx(exact)) <=
              P.delta_per_vertex / 2);
        CHECK(r.diag.domain_ok);
        CHECK(r.diag.min_headroom > 1.0 - 1e-9);
    }
}

TEST_CASE("telescoping estimate certificates") {
    // Empty graph.
    CHECK(approx_z(Graph(0, {}), {0.0, 1.0}, 0.1, kFam).z_hat == cplx(1.0, 0.0));
    // gamma = 0.
    CHECK(approx_z(path_graph(4), {0.0, 0.0}, 0.1, kFam).z_hat == cplx(1.0, 0.0));

    // K2 at i against the exact value 1+i.
    auto rk2 = approx_z(path_graph(2), {0.0, 1.0}, 0.01, kFam);
    CHECK(log_ratio_mod(rk2.z_hat, z_exact(path_graph(2), ExactComplex(Rat(0), Rat(1)))) <= 0.01);

    // C6 at gamma = 2.
    auto rc6 = approx_z(cycle_graph(6), {2.0, 0.0}, 0.05, kFam);
    CHECK(log_ratio_mod(rc6.z_hat, z_exact(cycle_graph(6), ExactComplex(Rat(2)))) <= 0.05);
    CHECK(rc6.factor_nodes.size() == 6);
}

TEST_CASE("end-to-end certificate sweep") {
    const std::vector<std::pair<cplx, ExactComplex>> gammas = {
        {{0.0, 1.0}, ExactComplex(Rat(0), Rat(1))},
        {{1.0, 1.0}, ExactComplex(Rat(1), Rat(1))},
        {{-0.5, 1.0}, ExactComplex(Rat(-1, 2), Rat(1))},
        {{3.0, 0.0}, ExactComplex(Rat(3))},
        {{0.25, 0.0}, ExactComplex(Rat(1, 4))},
    };
    std::mt19937 rng(43);
    for (int trial = 0; trial < 6; ++trial) {
        int n = 8 + (trial % 3) * 3;
        int maxdeg = trial % 2 ? 2 : 3;
        Graph g = random_graph_max_degree(n, maxdeg, n + 2, rng);
        for (double eps : {0.1, 0.01}) {
            for (const auto& [gd, ge] : gammas) {
                auto r = approx_z(g, gd, eps, kFam);
                ExactComplex z = z_exact(g, ge);
                CHECK(log_ratio_mod(r.z_hat, z) <= eps);
                CHECK(std::abs(std::arg(r.z_hat / to_cplx(z))) <= eps);
            }
        }
    }
}

TEST_CASE("telescoping identity is exact with exact arithmetic") {
    // Product of p_{v_j}(G_{j-1}) over ascending deletions times Z equals 1.
    std::mt19937 rng(47);
    for (const Graph& base : {random_graph_max_degree(8, 3, 9, rng), cycle_graph(7),
                              complete_graph(5)}) {
        ExactComplex gamma(Rat(1, 3), Rat(1, 7));
        ExactComplex product(Rat(1));
        Graph cur = base;
        while (cur.vertex_count() > 0) {
            product *= p_unmatched(cur, 0, gamma);
            cur = cur.without_vertex(0);
        }
        CHECK(product * z_exact(base, gamma) == ExactComplex(Rat(1)));
    }
}

TEST_CASE("deeper truncation does not hurt") {
    cplx gamma(0.0, 1.0);
    Graph g = complete_bipartite(3, 3);
    ExactComplex exact = p_unmatched(g, 0, ExactComplex(Rat(0), Rat(1)));
    DecayParams P = derive_params(gamma, kFam, g.vertex_count(), 0.2);
    double budget = P.delta_per_vertex / 2;
    for (int extra = 0; extra <= 3; ++extra) {
        DecayParams Q = P;
        Q.ell = P.ell + extra;
        auto r = approx_p(g, 0, Q);
        CHECK(std::abs(r.p_tilde - to_cplx(exact)) / std::abs(to_cplx(exact)) <= budget);
    }
}

TEST_CASE("software-float evaluation tracks binary64") {
    cplx gamma(0.3, 0.9);
    std::mt19937 rng(53);
    Graph g = random_graph_max_degree(10, 3, 12, rng);
    DecayParams P = derive_params(gamma, kFam, g.vertex_count(), 0.05);
    auto fast = approx_p(g, 0, P);
    auto slow = approx_p_highprec(g, 0, P, 192);
    CHECK(std::abs(fast.p_tilde - slow.p_tilde) <= 1e-13 * std::abs(slow.p_tilde));
}
