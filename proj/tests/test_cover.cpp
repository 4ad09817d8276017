#include <doctest.h>

#include <random>

#include "matchpoly/cover.hpp"

using namespace matchpoly;

TEST_CASE("cover system at gamma = -1") {
    CoverSystem sys = make_cover_system(Rat(-1));
    // Fixpoints of x -> 1/(1+gamma(lambda+x)) with gamma x1 x2 = -1, t = 2:
    // x1 = 2, x2 = 1/2, lambda = -3/2, and |Phi'(1/2)| = 1/4 attracts.
    CHECK(sys.lambda_center == Rat(-3, 2));
    CHECK(sys.x0 == Rat(1, 2));
    CHECK(sys.phi_prime_mod == Rat(1, 4));
    CHECK(sys.r > 0);
    CHECK(sys.delta == sys.r / 4);
    CHECK(sys.contraction_bound < 1);
    CHECK(sys.lambdas.size() == sys.lambdas_star.size());
    // Construction already verified the invariants; do it again explicitly.
    CHECK(verify_cover_system(sys) == sys.contraction_bound);
}

TEST_CASE("cover systems for the other pinned activities") {
    for (const Rat& gamma : {Rat(-1, 10), Rat(-7, 3)}) {
        CoverSystem sys = make_cover_system(gamma);
        CHECK(verify_cover_system(sys) < 1);
        CHECK(sys.contains(sys.x0));
        CHECK(!sys.contains(Rat(0)));  // interval stays clear of the pole at 0
    }
    CHECK_THROWS_AS(make_cover_system(Rat(1)), DomainError);
    CHECK_THROWS_AS(make_cover_system(Rat(0)), DomainError);
}

TEST_CASE("collision on the default fixpoint parameter moves to the next") {
    // gamma = -1/4 makes t = 2 collide with its partner fixpoint.
    CoverSystem sys = make_cover_system(Rat(-1, 4));
    CHECK(verify_cover_system(sys) < 1);
    CHECK(sys.phi_prime_mod < 1);
}

TEST_CASE("realized lambdas must stay near the net") {
    CoverSystem sys = make_cover_system(Rat(-1));
    auto shifted = sys.lambdas_star;
    shifted[0] += sys.delta / 2;
    CoverSystem sys2 = with_realized_lambdas(sys, shifted);
    CHECK(sys2.contraction_bound < 1);

    shifted[0] += sys.delta * 2;
    CHECK_THROWS_AS(with_realized_lambdas(sys, shifted), DomainError);
}

TEST_CASE("backward-orbit targeting is exact") {
    CoverSystem sys = make_cover_system(Rat(-1));

    // Trivial target.
    CoverWord same = iterate_cover_maps(sys, sys.x0, sys.x0, sys.r);
    CHECK(rat_abs(same.y_hat - sys.x0) <= sys.r);

    // Fine target at r/10^6.
    Rat y = sys.x0 + sys.r / 2;
    Rat eps = sys.r / 1000000;
    CoverWord w = iterate_cover_maps(sys, sys.x0, y, eps);
    CHECK(rat_abs(w.y_hat - y) <= eps);
    CHECK(!w.word.empty());
    // Forward application reproduces y_hat.
    Rat v = sys.x0;
    for (int j : w.word) v = cover_map(sys, j, v);
    CHECK(v == w.y_hat);

    CHECK_THROWS_AS(iterate_cover_maps(sys, sys.x0 + 3 * sys.r, sys.x0, eps), DomainError);
    CHECK_THROWS_AS(iterate_cover_maps(sys, sys.x0, sys.x0, Rat(0)), DomainError);
}

TEST_CASE("random backward-orbit trials across activities") {
    std::mt19937 rng(83);
    for (const Rat& gamma : {Rat(-1), Rat(-1, 10), Rat(-7, 3)}) {
        CoverSystem sys = make_cover_system(gamma);
        std::uniform_int_distribution<long> grid(-1000, 1000);
        for (int trial = 0; trial < 40; ++trial) {
            Rat y0 = sys.x0 + sys.r * make_rat(grid(rng), 1000);
            Rat y = sys.x0 + sys.r * make_rat(grid(rng), 1000);
            Rat eps = sys.r / make_rat(1 + (trial % 5) * 100, 1) / 100;
            CoverWord w = iterate_cover_maps(sys, y0, y, eps);
            CHECK(rat_abs(w.y_hat - y) <= eps);
        }
    }
}

TEST_CASE("word length grows like log(1/eps)") {
    CoverSystem sys = make_cover_system(Rat(-1));
    Rat y = sys.x0 + sys.r / 3;
    size_t prev = 0;
    for (int k = 1; k <= 4; ++k) {
        Rat eps = sys.r;
        for (int i = 0; i < 6 * k; ++i) eps /= 2;
        CoverWord w = iterate_cover_maps(sys, sys.x0, y, eps);
        CHECK(w.word.size() >= prev);
        CHECK(w.word.size() <= 40u * k + 40u);
        prev = w.word.size();
    }
}
