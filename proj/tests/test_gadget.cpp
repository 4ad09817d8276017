#include <doctest.h>

#include <random>

#include "matchpoly/exact.hpp"
#include "matchpoly/gadget.hpp"
#include "support/corpus.hpp"

using namespace matchpoly;
using namespace matchpoly::testsupport;

TEST_CASE("tree ratio sequence at gamma = -1") {
    auto seq = tree_ratio_sequence(Rat(-1), 3, 4);
    REQUIRE(seq.size() == 5);
    const Rat expect[5] = {Rat(1), Rat(-1), Rat(1, 3), Rat(3), Rat(-1, 5)};
    for (int n = 0; n <= 4; ++n) {
        CHECK(seq[n].z_nonzero);
        CHECK(seq[n].ratio == expect[n]);
    }
}

TEST_CASE("tree ratio sequence matches literal trees") {
    // Binary trees of height n at gamma = -1: ratio = Z_{T,not root}/Z_T.
    for (int n = 0; n <= 4; ++n) {
        std::vector<std::pair<int, int>> edges;
        int next = 1;
        std::vector<int> level{0};
        for (int h = 0; h < n; ++h) {
            std::vector<int> below;
            for (int p : level)
                for (int c = 0; c < 2; ++c) {
                    edges.emplace_back(p, next);
                    below.push_back(next++);
                }
            level = below;
        }
        Graph t(next, edges);
        Rat z = z_exact(t, Rat(-1));
        Rat znr = z_exact(t.without_vertex(0), Rat(-1));
        auto seq = tree_ratio_sequence(Rat(-1), 3, n);
        REQUIRE(seq[n].z_nonzero);
        CHECK(z != 0);
        CHECK(seq[n].ratio == znr / z);
    }
}

TEST_CASE("vanishing denominators are data") {
    // gamma = -1/2 is exceptional for degree 3 (s = 1/4): first zero at n=1.
    auto seq = tree_ratio_sequence(Rat(-1, 2), 3, 5);
    CHECK(seq[0].z_nonzero);
    CHECK_FALSE(seq[1].z_nonzero);
    CHECK_FALSE(seq[4].z_nonzero);  // zeros persist
    CHECK(z_exact(path_graph(3), Rat(-1, 2)) == 0);  // the literal T_1
}

TEST_CASE("exceptional activity membership") {
    CHECK(is_exceptional_activity(Rat(-1, 2), 3));   // s = 1/4
    CHECK(is_exceptional_activity(Rat(-1, 4), 3));   // s = 1/2
    CHECK(is_exceptional_activity(Rat(-1, 6), 3));   // s = 3/4
    CHECK_FALSE(is_exceptional_activity(Rat(-1), 3));     // s = 1/8
    CHECK_FALSE(is_exceptional_activity(Rat(-7, 10), 3));
    CHECK(is_exceptional_activity(Rat(-1, 6), 4));   // s = 1/2 at degree 4
    CHECK_THROWS_AS(is_exceptional_activity(Rat(-1, 9), 3), DomainError);  // above threshold
    CHECK_THROWS_AS(is_exceptional_activity(Rat(-1), 2), DomainError);

    // Exceptional implies a vanishing tree within the scanned range;
    // non-exceptional shows none out to n = 1000.
    auto bad = tree_ratio_sequence(Rat(-1, 6), 3, 1000);
    bool saw_zero = false;
    for (auto& e : bad) saw_zero |= !e.z_nonzero;
    CHECK(saw_zero);
    auto good = tree_ratio_sequence(Rat(-1), 3, 1000);
    for (auto& e : good) CHECK(e.z_nonzero);
}

TEST_CASE("dense vertex gadget search") {
    // First orbit hit: at gamma = -2 the height-0 tree plus pendant realizes
    // lambda = 1/(1+gamma) = -1 perfectly.
    Gadget g0 = build_dense_vertex_gadget(Rat(-2), 3, Rat(-1), Rat(0));
    CHECK(g0.graph.vertex_count() == 2);
    CHECK(g0.achieved[0] == Rat(-1));
    verify_gadget(g0);

    // Exact orbit hit at height 5: the pendant ratio lands on 7/2.
    Gadget g1 = build_dense_vertex_gadget(Rat(-1), 3, Rat(7, 2), Rat(0));
    CHECK(g1.achieved[0] == Rat(7, 2));
    CHECK(g1.graph.vertex_count() == 64);  // binary tree of height 5 plus pendant
    CHECK(g1.graph.max_degree() <= 3);
    verify_gadget(g1);

    // Window search: height 8 is the first to land within 1/20 of -9/5.
    Gadget g2 = build_dense_vertex_gadget(Rat(-1), 3, Rat(-9, 5), Rat(1, 20));
    CHECK(rat_abs(g2.achieved[0] + Rat(9, 5)) <= Rat(1, 20));
    CHECK(g2.graph.vertex_count() == 512);
    verify_gadget(g2);

    CHECK_THROWS_AS(build_dense_vertex_gadget(Rat(-1, 2), 3, Rat(1), Rat(1, 10)), DomainError);
    // Unreachable window under a tiny iteration cap reports the best height.
    CHECK_THROWS_AS(build_dense_vertex_gadget(Rat(-1), 3, Rat(1000001, 1000), Rat(1, 100000), 10),
                    CapExceededError);
}

TEST_CASE("perfect trees at gamma = -1") {
    Gadget zero = build_minus_one_vertex_tree(Rat(0));
    CHECK(zero.certificate == std::vector<Rat>{Rat(-1), Rat(0)});
    CHECK(zero.graph.vertex_count() == 3);
    verify_gadget(zero);

    Gadget one = build_minus_one_vertex_tree(Rat(1));
    CHECK(one.certificate == std::vector<Rat>{Rat(-1), Rat(-1)});
    CHECK(one.graph.vertex_count() == 4);
    verify_gadget(one);

    for (const Rat& lambda : {Rat(-3, 7), Rat(22, 7), Rat(5), Rat(1, 2), Rat(-2), Rat(17, 5)}) {
        Gadget g = build_minus_one_vertex_tree(lambda);
        CHECK(g.achieved[0] == lambda);
        CHECK(g.accuracy == 0);
        CHECK(g.graph.max_degree() <= 3);
        CHECK(g.graph.is_acyclic());
        verify_gadget(g);
    }
}

TEST_CASE("quarter-activity edge gadget") {
    Gadget q = build_quarter_edge_gadget();
    CHECK(q.activity == Rat(-1, 4));
    CHECK(q.target == Rat(-1));
    CHECK(q.achieved == std::vector<Rat>{Rat(-1), Rat(0), Rat(0)});
    CHECK(q.graph.max_degree() <= 3);
    verify_gadget(q);

    // The intermediate building blocks from the construction.
    Graph g0(8, {{0, 1}, {0, 2}, {1, 3}, {1, 4}, {2, 5}, {2, 6}, {0, 7}});
    Rat z_nu = z_exact(g0.without_vertex(7), Rat(-1, 4));
    CHECK(z_nu == 0);  // ratio x0 = 0
    Graph star = star_graph(3);
    CHECK(z_exact(star, Rat(-1, 4)) == Rat(1, 4));
    CHECK(z_exact(star.without_vertex(1), Rat(-1, 4)) == Rat(1, 2));
}

TEST_CASE("exceptional edge gadgets across both branches") {
    // s = 1/4 walks the single-leaf branch at some point of the strip.
    Gadget a = build_exceptional_edge_gadget(Rat(-1, 2), 3);
    CHECK(a.target == Rat(-1));
    CHECK(a.achieved == std::vector<Rat>{Rat(-1), Rat(0), Rat(0)});
    CHECK(a.graph.max_degree() <= 3);
    verify_gadget(a);

    // s = 1/2 exercises the two-leaf branch and the quarter composition.
    Gadget b = build_exceptional_edge_gadget(Rat(-1, 4), 3);
    CHECK(b.achieved == std::vector<Rat>{Rat(-1), Rat(0), Rat(0)});
    CHECK(b.graph.max_degree() <= 3);
    verify_gadget(b);

    // s = 3/4 and a higher degree.
    Gadget c = build_exceptional_edge_gadget(Rat(-1, 6), 3);
    verify_gadget(c);
    Gadget d = build_exceptional_edge_gadget(Rat(-1, 6), 4);  // s = 1/2 at degree 4
    CHECK(d.graph.max_degree() <= 4);
    verify_gadget(d);

    CHECK_THROWS_AS(build_exceptional_edge_gadget(Rat(-1), 3), DomainError);
}

TEST_CASE("edge substitution identity") {
    Gadget minus_one = build_exceptional_edge_gadget(Rat(-1, 2), 3);
    const Rat gamma(-1, 2), gamma_prime(-1);
    const Rat c = minus_one.certificate[3];  // Z_{not u, not v}

    // Z_{H-hat, cond}(gamma) = C Z_{H,cond}(gamma') with C = Z_nn^{|E_H|}.
    for (const Graph& host : {path_graph(2), path_graph(3), star_graph(3)}) {
        Graph image = substitute_edges(host, minus_one);
        Rat scale = rat_pow(c, host.edge_count());
        CHECK(z_exact(image, gamma) == scale * z_exact(host, gamma_prime));
        // Conditioned identities for a host vertex.
        std::vector<std::pair<int, VertexCond>> cond{{0, VertexCond::unmatched}};
        CHECK(z_conditioned(image, ExactComplex(gamma), cond).re ==
              scale * z_conditioned(host, ExactComplex(gamma_prime), cond).re);
        if (host.vertex_count() >= 3) {
            auto pw_img = pairwise_conditioned(image, gamma, 0, 2);
            auto pw_host = pairwise_conditioned(host, gamma_prime, 0, 2);
            for (int i = 0; i < 4; ++i) CHECK(pw_img[i] == scale * pw_host[i]);
        }
    }

    // Empty-edge host passes through unchanged.
    Graph lonely(3, {});
    CHECK(substitute_edges(lonely, minus_one) == lonely);

    // Imperfect gadgets are refused.
    Gadget sloppy = minus_one;
    sloppy.achieved[1] = Rat(1, 1000000);
    sloppy.accuracy = Rat(1, 1000);
    CHECK_THROWS_AS(substitute_edges(path_graph(2), sloppy), DomainError);
}

TEST_CASE("pipeline vertex gadgets at gamma = -1") {
    VertexGadgetPipeline pipe(Rat(-1), 3);
    CHECK(pipe.system().contraction_bound < 1);
    for (const auto& [lambda, eps] : std::vector<std::pair<Rat, Rat>>{
             {Rat(5), Rat(1, 1024)},
             {Rat(-2), Rat(1, 4096)},
             {Rat(1), Rat(1, 100)},
             {Rat(0), Rat(1, 50)},
         }) {
        Gadget g = pipe.build(lambda, eps);
        CHECK(rat_abs(g.achieved[0] - lambda) <= eps);
        CHECK(g.graph.max_degree() <= 3);
        CHECK(g.graph.bipartition().has_value());
        verify_gadget(g);
    }
}

TEST_CASE("vertex gadget dispatch covers the exceptional route") {
    Gadget g = build_vertex_gadget(Rat(-1, 2), 3, Rat(0), Rat(1, 10));
    CHECK(g.achieved[0] == 0);  // the composed route lands exactly
    CHECK(g.graph.max_degree() <= 3);
    verify_gadget(g);

    CHECK_THROWS_AS(build_vertex_gadget(Rat(-1, 100), 3, Rat(1), Rat(1, 10)), DomainError);
}

TEST_CASE("edge gadgets at gamma = -1") {
    Gadget g = build_edge_gadget(Rat(-1), 3, Rat(-1, 10), Rat(1, 100));
    CHECK(rat_abs(g.achieved[0] + Rat(1, 10)) <= Rat(1, 100));
    CHECK(rat_abs(g.achieved[1]) <= Rat(1, 100));
    CHECK(rat_abs(g.achieved[2]) <= Rat(1, 100));
    CHECK(g.graph.max_degree() <= 3);
    auto colors = g.graph.bipartition();
    REQUIRE(colors.has_value());
    CHECK((*colors)[g.terminals[0]] == (*colors)[g.terminals[1]]);
    verify_gadget(g);

    // gamma' = 0 implements a near-zero activity.
    Gadget z = build_edge_gadget(Rat(-1), 3, Rat(0), Rat(1, 50));
    CHECK(rat_abs(z.achieved[0]) <= Rat(1, 50));
    verify_gadget(z);
}

TEST_CASE("gadget records round-trip") {
    std::vector<Gadget> gs;
    gs.push_back(build_minus_one_vertex_tree(Rat(-3, 7)));
    gs.push_back(build_quarter_edge_gadget());
    for (const Gadget& g : gs) {
        Gadget back = parse_gadget(serialize_gadget(g));
        CHECK(back.kind == g.kind);
        CHECK(back.activity == g.activity);
        CHECK(back.target == g.target);
        CHECK(back.accuracy == g.accuracy);
        CHECK(back.terminals == g.terminals);
        CHECK(back.achieved == g.achieved);
        CHECK(back.certificate == g.certificate);
        CHECK(back.graph == g.graph);
        verify_gadget(back);
    }
    CHECK_THROWS_AS(parse_gadget("not a gadget"), ParseError);
}

TEST_CASE("verification catches doctored certificates") {
    Gadget g = build_minus_one_vertex_tree(Rat(2));
    g.certificate[1] += 1;
    CHECK_THROWS_AS(verify_gadget(g), Error);
}
