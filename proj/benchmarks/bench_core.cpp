#include <benchmark/benchmark.h>

#include <complex>
#include <random>

#include "matchpoly/cover.hpp"
#include "matchpoly/decay.hpp"
#include "matchpoly/exact.hpp"
#include "matchpoly/gadget.hpp"
#include "matchpoly/saw_tree.hpp"

using namespace matchpoly;

namespace {

Graph random_graph(int n, int maxdeg, int edges, unsigned seed) {
    std::mt19937 rng(seed);
    std::uniform_int_distribution<int> pick(0, n - 1);
    std::set<std::pair<int, int>> out;
    std::vector<int> deg(n, 0);
    int attempts = 50 * edges;
    while (static_cast<int>(out.size()) < edges && attempts-- > 0) {
        int u = pick(rng), v = pick(rng);
        if (u == v) continue;
        if (u > v) std::swap(u, v);
        if (deg[u] >= maxdeg || deg[v] >= maxdeg || !out.insert({u, v}).second) continue;
        ++deg[u];
        ++deg[v];
    }
    return Graph(n, {out.begin(), out.end()});
}

void BM_ZExactRecursion(benchmark::State& state) {
    Graph g = random_graph(static_cast<int>(state.range(0)), 4, 2 * state.range(0), 5);
    ExactComplex gamma(Rat(1, 3), Rat(1, 5));
    for (auto _ : state) {
        auto z = z_exact(g, gamma);
        benchmark::DoNotOptimize(z);
    }
}
BENCHMARK(BM_ZExactRecursion)->Arg(8)->Arg(12)->Arg(16);

void BM_ZEnumerate(benchmark::State& state) {
    Graph g = random_graph(static_cast<int>(state.range(0)), 4, 2 * state.range(0), 5);
    ExactComplex gamma(Rat(1, 3), Rat(1, 5));
    for (auto _ : state) {
        auto z = z_enumerate(g, gamma);
        benchmark::DoNotOptimize(z);
    }
}
BENCHMARK(BM_ZEnumerate)->Arg(8)->Arg(12)->Arg(16);

void BM_TreeZ(benchmark::State& state) {
    // Long path: exercises the linear forest evaluation.
    int n = static_cast<int>(state.range(0));
    std::vector<std::pair<int, int>> edges;
    for (int i = 0; i + 1 < n; ++i) edges.emplace_back(i, i + 1);
    Graph g(n, std::move(edges));
    Rat gamma(-1);
    for (auto _ : state) {
        auto z = z_exact(g, gamma);
        benchmark::DoNotOptimize(z);
    }
}
BENCHMARK(BM_TreeZ)->Arg(1000)->Arg(10000)->Arg(100000);

void BM_SawTreeBuild(benchmark::State& state) {
    Graph g = random_graph(static_cast<int>(state.range(0)), 3, 3 * state.range(0) / 2, 11);
    for (auto _ : state) {
        SawTree t = build_saw_tree(g, 0, g.vertex_count());
        benchmark::DoNotOptimize(t.size());
    }
}
BENCHMARK(BM_SawTreeBuild)->Arg(10)->Arg(14)->Arg(18);

void BM_ApproxZ(benchmark::State& state) {
    Graph g = random_graph(static_cast<int>(state.range(0)), 3, 3 * state.range(0) / 2, 13);
    for (auto _ : state) {
        auto r = approx_z(g, {0.0, 1.0}, 0.05, {2.0, 1.0, 3.0});
        benchmark::DoNotOptimize(r.z_hat);
    }
}
BENCHMARK(BM_ApproxZ)->Arg(10)->Arg(14);

void BM_CoverTargeting(benchmark::State& state) {
    CoverSystem sys = make_cover_system(Rat(-1));
    Rat y = sys.x0 + sys.r / 3;
    Rat eps = sys.r;
    for (long i = 0; i < state.range(0); ++i) eps /= 2;
    for (auto _ : state) {
        CoverWord w = iterate_cover_maps(sys, sys.x0, y, eps);
        benchmark::DoNotOptimize(w.word.size());
    }
}
BENCHMARK(BM_CoverTargeting)->Arg(16)->Arg(64)->Arg(256);

void BM_MinusOneTree(benchmark::State& state) {
    Rat lambda(2166137, 1 + 2 * state.range(0));
    for (auto _ : state) {
        Gadget g = build_minus_one_vertex_tree(lambda);
        benchmark::DoNotOptimize(g.graph.vertex_count());
    }
}
BENCHMARK(BM_MinusOneTree)->Arg(100)->Arg(10000);

}  // namespace

BENCHMARK_MAIN();
