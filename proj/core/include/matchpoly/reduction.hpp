#pragma once

#include <optional>
#include <utility>
#include <vector>

#include "matchpoly/gadget.hpp"
#include "matchpoly/graph.hpp"
#include "matchpoly/rational.hpp"

namespace matchpoly {

// One composite instance of the oracle reduction at base activity -1/10:
// every edge of the host replaced by an activity gadget (the marked edge by
// an R-gadget), plus the terminal-deleted companion graph.
struct ReductionInstance {
    Graph g_r;          // host with gadgets spliced in
    Graph t_r;          // same with all host vertices deleted
    Rat alpha;          // Z_{G \ {u*,v*}}(-1/10)
    Rat beta;           // Z_{G - e*}(-1/10)
    Rat r_goal;         // -beta/alpha
    Rat eps_prime;      // accuracy target for |alpha R + beta - f_R|
    Rat gadget_eps;     // per-gadget accuracy backing eps_prime
    Gadget h0, h1;      // the -1/10 gadget and the R gadget
};

// Builds the composite instance; gadget accuracy follows
// eps' / (5^{4n} max{1/10, |R|}). Host must have max degree <= 3.
ReductionInstance build_reduction_instance(const Graph& g, std::pair<int, int> e_star,
                                           const Rat& R, const Rat& eps_prime, const Rat& gamma,
                                           int degree);

enum class OracleKind { norm_factor_1_01, sign_only, exact_simulated };
enum class SearchMode { direct_f, composed_graph };

struct SearchResult {
    Rat lo, hi;                        // final interval for r_goal
    std::optional<Rat> reconstructed;  // exact r_goal when the interval pinned it
    std::optional<Rat> ratio;          // Z_G(-1/10)/Z_{G-e*}(-1/10) = 1 - gamma0/r_goal
    std::vector<std::pair<Rat, Rat>> trace;
    int rounds = 0;
};

// Nine-point interval refinement for r_goal = -beta/alpha with simulated
// oracles. direct_f evaluates f_R = alpha R + beta exactly (norm oracles see
// it through an adversarial factor within 1.01^2); composed_graph evaluates
// f_R from spliced gadget graphs and is gated to tiny hosts. Reconstruction
// kicks in once the interval width drops below the rational separation bound.
SearchResult binary_search_ratio(const Graph& g, std::pair<int, int> e_star, OracleKind oracle,
                                 int iters, SearchMode mode = SearchMode::direct_f,
                                 const Rat& gamma = Rat(-1), int degree = 3);

// Z_{P_n}(-1) for n = 1..k_max via the two-term path recurrence; the values
// repeat with period 6 as (1, 0, -1, -1, 0, 1).
std::vector<Rat> path_partition_values(int k_max);

// Perfect -1 edge gadget with far-apart terminals: the base exceptional
// gadget chained along a (6k+5)-vertex path.
Gadget stretch_edge_gadget(const Rat& gamma, int k, int d_max = 12);

}  // namespace matchpoly
