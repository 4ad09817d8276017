#pragma once

#include <array>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "matchpoly/graph.hpp"
#include "matchpoly/rational.hpp"

namespace matchpoly {

enum class VertexCond { matched, unmatched };

// Matching-generating function Z_G(gamma) = sum over matchings of gamma^|M|,
// via the vertex-deletion recursion Z_G = Z_{G-v} + gamma * sum_{u~v} Z_{G-v-u}
// with memoization on canonical residual-vertex-set keys. Acyclic residual
// components run the same recurrence bottom-up in linear time.
ExactComplex z_exact(const Graph& g, const ExactComplex& gamma);
Rat z_exact(const Graph& g, const Rat& gamma);

// Independent cross-check: direct enumeration of all matchings, one per
// ordered edge-index sequence. Capped at 20 vertices.
ExactComplex z_enumerate(const Graph& g, const ExactComplex& gamma);
Rat z_enumerate(const Graph& g, const Rat& gamma);

// Z restricted to matchings meeting every (vertex, matched/unmatched)
// condition. Conditioned vertices must be distinct.
ExactComplex z_conditioned(const Graph& g, const ExactComplex& gamma,
                           std::span<const std::pair<int, VertexCond>> conds);
Rat z_conditioned(const Graph& g, const Rat& gamma,
                  std::span<const std::pair<int, VertexCond>> conds);

// Z_{G,not v} / Z_G. Throws ZeroPartitionError when Z_G(gamma) = 0.
ExactComplex p_unmatched(const Graph& g, int v, const ExactComplex& gamma);
Rat p_unmatched(const Graph& g, int v, const Rat& gamma);

// All four pairwise-conditioned values, in the order
// (Z_{u,v}, Z_{u,not v}, Z_{not u,v}, Z_{not u,not v}).
std::array<Rat, 4> pairwise_conditioned(const Graph& g, const Rat& gamma, int u, int v);

struct MatchSummary {
    ExactComplex z, z_not_u, z_u;
    std::optional<std::array<ExactComplex, 4>> pairwise;  // (uv, u&not v, not u&v, neither)
};

MatchSummary summarize(const Graph& g, const ExactComplex& gamma, int u,
                       std::optional<int> v = std::nullopt);

struct ZeroFreeReport {
    bool in_forbidden_ray = false;  // gamma real and below -1/(4(Delta-1))
    ExactComplex z;
    bool consistent = true;  // false would witness a zero off the forbidden ray
};

// Max degrees below 3 fall outside the zero-freeness statement; they are
// handled with the Delta=2 threshold -1/4, which also covers every zero a
// degree-<=1 graph can have (all at gamma = -1).
ZeroFreeReport zero_free_check(const Graph& g, const ExactComplex& gamma);

}  // namespace matchpoly
