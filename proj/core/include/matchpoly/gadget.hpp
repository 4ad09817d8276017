#pragma once

#include <array>
#include <string>
#include <string_view>
#include <vector>

#include "matchpoly/cover.hpp"
#include "matchpoly/graph.hpp"
#include "matchpoly/rational.hpp"

namespace matchpoly {

enum class GadgetKind { vertex_activity, edge_activity };

// A graph with 1-2 degree-one terminals whose conditioned partition-function
// ratios implement a target activity within a certified accuracy. The
// certificate holds the exact conditioned values backing `achieved`.
struct Gadget {
    Graph graph;
    GadgetKind kind = GadgetKind::vertex_activity;
    Rat activity;             // ambient edge activity gamma
    Rat target;               // lambda (vertex kind) or gamma' (edge kind)
    Rat accuracy;             // eps; 0 means perfect
    std::vector<int> terminals;
    // vertex kind: { Z_{not u}/Z }
    // edge kind:   { Z_{u,v}/Z_{nn}, Z_{u,not v}/Z_{nn}, Z_{not u,v}/Z_{nn} }
    std::vector<Rat> achieved;
    // vertex kind: { Z, Z_{not u} }
    // edge kind:   { Z_{u,v}, Z_{u,not v}, Z_{not u,v}, Z_{not u,not v} }
    std::vector<Rat> certificate;

    bool is_perfect() const;
};

// Builds a Gadget record for the given graph/terminal(s): computes the exact
// certificate from scratch, derives the achieved ratios and enforces the
// structural and accuracy requirements.
Gadget certify_vertex_gadget(Graph graph, int terminal, const Rat& gamma, const Rat& target,
                             const Rat& accuracy);
Gadget certify_edge_gadget(Graph graph, int u, int v, const Rat& gamma, const Rat& target,
                           const Rat& accuracy);

// Same records built from caller-supplied certificate values (the builders
// derive them through exact composition identities, so recomputing at every
// level would only repeat work). verify_gadget stays the independent check.
Gadget assemble_vertex_gadget(Graph graph, int terminal, const Rat& gamma, const Rat& target,
                              const Rat& accuracy, Rat z, Rat z_not_terminal);
Gadget assemble_edge_gadget(Graph graph, int u, int v, const Rat& gamma, const Rat& target,
                            const Rat& accuracy, std::array<Rat, 4> values);

std::string serialize_gadget(const Gadget& g);
Gadget parse_gadget(std::string_view text);

// Recomputes the certificate from scratch with the exact engine and checks
// every structural and accuracy requirement. Throws Error on any mismatch.
void verify_gadget(const Gadget& g);

// Root ratios u_n/z_n of the (degree-1)-ary trees of height n, via the
// scalar recurrence r_0 = 1, r_n = 1/(1 + (degree-1) gamma r_{n-1}).
// A vanishing denominator at step n means Z_{T_n} = 0; entries from there on
// are flagged (the partition function stays zero).
struct TreeRatioEntry {
    bool z_nonzero = true;
    Rat ratio;  // meaningful only when z_nonzero
};
std::vector<TreeRatioEntry> tree_ratio_sequence(const Rat& gamma, int degree, int n_max);

// Membership in the exceptional activity set for the given degree: gamma =
// -1/(4(degree-1) s) with s = cos^2 of a rational multiple of pi. Rational
// cos^2 values of such angles inside (0,1) are exactly {1/4, 1/2, 3/4}, so
// the decision is an exact comparison. Requires gamma < -1/(4(degree-1)).
bool is_exceptional_activity(const Rat& gamma, int degree);

// Density search along the tree-ratio orbit; emits the (degree-1)-ary tree
// of the first height whose pendant-extended root ratio lands within eps of
// lambda. No effective bound exists for the search, hence the caps.
Gadget build_dense_vertex_gadget(const Rat& gamma, int degree, const Rat& lambda, const Rat& eps,
                                 long iter_cap = 100000, size_t node_cap = 200000);

// Perfect vertex-activity trees at gamma = -1 (max degree 3), for every
// rational lambda.
Gadget build_minus_one_vertex_tree(const Rat& lambda);

// Perfect edge-activity -1 gadget at gamma = -1/4 (max degree 3).
Gadget build_quarter_edge_gadget();

// Perfect edge-activity -1 gadget at an exceptional gamma: locates the first
// vanishing tree, strips it to a minimal-enough zero tree, applies the
// matching case construction, and composes through -1/4 when needed.
Gadget build_exceptional_edge_gadget(const Rat& gamma, int degree);

// Replaces every edge of `host` with a fresh copy of a perfect edge gadget,
// identifying endpoints with terminals. Host vertices keep their ids
// (0..n_host-1); gadget interiors are appended after them.
Graph substitute_edges(const Graph& host, const Gadget& edge_gadget);

// Reusable exponential-precision vertex-activity pipeline for a fixed
// (gamma, degree): cover system plus the constantly-many auxiliary gadgets.
class VertexGadgetPipeline {
public:
    VertexGadgetPipeline(const Rat& gamma, int degree);
    Gadget build(const Rat& lambda, const Rat& eps) const;

    const CoverSystem& system() const { return sys_; }
    const std::vector<Gadget>& net_gadgets() const { return net_; }

private:
    Gadget build_away_from_one(const Rat& lambda, const Rat& eps) const;  // |lambda-1| >= 2/r
    Gadget build_near_one(const Rat& lambda, const Rat& eps) const;       // 0 < |lambda-1| < 2/r

    Rat gamma_;
    int degree_;
    CoverSystem sys_;
    std::vector<Gadget> net_;  // one per net point
    Gadget g0_;                // auxiliary activity -(1/gamma) - 1 - x0
    Gadget h0_;                // auxiliary activity x0
    Rat lambda0_;              // realized g0 activity
    Rat y0_;                   // realized h0 activity
};

// Vertex activity lambda within eps at any rational gamma below the
// zero-free threshold: exceptional activities route through the perfect
// edge-substitution composition, everything else through the pipeline.
Gadget build_vertex_gadget(const Rat& gamma, int degree, const Rat& lambda, const Rat& eps);

// Edge activity gamma' <= 0 within eps: three vertex gadgets on a 5-vertex
// chain, with the accuracy budget split by the perturbation radii.
Gadget build_edge_gadget(const Rat& gamma, int degree, const Rat& gamma_prime, const Rat& eps);

}  // namespace matchpoly
