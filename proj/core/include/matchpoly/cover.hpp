#pragma once

#include <vector>

#include "matchpoly/rational.hpp"

namespace matchpoly {

// A family of contracting Moebius maps Phi_i(x) = 1/(1 + gamma(lambda_i + x))
// on an interval I = [x0 - r, x0 + r] around an attracting fixpoint, whose
// images jointly cover I. Composing along a backward orbit steers any target
// in I to within eps using O(log 1/eps) maps.
struct CoverSystem {
    Rat gamma;              // negative rational activity
    Rat x0;                 // attracting fixpoint
    Rat r;                  // interval radius
    Rat delta;              // net spacing tolerance (r/4)
    Rat eta;                // perturbation radius backing the contraction bound
    Rat lambda_center;      // the lambda whose map fixes x0
    Rat phi_prime_mod;      // |Phi'(x0)| = |gamma| x0^2, in (0,1)
    std::vector<Rat> lambdas_star;  // delta-net of [lambda - eta/2, lambda + eta/2]
    std::vector<Rat> lambdas;       // realized values, each within delta of its net point
    Rat contraction_bound;          // exact sup of |Phi_i'| over I (attained at endpoints)

    Rat lo() const { return x0 - r; }
    Rat hi() const { return x0 + r; }
    bool contains(const Rat& x) const { return lo() <= x && x <= hi(); }
};

// Builds the system for a negative rational activity. The free fixpoint
// parameter starts at t = 2 and moves on collisions (x1 = +-x2 or a
// non-attracting pair).
CoverSystem make_cover_system(const Rat& gamma);

// Same system with the net points replaced by realized values (each within
// delta of its net point); re-verifies both invariants.
CoverSystem with_realized_lambdas(const CoverSystem& sys, std::vector<Rat> lambdas);

// Exact invariant check: every map contracting on I (endpoint + midpoint
// samples, and sup attained at endpoints), pole-free on I, and the sorted
// images cover I. Throws Error on violation; returns the exact sup of
// |Phi_i'| over I and all maps.
Rat verify_cover_system(const CoverSystem& sys);

Rat cover_map(const CoverSystem& sys, int i, const Rat& x);
Rat cover_map_inverse(const CoverSystem& sys, int i, const Rat& x);

struct CoverWord {
    Rat y_hat;
    std::vector<int> word;  // map indices in application order, first applied first
};

// Backward-orbit targeting: returns y_hat = Phi_{word} applied to y0 with
// |y_hat - y| <= eps, all exact. y0, y must lie in I and eps > 0.
CoverWord iterate_cover_maps(const CoverSystem& sys, const Rat& y0, const Rat& y, const Rat& eps);

}  // namespace matchpoly
