#pragma once

#include <complex>
#include <span>
#include <utility>

#include "matchpoly/decay.hpp"

namespace matchpoly {

// Positive weight on a complex domain inducing path lengths
// int Phi(eta(t)) |eta'(t)| dt and an infimum distance.
struct ConformalDensity {
    enum class Kind { poincare_half_plane, matching_phi };
    Kind kind = Kind::poincare_half_plane;
    std::complex<double> Q{};  // only for matching_phi

    bool in_domain(std::complex<double> x) const;
    double operator()(std::complex<double> x) const;

    static ConformalDensity poincare() { return {Kind::poincare_half_plane, {}}; }
    static ConformalDensity matching(std::complex<double> Q) { return {Kind::matching_phi, Q}; }
};

// Composite-midpoint quadrature of the length of the straight segment from a
// to b; O(steps^-2) for smooth Phi. Throws DomainError when a sample leaves
// the density's domain. This upper-bounds the geodesic distance.
double segment_length(std::complex<double> a, std::complex<double> b,
                      const ConformalDensity& phi, int steps);

// Poincare half-plane distance in closed form (for cross-checks).
double poincare_distance(std::complex<double> a, std::complex<double> b);

// One-level contraction check: with F(y) = 1/(Q + sum y_i) and Phi the
// matching density, returns (sum_i |Phi(F) dF/dy_i / Phi(y_i)|^p)^{1/p} / alpha.
// At most 1 for inputs in U.
double contraction_residual(std::span<const std::complex<double>> ys, const DecayParams& params);

// Real-axis version with PhiHat(x) = 1/(x(2-x)) on (0,1]; true when the
// displayed inequality holds with 1e-12 slack.
bool real_contraction_check(std::span<const double> xs, double gamma_hat, double Delta);

// Straight-segment upper bounds on both sides of the one-level decay
// inequality: (bound on dist(F(x),F(y)), alpha * (sum seg(x_i,y_i)^q)^{1/q}).
// Both sides are upper bounds, so this is a probe, not an inequality test.
std::pair<double, double> one_level_decay_probe(std::span<const std::complex<double>> xs,
                                                std::span<const std::complex<double>> ys,
                                                const DecayParams& params, int steps = 20000);

}  // namespace matchpoly
