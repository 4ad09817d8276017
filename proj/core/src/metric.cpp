#include "matchpoly/metric.hpp"

#include <cmath>

#include "matchpoly/errors.hpp"

namespace matchpoly {

bool ConformalDensity::in_domain(std::complex<double> x) const {
    switch (kind) {
        case Kind::poincare_half_plane:
            return x.real() > 0;
        case Kind::matching_phi:
            return x.real() > 0 && x.real() < 2.0 / Q.real();
    }
    return false;
}

double ConformalDensity::operator()(std::complex<double> x) const {
    if (!in_domain(x)) throw DomainError("conformal density evaluated outside its domain");
    switch (kind) {
        case Kind::poincare_half_plane:
            return 1.0 / x.real();
        case Kind::matching_phi:
            return 1.0 / (x.real() * (2.0 / Q.real() - x.real()));
    }
    return 0;
}

double segment_length(std::complex<double> a, std::complex<double> b,
                      const ConformalDensity& phi, int steps) {
    if (steps <= 0) throw DomainError("segment_length: steps must be positive");
    if (a == b) return 0.0;
    const double speed = std::abs(b - a);
    double sum = 0;
    for (int i = 0; i < steps; ++i) {
        double t = (i + 0.5) / steps;
        sum += phi((1.0 - t) * a + t * b);
    }
    return sum * speed / steps;
}

double poincare_distance(std::complex<double> a, std::complex<double> b) {
    double x1 = a.real(), y1 = a.imag(), x2 = b.real(), y2 = b.imag();
    if (!(x1 > 0) || !(x2 > 0)) throw DomainError("poincare_distance: points must have Re > 0");
    double dy2 = (y2 - y1) * (y2 - y1);
    return 2.0 * std::log((std::sqrt(dy2 + (x2 - x1) * (x2 - x1)) +
                           std::sqrt(dy2 + (x1 + x2) * (x1 + x2))) /
                          (2.0 * std::sqrt(x1 * x2)));
}

namespace {

bool in_u(std::complex<double> y, const DecayParams& params) {
    return y.real() > 0 && std::abs(y) < 1.0 / params.Q.real();
}

}  // namespace

double contraction_residual(std::span<const std::complex<double>> ys, const DecayParams& params) {
    if (ys.empty()) throw DomainError("contraction_residual: need at least one input");
    for (auto y : ys)
        if (!in_u(y, params)) throw DomainError("contraction_residual: input outside U");
    ConformalDensity phi = ConformalDensity::matching(params.Q);
    std::complex<double> sum = 0;
    for (auto y : ys) sum += y;
    std::complex<double> f = 1.0 / (params.Q + sum);
    // dF/dy_i = -1/(Q + sum)^2, identical for every i.
    double dmod = std::abs(1.0 / ((params.Q + sum) * (params.Q + sum)));
    double phif = phi(f);
    double lhs = 0;
    for (auto y : ys) lhs += std::pow(phif * dmod / phi(y), params.p);
    return std::pow(lhs, 1.0 / params.p) / params.alpha;
}

bool real_contraction_check(std::span<const double> xs, double gamma_hat, double Delta) {
    if (xs.empty()) throw DomainError("real_contraction_check: need at least one input");
    if (!(gamma_hat > 0) || !(Delta > 0))
        throw DomainError("real_contraction_check: gamma_hat and Delta must be positive");
    for (double x : xs)
        if (!(x > 0) || x > 1) throw DomainError("real_contraction_check: inputs must lie in (0,1]");

    auto phi_hat = [](double x) { return 1.0 / (x * (2.0 - x)); };
    double s = 0;
    for (double x : xs) s += x;
    const double D = std::max(Delta, 3.0 / (4.0 * gamma_hat));
    const double root = std::sqrt(1.0 + 4.0 * gamma_hat * D);
    const double p = 1.0 / (1.0 - 1.0 / root);
    const double q = p / (p - 1.0);
    const double alpha_hat = std::pow(D, -1.0 / q) * (1.0 - 2.0 / (1.0 + root));

    double lhs = std::pow(phi_hat(1.0 / (1.0 + gamma_hat * s)), p);
    double inner = 0;
    double deriv = gamma_hat / std::pow(1.0 + gamma_hat * s, 2);
    for (double x : xs) inner += std::pow(deriv / phi_hat(x), p);
    lhs *= inner;
    return lhs <= std::pow(alpha_hat, p) + 1e-12;
}

std::pair<double, double> one_level_decay_probe(std::span<const std::complex<double>> xs,
                                                std::span<const std::complex<double>> ys,
                                                const DecayParams& params, int steps) {
    if (xs.size() != ys.size() || xs.empty())
        throw DomainError("one_level_decay_probe: arity mismatch");
    for (size_t i = 0; i < xs.size(); ++i)
        if (!in_u(xs[i], params) || !in_u(ys[i], params))
            throw DomainError("one_level_decay_probe: input outside U");
    ConformalDensity phi = ConformalDensity::matching(params.Q);
    std::complex<double> sx = 0, sy = 0;
    for (auto x : xs) sx += x;
    for (auto y : ys) sy += y;
    std::complex<double> fx = 1.0 / (params.Q + sx);
    std::complex<double> fy = 1.0 / (params.Q + sy);
    double lhs = segment_length(fx, fy, phi, steps);
    double rhs = 0;
    for (size_t i = 0; i < xs.size(); ++i)
        rhs += std::pow(segment_length(xs[i], ys[i], phi, steps), params.q);
    rhs = params.alpha * std::pow(rhs, 1.0 / params.q);
    return {lhs, rhs};
}

}  // namespace matchpoly
