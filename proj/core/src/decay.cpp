#include "matchpoly/decay.hpp"

#include <gmpxx.h>

#include <chrono>
#include <cmath>
#include <limits>

#include "matchpoly/saw_tree.hpp"

namespace matchpoly {

namespace {

constexpr double kDomainSlack = 1e-12;

// Software complex over GMP floats; precision is seeded through Q and u0 and
// inherited by every derived value.
struct BigComplex {
    mpf_class re, im;
    BigComplex() : re(0), im(0) {}
    BigComplex(double r) : re(r), im(0) {}
    BigComplex(mpf_class r, mpf_class i) : re(std::move(r)), im(std::move(i)) {}
    friend BigComplex operator+(const BigComplex& a, const BigComplex& b) {
        return {a.re + b.re, a.im + b.im};
    }
    friend BigComplex operator*(const BigComplex& a, const BigComplex& b) {
        return {a.re * b.re - a.im * b.im, a.re * b.im + a.im * b.re};
    }
    friend BigComplex operator/(const BigComplex& a, const BigComplex& b) {
        mpf_class n2 = b.re * b.re + b.im * b.im;
        return {(a.re * b.re + a.im * b.im) / n2, (a.im * b.re - a.re * b.im) / n2};
    }
    BigComplex& operator+=(const BigComplex& b) {
        re += b.re;
        im += b.im;
        return *this;
    }
};

double abs_value(std::complex<double> z) { return std::abs(z); }
double abs_value(const BigComplex& z) {
    mpf_class n2 = z.re * z.re + z.im * z.im;
    mpf_class r;
    mpf_sqrt(r.get_mpf_t(), n2.get_mpf_t());
    return r.get_d();
}

double re_value(std::complex<double> z) { return z.real(); }
double re_value(const BigComplex& z) { return z.re.get_d(); }

std::complex<double> to_std(std::complex<double> z) { return z; }
std::complex<double> to_std(const BigComplex& z) { return {z.re.get_d(), z.im.get_d()}; }

template <class C>
ApproxPResult eval_saw_y(const SawTree& t, const C& Q, const C& u0, const DecayParams& params) {
    const double re_q = params.Q.real();
    const double abs_q = std::abs(params.Q);
    EvalDiagnostics diag;
    diag.nodes = t.size();
    diag.min_headroom = std::numeric_limits<double>::infinity();
    diag.min_re_y = std::numeric_limits<double>::infinity();
    diag.max_abs_y = 0;

    std::vector<C> value(t.size(), C(0.0));
    for (size_t i = t.size(); i-- > 0;) {
        const auto& kids = t.children[i];
        if (kids.empty()) {
            value[i] = u0;
        } else {
            C sum(0.0);
            for (int c : kids) sum += value[c];
            C denom = Q + sum;
            double headroom = abs_value(denom) / re_q;
            diag.min_headroom = std::min(diag.min_headroom, headroom);
            if (!(headroom > 0.5))
                throw Error("saw evaluation lost its denominator headroom |Q+sum y| >= Re(Q)");
            value[i] = C(1.0) / denom;
            // Domain closure: y stays in the closure of U, with the sharper
            // real-part floor depending on the child count d.
            double rey = re_value(value[i]);
            double absy = abs_value(value[i]);
            diag.min_re_y = std::min(diag.min_re_y, rey);
            diag.max_abs_y = std::max(diag.max_abs_y, absy);
            double d = static_cast<double>(kids.size());
            double re_floor = re_q / std::pow(abs_q + d / re_q, 2);
            if (!(rey > 0) || absy > 1.0 / re_q + kDomainSlack || rey < re_floor - kDomainSlack)
                diag.domain_ok = false;
        }
    }
    ApproxPResult out;
    out.p_tilde = to_std(value[t.root] * Q);
    out.diag = diag;
    return out;
}

}  // namespace

DecayParams derive_params(std::complex<double> gamma, const Family& family, int n, double eps) {
    if (gamma.imag() == 0 && gamma.real() < 0)
        throw DomainError("derive_params: gamma on the negative real ray is out of range");
    if (gamma == std::complex<double>(0, 0))
        throw DomainError("derive_params: gamma = 0 is trivial (Z = 1); no parameters to derive");
    if (!(family.Delta > 0) || !(family.a > 0) || !(family.c > 0))
        throw DomainError("derive_params: family parameters must be positive");
    if (n < 1) throw DomainError("derive_params: n must be at least 1");
    if (!(eps > 0) || !(eps < 1)) throw DomainError("derive_params: eps must lie in (0,1)");

    DecayParams P;
    P.gamma = gamma;
    P.family = family;
    P.n = n;
    P.Q = std::sqrt(1.0 / gamma);  // principal branch has Re >= 0
    if (P.Q.real() <= 0) throw DomainError("derive_params: could not place Re(Q) > 0");
    P.u0 = 1.0 / P.Q;
    P.gamma_hat = 2.0 * std::abs(gamma) / (1.0 + std::cos(std::arg(gamma)));
    P.D = std::max(family.Delta, 3.0 / (4.0 * P.gamma_hat));
    const double root = std::sqrt(1.0 + 4.0 * P.gamma_hat * P.D);
    P.p = 1.0 / (1.0 - 1.0 / root);
    P.q = P.p / (P.p - 1.0);
    P.alpha = std::pow(P.D, -1.0 / P.q) * (1.0 - 2.0 / (1.0 + root));
    const double step = std::pow(family.Delta, 1.0 / P.q) * P.alpha;
    if (!(P.alpha > 0 && P.alpha < 1) || !(step < 1))
        throw DomainError("derive_params: contraction constants out of range (Delta^{1/q} alpha >= 1)");

    const double re_q = P.Q.real();
    const double abs_q = std::abs(P.Q);
    P.L = 0.5 * re_q * re_q;
    P.M = (2.0 / re_q) * std::pow(abs_q + n / re_q, 2);
    P.c_hat = std::max(1.0, family.c);
    P.delta_per_vertex = eps / (2.0 * n);

    const double rhs =
        P.delta_per_vertex * re_q / (2.0 * std::pow(abs_q + n / re_q, 2));
    const double lead = (P.M / P.L) * std::pow(P.c_hat, 1.0 / P.q);
    int ell = std::max(0, static_cast<int>(std::ceil(family.a * std::log(static_cast<double>(n)))));
    double factor = std::pow(step, ell);
    constexpr int kEllCap = 1'000'000;
    while (lead * factor > rhs) {
        ++ell;
        factor *= step;
        if (ell > kEllCap)
            throw CapExceededError("derive_params: truncation depth search exceeded cap", ell);
    }
    P.ell = ell;
    return P;
}

ApproxPResult approx_p(const Graph& g, int v, const DecayParams& params, size_t node_cap) {
    SawTree t = build_saw_tree(g, v, params.ell, node_cap);
    return eval_saw_y<std::complex<double>>(t, params.Q, params.u0, params);
}

ApproxPResult approx_p_highprec(const Graph& g, int v, const DecayParams& params, int prec_bits,
                                size_t node_cap) {
    if (prec_bits < 24) throw DomainError("approx_p_highprec: mantissa too small");
    SawTree t = build_saw_tree(g, v, params.ell, node_cap);
    mpf_class qre(params.Q.real(), prec_bits), qim(params.Q.imag(), prec_bits);
    BigComplex Q{qre, qim};
    BigComplex u0 = BigComplex(1.0) / Q;
    return eval_saw_y<BigComplex>(t, Q, u0, params);
}

ApproxZResult approx_z(const Graph& g, std::complex<double> gamma, double eps,
                       const Family& family, size_t node_cap) {
    auto start = std::chrono::steady_clock::now();
    ApproxZResult out;
    out.eps = eps;
    if (gamma == std::complex<double>(0, 0)) {
        // Only the empty matching survives.
        out.z_hat = 1.0;
        return out;
    }
    if (g.vertex_count() == 0) {
        out.z_hat = 1.0;
        return out;
    }
    out.params = derive_params(gamma, family, g.vertex_count(), eps);

    std::complex<double> product = 1.0;
    Graph cur = g;
    while (cur.vertex_count() > 0) {
        // Ascending-id elimination: the lowest original id still present is
        // always id 0 of the shrunken graph.
        ApproxPResult f = approx_p(cur, 0, out.params, node_cap);
        if (f.p_tilde == std::complex<double>(0, 0))
            throw Error("approx_z: telescoping factor evaluated to zero");
        product *= f.p_tilde;
        out.factor_nodes.push_back(f.diag.nodes);
        cur = cur.without_vertex(0);
    }
    out.z_hat = 1.0 / product;
    out.wall_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start)
                      .count();
    return out;
}

}  // namespace matchpoly
