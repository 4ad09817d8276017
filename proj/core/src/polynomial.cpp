#include "matchpoly/polynomial.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <sstream>

namespace matchpoly {

Polynomial Polynomial::constant(int nvars, const Rat& c) {
    Polynomial p(nvars);
    if (c != 0) p.terms_.push_back({c, std::vector<unsigned>(nvars, 0)});
    return p;
}

Polynomial Polynomial::variable(int nvars, int index) {
    if (index < 0 || index >= nvars) throw DomainError("Polynomial::variable: index out of range");
    Polynomial p(nvars);
    std::vector<unsigned> e(nvars, 0);
    e[index] = 1;
    p.terms_.push_back({Rat(1), std::move(e)});
    return p;
}

bool Polynomial::is_constant() const {
    for (const auto& t : terms_)
        for (unsigned e : t.exps)
            if (e > 0) return false;
    return true;
}

int Polynomial::degree() const {
    int d = 0;
    for (const auto& t : terms_) {
        int td = 0;
        for (unsigned e : t.exps) td += static_cast<int>(e);
        d = std::max(d, td);
    }
    return d;
}

double Polynomial::size_measure() const {
    double s = degree();
    for (const auto& t : terms_) {
        mpz_class total = abs(t.coef.get_num()) + t.coef.get_den();
        s += 1.0 + std::log(total.get_d());
    }
    return s;
}

Rat Polynomial::eval(std::span<const Rat> point) const {
    if (static_cast<int>(point.size()) != nvars_)
        throw DomainError("Polynomial::eval: wrong point dimension");
    Rat out(0);
    for (const auto& t : terms_) {
        Rat term = t.coef;
        for (int i = 0; i < nvars_; ++i)
            if (t.exps[i] > 0) term *= rat_pow(point[i], t.exps[i]);
        out += term;
    }
    return out;
}

bool Polynomial::uses_variable(int index) const {
    for (const auto& t : terms_)
        if (t.exps[index] > 0) return true;
    return false;
}

void Polynomial::add_term(Rat coef, std::vector<unsigned> exps) {
    terms_.push_back({std::move(coef), std::move(exps)});
}

void Polynomial::normalize() {
    std::map<std::vector<unsigned>, Rat> combined;
    for (auto& t : terms_) combined[t.exps] += t.coef;
    terms_.clear();
    for (auto& [exps, coef] : combined)
        if (coef != 0) terms_.push_back({coef, exps});
}

Polynomial Polynomial::operator+(const Polynomial& o) const {
    if (nvars_ != o.nvars_) throw DomainError("polynomial arity mismatch");
    Polynomial out(nvars_);
    out.terms_ = terms_;
    for (const auto& t : o.terms_) out.add_term(t.coef, t.exps);
    out.normalize();
    return out;
}

Polynomial Polynomial::operator-(const Polynomial& o) const { return *this + o.scaled(Rat(-1)); }

Polynomial Polynomial::operator*(const Polynomial& o) const {
    if (nvars_ != o.nvars_) throw DomainError("polynomial arity mismatch");
    Polynomial out(nvars_);
    for (const auto& s : terms_)
        for (const auto& t : o.terms_) {
            std::vector<unsigned> exps(nvars_);
            for (int i = 0; i < nvars_; ++i) exps[i] = s.exps[i] + t.exps[i];
            out.add_term(s.coef * t.coef, std::move(exps));
        }
    out.normalize();
    return out;
}

Polynomial Polynomial::scaled(const Rat& c) const {
    Polynomial out(nvars_);
    if (c == 0) return out;
    for (const auto& t : terms_) out.add_term(t.coef * c, t.exps);
    return out;
}

std::string Polynomial::to_string() const {
    if (terms_.empty()) return "0";
    std::ostringstream out;
    bool first = true;
    for (const auto& t : terms_) {
        if (!first) out << " + ";
        first = false;
        out << rat_to_string(t.coef);
        for (int i = 0; i < nvars_; ++i)
            if (t.exps[i] > 0) out << "*x" << i << "^" << t.exps[i];
    }
    return out.str();
}

Rat poly_perturbation_radius(const Polynomial& P, std::span<const Rat> a, const Rat& eps) {
    if (eps <= 0) throw DomainError("poly_perturbation_radius: eps must be positive");
    if (static_cast<int>(a.size()) != P.variable_count())
        throw DomainError("poly_perturbation_radius: wrong point dimension");
    const auto& terms = P.terms();
    const int n = P.variable_count();
    const int m = static_cast<int>(terms.size());

    for (int i = 0; i < n; ++i)
        if (P.uses_variable(i) && a[i] == 0)
            throw DomainError("poly_perturbation_radius: variable x" + std::to_string(i) +
                              " occurs but a_i = 0; constraint system is unsatisfiable");
    if (m == 0 || P.is_constant()) return eps < 1 ? eps : Rat(1);

    // eps' is the least of three constraint families: eps' <= |a_i|,
    // eps' * d * 2^{d-1} <= |a_i|, and the per-term product bound.
    Rat radius = eps < 1 ? eps : Rat(1);
    for (int i = 0; i < n; ++i) {
        if (!P.uses_variable(i)) continue;
        Rat ai = rat_abs(a[i]);
        radius = std::min(radius, ai);
        for (int j = 0; j < m; ++j) {
            unsigned d = terms[j].exps[i];
            if (d == 0) continue;
            Rat two_pow = rat_pow(Rat(2), d - 1);
            Rat slope_bound = ai / (Rat(static_cast<long>(d)) * two_pow);
            radius = std::min(radius, slope_bound);

            // eps' * d (2|a_i|)^{d-1} * prod_{k<i} |a_k|^{d_kj}
            //        * prod_{k>i} 2|a_k|^{d_kj}  <=  eps / (m n |c_j|)
            Rat lhs_coeff = Rat(static_cast<long>(d)) * rat_pow(2 * ai, d - 1);
            for (int k = 0; k < n; ++k) {
                if (k == i) continue;
                unsigned dk = terms[j].exps[k];
                if (dk == 0) continue;
                Rat f = rat_pow(rat_abs(a[k]), dk);
                if (k > i) f *= 2;
                lhs_coeff *= f;
            }
            Rat rhs = eps / (Rat(m) * Rat(n) * rat_abs(terms[j].coef));
            Rat product_bound = rhs / lhs_coeff;
            radius = std::min(radius, product_bound);
        }
    }
    return radius;
}

Rat ratio_perturbation_radius(const Polynomial& P, const Polynomial& Q, std::span<const Rat> a,
                              const Rat& eps) {
    if (eps <= 0) throw DomainError("ratio_perturbation_radius: eps must be positive");
    Rat qa = Q.eval(a);
    if (qa == 0) throw DomainError("ratio_perturbation_radius: Q(a) = 0");
    Rat pa = P.eval(a);
    Rat abs_qa = rat_abs(qa);
    Rat cancel_guard = eps * abs_qa * abs_qa / (2 * (rat_abs(pa) + abs_qa));
    Rat half_q = abs_qa / 2;
    Rat eta = std::min(cancel_guard, half_q);
    Rat rp = poly_perturbation_radius(P, a, eta);
    Rat rq = poly_perturbation_radius(Q, a, eta);
    return std::min(rp, rq);
}

}  // namespace matchpoly
