#pragma once

#include <span>
#include <string>
#include <vector>

#include "matchpoly/rational.hpp"

namespace matchpoly {

// Sparse multivariate polynomial with exact rational coefficients. Small by
// construction; used to make the perturbation-radius bounds effective.
class Polynomial {
public:
    struct Term {
        Rat coef;
        std::vector<unsigned> exps;  // one exponent per variable
    };

    explicit Polynomial(int nvars = 0) : nvars_(nvars) {}
    static Polynomial constant(int nvars, const Rat& c);
    static Polynomial variable(int nvars, int index);

    int variable_count() const { return nvars_; }
    const std::vector<Term>& terms() const { return terms_; }
    bool is_constant() const;
    int degree() const;  // max total degree, 0 for the zero polynomial
    // size measure: degree plus sum over coefficients p/q of 1 + log(|p|+|q|).
    double size_measure() const;

    Rat eval(std::span<const Rat> point) const;
    // True when the variable occurs with positive exponent in some term.
    bool uses_variable(int index) const;

    Polynomial operator+(const Polynomial& o) const;
    Polynomial operator-(const Polynomial& o) const;
    Polynomial operator*(const Polynomial& o) const;
    Polynomial scaled(const Rat& c) const;

    std::string to_string() const;  // debugging aid

private:
    void add_term(Rat coef, std::vector<unsigned> exps);
    void normalize();

    int nvars_;
    std::vector<Term> terms_;
};

// A radius eps' > 0 such that |P(b) - P(a)| <= eps whenever every
// |b_i - a_i| <= eps'. Rejects points with a_i = 0 for a variable that
// actually occurs (the constraint system is unsatisfiable there).
Rat poly_perturbation_radius(const Polynomial& P, std::span<const Rat> a, const Rat& eps);

// A radius eps' > 0 such that Q(b) != 0 and |P/Q(b) - P/Q(a)| <= eps on the
// ball; requires Q(a) != 0.
Rat ratio_perturbation_radius(const Polynomial& P, const Polynomial& Q, std::span<const Rat> a,
                              const Rat& eps);

}  // namespace matchpoly
