#pragma once

#include <gmpxx.h>

#include <optional>
#include <string>
#include <string_view>

#include "matchpoly/errors.hpp"

namespace matchpoly {

// Exact rational scalar. All gadget and oracle arithmetic runs on these.
using Rat = mpq_class;

inline Rat rat_abs(const Rat& x) { return x < 0 ? Rat(-x) : x; }

// mpq_class's two-argument constructor does not reduce; this one does.
inline Rat make_rat(const mpz_class& num, const mpz_class& den) {
    if (den == 0) throw DomainError("make_rat: zero denominator");
    Rat r(num, den);
    r.canonicalize();
    return r;
}
inline Rat make_rat(long num, long den) { return make_rat(mpz_class(num), mpz_class(den)); }

Rat rat_pow(const Rat& base, unsigned long exp);

// Parses "p", "p/q" or a plain decimal such as "-0.25". Throws ParseError.
Rat parse_rational(std::string_view text);

// "p" or "p/q", canonical form.
std::string rat_to_string(const Rat& x);

// Decimal rendering with `digits` places after the point, rounded to
// nearest (ties away from zero).
std::string rat_to_decimal(const Rat& x, int digits);

// The unique smallest-denominator rational in the closed interval [lo, hi].
Rat simplest_rational_in(const Rat& lo, const Rat& hi);

// The Stern-Brocot simplest positive rational r with r*r in [lo, hi].
// Requires 0 < lo < hi.
Rat simplest_rational_with_square_in(const Rat& lo, const Rat& hi);

// Complex number with exact rational real and imaginary parts.
struct ExactComplex {
    Rat re, im;

    ExactComplex() : re(0), im(0) {}
    ExactComplex(Rat r) : re(std::move(r)), im(0) {}
    ExactComplex(Rat r, Rat i) : re(std::move(r)), im(std::move(i)) {}
    ExactComplex(long r) : re(r), im(0) {}
    ExactComplex(long r, long i) : re(r), im(i) {}

    bool is_zero() const { return re == 0 && im == 0; }
    bool is_real() const { return im == 0; }
    ExactComplex conj() const { return {re, Rat(-im)}; }
    Rat norm2() const { return re * re + im * im; }

    friend ExactComplex operator+(const ExactComplex& a, const ExactComplex& b) {
        return {a.re + b.re, a.im + b.im};
    }
    friend ExactComplex operator-(const ExactComplex& a, const ExactComplex& b) {
        return {a.re - b.re, a.im - b.im};
    }
    friend ExactComplex operator-(const ExactComplex& a) { return {-a.re, -a.im}; }
    friend ExactComplex operator*(const ExactComplex& a, const ExactComplex& b) {
        return {a.re * b.re - a.im * b.im, a.re * b.im + a.im * b.re};
    }
    friend ExactComplex operator/(const ExactComplex& a, const ExactComplex& b) {
        Rat n2 = b.norm2();
        if (n2 == 0) throw DomainError("exact complex division by zero");
        return {(a.re * b.re + a.im * b.im) / n2, (a.im * b.re - a.re * b.im) / n2};
    }
    ExactComplex& operator+=(const ExactComplex& b) { re += b.re; im += b.im; return *this; }
    ExactComplex& operator*=(const ExactComplex& b) { *this = *this * b; return *this; }
    friend bool operator==(const ExactComplex& a, const ExactComplex& b) {
        return a.re == b.re && a.im == b.im;
    }
};

// Parses "a/b c/d" (real then imaginary; decimals also accepted per field).
ExactComplex parse_exact_complex(std::string_view text);

// "a/b c/d" round-trip form.
std::string exact_complex_to_string(const ExactComplex& z);

// "re+im i" decimal rendering.
std::string exact_complex_to_decimal(const ExactComplex& z, int digits);

double rat_to_double(const Rat& x);

}  // namespace matchpoly
