#include "matchpoly/rational.hpp"

#include <cctype>
#include <iterator>
#include <sstream>
#include <vector>

namespace matchpoly {

Rat rat_pow(const Rat& base, unsigned long exp) {
    Rat out;
    mpz_pow_ui(out.get_num_mpz_t(), base.get_num_mpz_t(), exp);
    mpz_pow_ui(out.get_den_mpz_t(), base.get_den_mpz_t(), exp);
    out.canonicalize();
    return out;
}

namespace {

bool all_digits(std::string_view s) {
    if (s.empty()) return false;
    for (char c : s)
        if (!std::isdigit(static_cast<unsigned char>(c))) return false;
    return true;
}

Rat parse_decimal(std::string_view text, bool negative) {
    auto dot = text.find('.');
    std::string intpart(text.substr(0, dot));
    std::string fracpart(text.substr(dot + 1));
    if (intpart.empty()) intpart = "0";
    if (!all_digits(intpart) || !all_digits(fracpart))
        throw ParseError("bad decimal literal '" + std::string(text) + "'");
    mpz_class num(intpart);
    mpz_class scale;
    mpz_ui_pow_ui(scale.get_mpz_t(), 10, fracpart.size());
    num = num * scale + mpz_class(fracpart);
    Rat out(num, scale);
    out.canonicalize();
    return negative ? Rat(-out) : out;
}

}  // namespace

Rat parse_rational(std::string_view text) {
    while (!text.empty() && std::isspace(static_cast<unsigned char>(text.front()))) text.remove_prefix(1);
    while (!text.empty() && std::isspace(static_cast<unsigned char>(text.back()))) text.remove_suffix(1);
    if (text.empty()) throw ParseError("empty rational literal");

    bool negative = false;
    if (text.front() == '+' || text.front() == '-') {
        negative = text.front() == '-';
        text.remove_prefix(1);
    }
    if (text.empty()) throw ParseError("bare sign is not a rational");

    if (text.find('.') != std::string_view::npos) {
        if (text.find('/') != std::string_view::npos)
            throw ParseError("mixed decimal/fraction literal '" + std::string(text) + "'");
        return parse_decimal(text, negative);
    }

    auto slash = text.find('/');
    std::string num(text.substr(0, slash));
    if (!all_digits(num)) throw ParseError("bad rational literal '" + std::string(text) + "'");
    mpz_class p(num), q(1);
    if (slash != std::string_view::npos) {
        std::string den(text.substr(slash + 1));
        if (!all_digits(den)) throw ParseError("bad denominator in '" + std::string(text) + "'");
        q = mpz_class(den);
        if (q == 0) throw ParseError("zero denominator in '" + std::string(text) + "'");
    }
    Rat out(p, q);
    out.canonicalize();
    return negative ? Rat(-out) : out;
}

std::string rat_to_string(const Rat& x) {
    if (x.get_den() == 1) return x.get_num().get_str();
    return x.get_num().get_str() + "/" + x.get_den().get_str();
}

std::string rat_to_decimal(const Rat& x, int digits) {
    if (digits < 0) digits = 0;
    bool neg = x < 0;
    Rat a = rat_abs(x);
    mpz_class scale;
    mpz_ui_pow_ui(scale.get_mpz_t(), 10, digits);
    mpz_class scaled_num = a.get_num() * scale;
    mpz_class q, r;
    mpz_fdiv_qr(q.get_mpz_t(), r.get_mpz_t(), scaled_num.get_mpz_t(), a.get_den().get_mpz_t());
    if (2 * r >= a.get_den()) q += 1;  // round to nearest, ties away from zero
    mpz_class ip = q / scale, fp = q % scale;
    std::string out = (neg && q != 0 ? "-" : "") + ip.get_str();
    if (digits > 0) {
        std::string frac = fp.get_str();
        out += "." + std::string(digits - frac.size(), '0') + frac;
    }
    return out;
}

Rat simplest_rational_in(const Rat& lo, const Rat& hi) {
    if (lo > hi) throw DomainError("simplest_rational_in: empty interval");
    if (lo <= 0 && hi >= 0) return Rat(0);
    if (hi < 0) return -simplest_rational_in(-hi, -lo);

    // 0 < lo <= hi: walk the continued fraction shared by both endpoints.
    Rat a = lo, b = hi;
    std::vector<mpz_class> quotients;
    for (;;) {
        mpz_class fa, fb;
        mpz_fdiv_q(fa.get_mpz_t(), a.get_num().get_mpz_t(), a.get_den().get_mpz_t());
        mpz_fdiv_q(fb.get_mpz_t(), b.get_num().get_mpz_t(), b.get_den().get_mpz_t());
        if (fa < fb || a == fa) {
            // Smallest integer in [a, b]: a itself when integral, else fa+1.
            mpz_class chosen = fa;
            if (a != fa) chosen = fa + 1;
            quotients.push_back(chosen);
            break;
        }
        quotients.push_back(fa);
        Rat ra = a - Rat(fa), rb = b - Rat(fb);
        // fa == fb and a is not an integer, so rb > 0.
        a = 1 / rb;
        b = 1 / ra;
    }
    Rat value(quotients.back());
    for (auto it = std::next(quotients.rbegin()); it != quotients.rend(); ++it)
        value = Rat(*it) + 1 / value;
    return value;
}

Rat simplest_rational_with_square_in(const Rat& lo, const Rat& hi) {
    if (!(0 < lo && lo < hi))
        throw DomainError("simplest_rational_with_square_in requires 0 < lo < hi");
    // Stern-Brocot descent on r, testing r^2 against the interval.
    mpz_class an = 0, ad = 1, bn = 1, bd = 0;
    for (;;) {
        mpz_class mn = an + bn, md = ad + bd;
        Rat m(mn, md);
        Rat m2 = m * m;
        if (m2 < lo) {
            an = mn; ad = md;
        } else if (m2 > hi) {
            bn = mn; bd = md;
        } else {
            return m;
        }
    }
}

ExactComplex parse_exact_complex(std::string_view text) {
    std::string s(text);
    std::istringstream in(s);
    std::string re_tok, im_tok, extra;
    if (!(in >> re_tok)) throw ParseError("empty complex literal");
    if (!(in >> im_tok)) im_tok = "0";
    if (in >> extra) throw ParseError("trailing tokens in complex literal '" + s + "'");
    return {parse_rational(re_tok), parse_rational(im_tok)};
}

std::string exact_complex_to_string(const ExactComplex& z) {
    return rat_to_string(z.re) + " " + rat_to_string(z.im);
}

std::string exact_complex_to_decimal(const ExactComplex& z, int digits) {
    std::string im = rat_to_decimal(z.im, digits);
    std::string sep = (!im.empty() && im[0] == '-') ? "" : "+";
    return rat_to_decimal(z.re, digits) + sep + im + "i";
}

double rat_to_double(const Rat& x) { return x.get_d(); }

}  // namespace matchpoly
