#include "matchpoly/cover.hpp"

#include <algorithm>

#include "matchpoly/polynomial.hpp"

namespace matchpoly {

namespace {

Rat map_at(const Rat& gamma, const Rat& lambda, const Rat& x) {
    Rat denom = 1 + gamma * (lambda + x);
    if (denom == 0) throw DomainError("cover map evaluated at its pole");
    return 1 / denom;
}

Rat map_deriv_mod(const Rat& gamma, const Rat& lambda, const Rat& x) {
    Rat denom = 1 + gamma * (lambda + x);
    if (denom == 0) throw DomainError("cover map derivative at its pole");
    return rat_abs(gamma / (denom * denom));
}

}  // namespace

Rat cover_map(const CoverSystem& sys, int i, const Rat& x) {
    return map_at(sys.gamma, sys.lambdas.at(i), x);
}

Rat cover_map_inverse(const CoverSystem& sys, int i, const Rat& x) {
    if (x == 0) throw DomainError("cover map inverse at 0");
    return (1 / x - 1) / sys.gamma - sys.lambdas.at(i);
}

CoverSystem make_cover_system(const Rat& gamma) {
    if (gamma >= 0) throw DomainError("make_cover_system: gamma must be negative");

    // Fixpoint pair x1 = t, x2 = -1/(gamma t); needs x1 != +-x2 and exactly
    // one of |gamma| x_i^2 < 1. Default t = 2, bumped on collision.
    const Rat candidates[] = {Rat(2), Rat(3), Rat(5, 2), Rat(7, 2), Rat(4), Rat(9, 2)};
    Rat x1, x2;
    bool found = false;
    for (const Rat& t : candidates) {
        x1 = t;
        x2 = Rat(-1) / (gamma * t);
        if (x1 == x2 || x1 == -x2) continue;
        if (rat_abs(gamma) * x1 * x1 == 1) continue;  // neither fixpoint attracting
        found = true;
        break;
    }
    if (!found) throw Error("make_cover_system: no usable fixpoint parameter");

    CoverSystem sys;
    sys.gamma = gamma;
    sys.lambda_center = -(x1 + x2) - 1 / gamma;  // from 1 + gamma*lambda = -gamma(x1+x2)
    Rat d1 = rat_abs(gamma) * x1 * x1;
    sys.x0 = d1 < 1 ? x1 : x2;
    sys.phi_prime_mod = rat_abs(gamma) * sys.x0 * sys.x0;
    if (!(sys.phi_prime_mod > 0 && sys.phi_prime_mod < 1))
        throw Error("make_cover_system: fixpoint is not attracting");

    // eta from the derivative expression gamma/(1+gamma(lambda'+x))^2 as a
    // rational function of (lambda', x), made effective by the ratio radius.
    Polynomial lam = Polynomial::variable(2, 0);
    Polynomial xx = Polynomial::variable(2, 1);
    Polynomial one = Polynomial::constant(2, Rat(1));
    Polynomial denom_lin = one + (lam + xx).scaled(gamma);
    Polynomial Q = denom_lin * denom_lin;
    Polynomial P = Polynomial::constant(2, gamma);
    Rat half_gap = sys.phi_prime_mod < 1 - sys.phi_prime_mod
                       ? Rat(sys.phi_prime_mod / 2)
                       : Rat((1 - sys.phi_prime_mod) / 2);
    Rat point[2] = {sys.lambda_center, sys.x0};
    Rat eta = ratio_perturbation_radius(P, Q, point, half_gap);
    // Keep 0 safely outside the working interval so inverses stay defined.
    Rat abs_x0_half = rat_abs(sys.x0) / 2;
    eta = std::min(eta, abs_x0_half);
    // Any smaller radius keeps every bound valid; take the simplest rational
    // in [eta/2, eta] so net points and interval endpoints stay small.
    eta = simplest_rational_in(eta / 2, eta);
    sys.eta = eta;
    sys.r = sys.phi_prime_mod * eta / 4;
    sys.delta = sys.r / 4;

    // Net covering [lambda - eta/2, lambda + eta/2] to within delta: slots of
    // width delta on a uniform grid, each represented by the simplest
    // rational it contains (grid points themselves tend to have tall
    // continued fractions, which would blow up the downstream tree words).
    Rat start = sys.lambda_center - eta / 2;
    Rat ratio = eta / sys.delta;
    mpz_class steps_z;
    mpz_fdiv_q(steps_z.get_mpz_t(), ratio.get_num().get_mpz_t(), ratio.get_den().get_mpz_t());
    long slots = steps_z.get_si() + 1;
    for (long i = 0; i < slots; ++i) {
        Rat slot_lo = start + Rat(i) * sys.delta;
        Rat slot_hi = slot_lo + sys.delta;
        sys.lambdas_star.push_back(simplest_rational_in(slot_lo, slot_hi));
    }
    sys.lambdas = sys.lambdas_star;

    sys.contraction_bound = verify_cover_system(sys);
    return sys;
}

CoverSystem with_realized_lambdas(const CoverSystem& sys, std::vector<Rat> lambdas) {
    if (lambdas.size() != sys.lambdas_star.size())
        throw DomainError("with_realized_lambdas: size mismatch");
    CoverSystem out = sys;
    for (size_t i = 0; i < lambdas.size(); ++i)
        if (rat_abs(lambdas[i] - sys.lambdas_star[i]) > sys.delta)
            throw DomainError("with_realized_lambdas: value strays beyond delta of its net point");
    out.lambdas = std::move(lambdas);
    out.contraction_bound = verify_cover_system(out);
    return out;
}

Rat verify_cover_system(const CoverSystem& sys) {
    const Rat lo = sys.lo(), hi = sys.hi();
    std::vector<std::pair<Rat, Rat>> images;
    Rat contraction(0);
    for (const Rat& lambda : sys.lambdas) {
        // Pole-free on I: the affine denominator keeps one sign at both ends.
        Rat dl = 1 + sys.gamma * (lambda + lo);
        Rat dh = 1 + sys.gamma * (lambda + hi);
        if (dl == 0 || dh == 0 || (dl > 0) != (dh > 0))
            throw Error("cover system: map has a pole inside I");
        // Contracting on I. |Phi'| is monotone in x (affine denominator), so
        // endpoint samples bound the sup; the midpoint is checked as well.
        Rat dmod_lo = map_deriv_mod(sys.gamma, lambda, lo);
        Rat dmod_hi = map_deriv_mod(sys.gamma, lambda, hi);
        Rat dmod_mid = map_deriv_mod(sys.gamma, lambda, sys.x0);
        Rat worst = std::max(dmod_lo, dmod_hi);
        if (!(worst < 1) || !(dmod_mid < 1)) throw Error("cover system: map not contracting on I");
        contraction = std::max(contraction, worst);
        // gamma < 0 makes Phi increasing where defined.
        Rat img_lo = map_at(sys.gamma, lambda, lo);
        Rat img_hi = map_at(sys.gamma, lambda, hi);
        if (img_lo > img_hi) std::swap(img_lo, img_hi);
        images.emplace_back(img_lo, img_hi);
    }
    std::sort(images.begin(), images.end());
    // Sweep: the sorted interval images must cover [lo, hi] without gaps.
    Rat covered = lo;
    for (const auto& [a, b] : images) {
        if (covered >= hi) break;
        if (a > covered) throw Error("cover system: images leave a gap in I");
        covered = std::max(covered, b);
    }
    if (covered < hi) throw Error("cover system: images do not reach the top of I");
    return contraction;
}

CoverWord iterate_cover_maps(const CoverSystem& sys, const Rat& y0, const Rat& y, const Rat& eps) {
    if (eps <= 0) throw DomainError("iterate_cover_maps: eps must be positive");
    if (!sys.contains(y0) || !sys.contains(y))
        throw DomainError("iterate_cover_maps: start and target must lie in I");
    if (sys.contraction_bound == 0 || !(sys.contraction_bound < 1))
        throw Error("iterate_cover_maps: system missing a verified contraction bound");

    // Steps until contraction^k * |I| <= eps.
    Rat span = 2 * sys.r;
    long k = 0;
    Rat shrink(1);
    while (shrink * span > eps) {
        shrink *= sys.contraction_bound;
        ++k;
        if (k > 1'000'000)
            throw CapExceededError("iterate_cover_maps: step count exploded", k);
    }

    // Backward orbit from the target, then forward application from y0.
    std::vector<int> backward;
    Rat w = y;
    for (long s = 0; s < k; ++s) {
        bool advanced = false;
        for (size_t j = 0; j < sys.lambdas.size(); ++j) {
            Rat pre = cover_map_inverse(sys, static_cast<int>(j), w);
            if (sys.contains(pre)) {
                backward.push_back(static_cast<int>(j));
                w = pre;
                advanced = true;
                break;
            }
        }
        if (!advanced)
            throw Error("iterate_cover_maps: no covering index found (cover invariant violated)");
    }
    CoverWord out;
    out.word.assign(backward.rbegin(), backward.rend());
    Rat v = y0;
    for (int j : out.word) v = cover_map(sys, j, v);
    out.y_hat = v;
    if (rat_abs(out.y_hat - y) > eps)
        throw Error("iterate_cover_maps: composed orbit missed the target tolerance");
    return out;
}

}  // namespace matchpoly
