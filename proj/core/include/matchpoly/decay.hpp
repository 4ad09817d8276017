#pragma once

#include <complex>
#include <cstddef>
#include <vector>

#include "matchpoly/graph.hpp"

namespace matchpoly {

// Connective-constant family parameters: sum_{k<=l} N_G(v,k) <= c*Delta^l
// for all l >= a*log n (natural log).
struct Family {
    double Delta = 0, a = 0, c = 0;
};

// The full constant set driving the approximation algorithm, derived once
// per (gamma, family, n, eps).
struct DecayParams {
    std::complex<double> gamma{};
    std::complex<double> Q{};   // gamma = (1/Q)^2, Re(Q) > 0
    std::complex<double> u0{};  // 1/Q, the leaf value in y-space
    double gamma_hat = 0;       // 2|gamma| / (1 + cos arg gamma) = 1/Re(Q)^2
    double D = 0;               // max(Delta, 3/(4 gamma_hat))
    double p = 0, q = 0;        // conjugate exponents
    double alpha = 0;           // per-level contraction factor
    double L = 0, M = 0;        // density infimum / boundary-distance bound
    double c_hat = 1;           // max(1, c)
    double delta_per_vertex = 0;  // eps / (2n)
    int ell = 0;                // truncation depth
    int n = 0;
    Family family;
};

// Throws DomainError for gamma on the closed negative real ray or gamma = 0,
// and for out-of-range family/eps arguments.
DecayParams derive_params(std::complex<double> gamma, const Family& family, int n, double eps);

struct EvalDiagnostics {
    size_t nodes = 0;
    double min_headroom = 0;   // min over nodes of |Q + sum y_i| / Re(Q); > 1 in exact math
    double min_re_y = 0;
    double max_abs_y = 0;
    bool domain_ok = true;     // every y stayed in (the closure of) U, with slack 1e-12
};

struct ApproxPResult {
    std::complex<double> p_tilde{};
    EvalDiagnostics diag;
};

// Truncated-SAW-tree estimate of p_v with relative error delta_per_vertex/2
// for graphs in the declared family.
ApproxPResult approx_p(const Graph& g, int v, const DecayParams& params,
                       size_t node_cap = 4'000'000);

// Same evaluation with software floats of the given mantissa width; used for
// round-off stress checks.
ApproxPResult approx_p_highprec(const Graph& g, int v, const DecayParams& params, int prec_bits,
                                size_t node_cap = 4'000'000);

struct ApproxZResult {
    std::complex<double> z_hat{};
    double eps = 0;
    DecayParams params;
    std::vector<size_t> factor_nodes;  // SAW nodes per telescoping factor
    double wall_ms = 0;
};

// Telescoping-product estimate: z_hat = Z_G(gamma) * e^z with |z| <= eps for
// graphs in the family. Vertices are eliminated in ascending id order, each
// factor evaluated on the graph with all previous vertices deleted.
ApproxZResult approx_z(const Graph& g, std::complex<double> gamma, double eps,
                       const Family& family, size_t node_cap = 4'000'000);

}  // namespace matchpoly
