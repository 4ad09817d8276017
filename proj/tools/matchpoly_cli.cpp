// Command-line front end: exact evaluation, certified approximation, walk
// trees, profile checks, contraction scans, gadget construction and the
// oracle-reduction demo. Output is line-oriented `key = value` text so runs
// diff cleanly; --output mirrors the record to a file where offered.

#include <CLI11.hpp>

#include <complex>
#include <fstream>
#include <iostream>
#include <random>
#include <sstream>

#include "matchpoly/decay.hpp"
#include "matchpoly/exact.hpp"
#include "matchpoly/gadget.hpp"
#include "matchpoly/graph.hpp"
#include "matchpoly/metric.hpp"
#include "matchpoly/reduction.hpp"
#include "matchpoly/saw_tree.hpp"

using namespace matchpoly;

namespace {

Graph load_graph(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error("cannot read graph file '" + path + "'");
    std::stringstream ss;
    ss << in.rdbuf();
    return Graph::parse(ss.str());
}

std::complex<double> to_cplx(const ExactComplex& z) {
    return {rat_to_double(z.re), rat_to_double(z.im)};
}

void write_output(const std::string& path, const std::string& text) {
    if (path.empty()) return;
    std::ofstream out(path);
    if (!out) throw Error("cannot write output file '" + path + "'");
    out << text;
}

struct ExactArgs {
    std::string graph_path, gamma_text, output;
    int digits = 12;
};

int run_exact(const ExactArgs& a) {
    Graph g = load_graph(a.graph_path);
    ExactComplex gamma = parse_exact_complex(a.gamma_text);
    ExactComplex z = z_exact(g, gamma);
    std::ostringstream out;
    out << "n = " << g.vertex_count() << "\n";
    out << "m = " << g.edge_count() << "\n";
    out << "gamma = " << exact_complex_to_string(gamma) << "\n";
    out << "z = " << exact_complex_to_string(z) << "\n";
    out << "z_decimal = " << exact_complex_to_decimal(z, a.digits) << "\n";
    std::cout << out.str();
    write_output(a.output, out.str());
    return 0;
}

struct ApproxArgs {
    std::string graph_path, gamma_text, family_text, output;
    double eps = 0.1;
    size_t node_cap = 4'000'000;
};

int run_approx(const ApproxArgs& a) {
    Graph g = load_graph(a.graph_path);
    ExactComplex gamma_exact = parse_exact_complex(a.gamma_text);
    std::complex<double> gamma = to_cplx(gamma_exact);
    Family fam;
    if (std::sscanf(a.family_text.c_str(), "%lf,%lf,%lf", &fam.Delta, &fam.a, &fam.c) != 3)
        throw DomainError("--family expects \"Delta,a,c\"");
    ApproxZResult r = approx_z(g, gamma, a.eps, fam, a.node_cap);
    std::ostringstream out;
    out << "z_hat_re = " << r.z_hat.real() << "\n";
    out << "z_hat_im = " << r.z_hat.imag() << "\n";
    out << "eps = " << r.eps << "\n";
    out << "ell = " << r.params.ell << "\n";
    out << "alpha = " << r.params.alpha << "\n";
    out << "p = " << r.params.p << "\n";
    out << "q = " << r.params.q << "\n";
    out << "factor_nodes =";
    for (size_t n : r.factor_nodes) out << " " << n;
    out << "\nwall_ms = " << r.wall_ms << "\n";
    std::cout << out.str();
    write_output(a.output, out.str());
    return 0;
}

struct SawArgs {
    std::string graph_path, output;
    int root = 0, depth = 0;
    size_t node_cap = 4'000'000;
};

int run_saw(const SawArgs& a) {
    Graph g = load_graph(a.graph_path);
    SawTree t = build_saw_tree(g, a.root, a.depth, a.node_cap);
    std::ostringstream out;
    out << "nodes = " << t.size() << "\n";
    out << "cut_leaves = " << t.cut_leaves.size() << "\n";
    auto hist = t.depth_histogram();
    for (size_t d = 0; d < hist.size(); ++d)
        out << "depth_" << d << " = " << hist[d] << "\n";
    std::cout << out.str();
    write_output(a.output, out.str());
    return 0;
}

struct ProfileArgs {
    std::string graph_path, output;
    double delta = 2.0, a = 1.0, c = 1.0;
    int lmax = 6;
};

int run_profile(const ProfileArgs& a) {
    Graph g = load_graph(a.graph_path);
    ProfileReport rep = check_profile(g, a.delta, a.a, a.c, a.lmax);
    std::ostringstream out;
    for (const auto& row : rep.checked_lengths)
        out << "ell = " << row.ell << "  max_sum = " << row.max_sum.get_str()
            << "  bound = " << row.bound << "  vertex = " << row.argmax_vertex << "\n";
    out << "verdict = " << (rep.pass ? "pass" : "fail") << "\n";
    if (rep.first_failure)
        out << "first_failure = vertex " << rep.first_failure->first << ", ell "
            << rep.first_failure->second << "\n";
    std::cout << out.str();
    write_output(a.output, out.str());
    return rep.pass ? 0 : 1;
}

struct ScanArgs {
    std::string gamma_text, output;
    double Delta = 3.0;
    int dmax = 0, trials = 10000;
    unsigned seed = 1;
};

int run_contraction_scan(const ScanArgs& a) {
    ExactComplex gamma_exact = parse_exact_complex(a.gamma_text);
    std::complex<double> gamma = to_cplx(gamma_exact);
    DecayParams P = derive_params(gamma, {a.Delta, 1.0, 1.0}, 8, 0.1);
    int dmax = a.dmax > 0 ? a.dmax : static_cast<int>(std::ceil(a.Delta));
    std::mt19937 rng(a.seed);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    std::ostringstream out;
    out << "gamma Delta d max_residual\n";
    for (int d = 1; d <= dmax; ++d) {
        double worst = 0;
        for (int t = 0; t < a.trials; ++t) {
            std::vector<std::complex<double>> ys;
            for (int i = 0; i < d; ++i) {
                double radius = (1.0 / P.Q.real()) * std::sqrt(unit(rng)) * 0.999999;
                double angle = (unit(rng) - 0.5) * M_PI * 0.999999;
                ys.push_back(std::polar(radius, angle));
            }
            worst = std::max(worst, contraction_residual(ys, P));
        }
        out << a.gamma_text << " " << a.Delta << " " << d << " " << worst << "\n";
    }
    std::cout << out.str();
    write_output(a.output, out.str());
    return 0;
}

struct GadgetVertexArgs {
    std::string gamma_text, lambda_text, eps_text, output, route = "fast";
    int degree = 3;
    long iter_cap = 100000;
};

int run_gadget_vertex(const GadgetVertexArgs& a) {
    Rat gamma = parse_rational(a.gamma_text);
    Rat lambda = parse_rational(a.lambda_text);
    Rat eps = parse_rational(a.eps_text);
    Gadget g;
    if (a.route == "fast")
        g = build_vertex_gadget(gamma, a.degree, lambda, eps);
    else if (a.route == "dense")
        g = build_dense_vertex_gadget(gamma, a.degree, lambda, eps, a.iter_cap);
    else
        throw DomainError("--route must be fast or dense");
    std::string record = serialize_gadget(g);
    std::cout << "vertices = " << g.graph.vertex_count() << "\n";
    std::cout << "achieved = " << rat_to_string(g.achieved[0]) << "\n";
    std::cout << "accuracy = " << rat_to_string(g.accuracy) << "\n";
    if (a.output.empty())
        std::cout << record;
    else
        write_output(a.output, record);
    return 0;
}

struct GadgetEdgeArgs {
    std::string gamma_text, gamma_prime_text, eps_text, output;
    int degree = 3;
};

int run_gadget_edge(const GadgetEdgeArgs& a) {
    Rat gamma = parse_rational(a.gamma_text);
    Rat gamma_prime = parse_rational(a.gamma_prime_text);
    Rat eps = parse_rational(a.eps_text);
    Gadget g = build_edge_gadget(gamma, a.degree, gamma_prime, eps);
    std::string record = serialize_gadget(g);
    std::cout << "vertices = " << g.graph.vertex_count() << "\n";
    std::cout << "achieved = " << rat_to_string(g.achieved[0]) << " "
              << rat_to_string(g.achieved[1]) << " " << rat_to_string(g.achieved[2]) << "\n";
    if (a.output.empty())
        std::cout << record;
    else
        write_output(a.output, record);
    return 0;
}

struct ZeroScanArgs {
    std::string graph_path, output;
    std::string re_min = "-1", re_max = "1", im_min = "-1", im_max = "1";
    int steps = 8;
};

int run_zero_scan(const ZeroScanArgs& a) {
    Graph g = load_graph(a.graph_path);
    Rat re0 = parse_rational(a.re_min), re1 = parse_rational(a.re_max);
    Rat im0 = parse_rational(a.im_min), im1 = parse_rational(a.im_max);
    if (a.steps < 1) throw DomainError("--steps must be positive");
    std::ostringstream out;
    out << "re im abs_z zero forbidden_ray\n";
    int zeros = 0, violations = 0;
    for (int i = 0; i <= a.steps; ++i) {
        for (int j = 0; j <= a.steps; ++j) {
            Rat re = re0 + (re1 - re0) * Rat(i) / a.steps;
            Rat im = im0 + (im1 - im0) * Rat(j) / a.steps;
            ExactComplex gamma(re, im);
            auto rep = zero_free_check(g, gamma);
            bool zero = rep.z.is_zero();
            zeros += zero;
            violations += !rep.consistent;
            out << rat_to_decimal(re, 6) << " " << rat_to_decimal(im, 6) << " "
                << std::sqrt(rat_to_double(rep.z.norm2())) << " " << zero << " "
                << rep.in_forbidden_ray << "\n";
        }
    }
    out << "zeros = " << zeros << "\n";
    out << "zero_free_violations = " << violations << "\n";
    std::cout << out.str();
    write_output(a.output, out.str());
    return violations == 0 ? 0 : 1;
}

struct ReduceArgs {
    std::string graph_path, edge_text, oracle = "sign", mode = "direct", output;
    std::string gamma_text = "-1";
    int iters = 100000, degree = 3;
    unsigned seed = 1;
};

int run_reduce_demo(const ReduceArgs& a) {
    Graph g = load_graph(a.graph_path);
    int u, v;
    if (std::sscanf(a.edge_text.c_str(), "%d %d", &u, &v) != 2)
        throw DomainError("--edge expects \"u v\"");
    OracleKind oracle = a.oracle == "sign"   ? OracleKind::sign_only
                        : a.oracle == "norm" ? OracleKind::norm_factor_1_01
                                             : OracleKind::exact_simulated;
    SearchMode mode = a.mode == "composed" ? SearchMode::composed_graph : SearchMode::direct_f;
    SearchResult r = binary_search_ratio(g, {u, v}, oracle, a.iters, mode,
                                         parse_rational(a.gamma_text), a.degree);
    std::ostringstream out;
    out << "rounds = " << r.rounds << "\n";
    size_t show = std::min<size_t>(r.trace.size(), 4);
    for (size_t i = 0; i < show; ++i)
        out << "interval_" << i << " = [" << rat_to_decimal(r.trace[i].first, 6) << ", "
            << rat_to_decimal(r.trace[i].second, 6) << "]\n";
    out << "final = [" << rat_to_decimal(r.lo, 18) << ", " << rat_to_decimal(r.hi, 18) << "]\n";
    if (r.reconstructed) {
        out << "r_goal = " << rat_to_string(*r.reconstructed) << "\n";
        out << "ratio = " << rat_to_string(*r.ratio) << "\n";
        // Cross-check against the exact engine.
        Rat beta = z_exact(g.without_edge(u, v), Rat(-1, 10));
        Rat exact_ratio = z_exact(g, Rat(-1, 10)) / beta;
        out << "ratio_matches_exact = " << (exact_ratio == *r.ratio) << "\n";
    } else {
        out << "r_goal = unresolved (interval too wide)\n";
    }
    std::cout << out.str();
    write_output(a.output, out.str());
    return 0;
}

struct PathsArgs {
    std::string output;
    int nmax = 24;
};

int run_paths_table(const PathsArgs& a) {
    auto vals = path_partition_values(a.nmax);
    std::ostringstream out;
    for (int n = 1; n <= a.nmax; ++n)
        out << "Z_P" << n << " = " << rat_to_string(vals[n - 1]) << "\n";
    std::cout << out.str();
    write_output(a.output, out.str());
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"matching polynomial toolkit: exact evaluation, certified "
                 "approximation, and activity-gadget construction"};
    app.require_subcommand(1);

    ExactArgs ea;
    auto* c_exact = app.add_subcommand("exact", "evaluate Z_G(gamma) in exact arithmetic");
    c_exact->add_option("--graph", ea.graph_path, "edge-list file")->required();
    c_exact->add_option("--gamma", ea.gamma_text, "activity \"a/b c/d\" (decimals accepted)")
        ->required();
    c_exact->add_option("--digits", ea.digits, "decimal digits to render");
    c_exact->add_option("--output", ea.output, "also write the record here");

    ApproxArgs aa;
    auto* c_approx = app.add_subcommand("approx", "certified multiplicative approximation");
    c_approx->add_option("--graph", aa.graph_path)->required();
    c_approx->add_option("--gamma", aa.gamma_text)->required();
    c_approx->add_option("--eps", aa.eps, "relative error budget in (0,1)")->required();
    c_approx->add_option("--family", aa.family_text, "connective profile \"Delta,a,c\"")
        ->required();
    c_approx->add_option("--node-cap", aa.node_cap);
    c_approx->add_option("--output", aa.output);

    SawArgs sa;
    auto* c_saw = app.add_subcommand("saw", "self-avoiding-walk tree statistics");
    c_saw->add_option("--graph", sa.graph_path)->required();
    c_saw->add_option("--root", sa.root)->required();
    c_saw->add_option("--depth", sa.depth)->required();
    c_saw->add_option("--node-cap", sa.node_cap);
    c_saw->add_option("--output", sa.output);

    ProfileArgs pa;
    auto* c_prof = app.add_subcommand("profile", "connective-constant profile check");
    c_prof->add_option("--graph", pa.graph_path)->required();
    c_prof->add_option("--delta", pa.delta)->required();
    c_prof->add_option("--a", pa.a)->required();
    c_prof->add_option("--c", pa.c)->required();
    c_prof->add_option("--lmax", pa.lmax)->required();
    c_prof->add_option("--output", pa.output);

    ScanArgs ca;
    auto* c_scan = app.add_subcommand("contraction-scan", "one-level contraction residual sweep");
    c_scan->add_option("--gamma", ca.gamma_text)->required();
    c_scan->add_option("--Delta", ca.Delta)->required();
    c_scan->add_option("--dmax", ca.dmax, "max arity (default ceil(Delta))");
    c_scan->add_option("--trials", ca.trials);
    c_scan->add_option("--seed", ca.seed);
    c_scan->add_option("--output", ca.output);

    GadgetVertexArgs ga;
    auto* c_gv = app.add_subcommand("gadget-vertex", "build a vertex-activity gadget");
    c_gv->add_option("--gamma", ga.gamma_text)->required();
    c_gv->add_option("--degree", ga.degree);
    c_gv->add_option("--lambda", ga.lambda_text)->required();
    c_gv->add_option("--eps", ga.eps_text)->required();
    c_gv->add_option("--route", ga.route, "fast (default) or dense");
    c_gv->add_option("--iter-cap", ga.iter_cap);
    c_gv->add_option("--output", ga.output, "write the gadget record here");

    GadgetEdgeArgs ge;
    auto* c_ge = app.add_subcommand("gadget-edge", "build an edge-activity gadget");
    c_ge->add_option("--gamma", ge.gamma_text)->required();
    c_ge->add_option("--degree", ge.degree);
    c_ge->add_option("--gamma-prime", ge.gamma_prime_text)->required();
    c_ge->add_option("--eps", ge.eps_text)->required();
    c_ge->add_option("--output", ge.output);

    ZeroScanArgs za;
    auto* c_zs = app.add_subcommand("zero-scan", "|Z_G| over a rectangle of activities");
    c_zs->add_option("--graph", za.graph_path)->required();
    c_zs->add_option("--re-min", za.re_min);
    c_zs->add_option("--re-max", za.re_max);
    c_zs->add_option("--im-min", za.im_min);
    c_zs->add_option("--im-max", za.im_max);
    c_zs->add_option("--steps", za.steps);
    c_zs->add_option("--output", za.output);

    ReduceArgs ra;
    auto* c_rd = app.add_subcommand("reduce-demo", "binary-search ratio reconstruction");
    c_rd->add_option("--graph", ra.graph_path)->required();
    c_rd->add_option("--edge", ra.edge_text, "\"u v\"")->required();
    c_rd->add_option("--iters", ra.iters);
    c_rd->add_option("--oracle", ra.oracle, "sign | norm | exact");
    c_rd->add_option("--mode", ra.mode, "direct | composed");
    c_rd->add_option("--gamma", ra.gamma_text, "ambient activity for composed mode");
    c_rd->add_option("--degree", ra.degree);
    c_rd->add_option("--seed", ra.seed);
    c_rd->add_option("--output", ra.output);

    PathsArgs ta;
    auto* c_pt = app.add_subcommand("paths-table", "path partition values at -1");
    c_pt->add_option("--nmax", ta.nmax);
    c_pt->add_option("--output", ta.output);

    try {
        app.parse(argc, argv);
        if (*c_exact) return run_exact(ea);
        if (*c_approx) return run_approx(aa);
        if (*c_saw) return run_saw(sa);
        if (*c_prof) return run_profile(pa);
        if (*c_scan) return run_contraction_scan(ca);
        if (*c_gv) return run_gadget_vertex(ga);
        if (*c_ge) return run_gadget_edge(ge);
        if (*c_zs) return run_zero_scan(za);
        if (*c_rd) return run_reduce_demo(ra);
        if (*c_pt) return run_paths_table(ta);
        return 2;
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "internal error: " << e.what() << "\n";
        return 1;
    }
}
