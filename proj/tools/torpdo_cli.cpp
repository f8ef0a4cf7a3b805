// torpdo: batch front end for the toroidal pseudo-differential library.
//
// Every subcommand writes its artifacts into --out (default ./torpdo-out) and
// echoes the text report on stdout. Exit codes: 0 success, 1 non-stable
// verify-theorem verdict under --strict, 2 bad configuration, 3 I/O or
// numerical failure.

#include <cstdio>
#include <filesystem>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "torpdo/torpdo.hpp"

namespace fs = std::filesystem;
using namespace torpdo;

namespace {

constexpr int exit_ok = 0;
constexpr int exit_verdict = 1;
constexpr int exit_config = 2;
constexpr int exit_runtime = 3;

struct Common {
    std::string out = "torpdo-out";
    std::uint64_t seed = 1;
};

struct Artifacts {
    fs::path dir;
    std::vector<std::pair<std::string, std::string>> files;

    void add(std::string name, std::string content) { files.emplace_back(std::move(name), std::move(content)); }

    /// Nothing is written unless the whole run succeeded.
    void flush() const
    {
        for (const auto& [name, content] : files)
            write_file_atomic(dir / name, content);
    }
};

std::string fmt(double v)
{
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.12g", v);
    return buf;
}

/// Global keys (minus --out) plus an INI section holding the keys of the
/// subcommand that ran. Feeding it back through --config repeats the run.
std::string effective_config(const CLI::App& app, const CLI::App& sub)
{
    std::istringstream all(app.config_to_str(true, false));
    const std::string own = "[" + sub.get_name() + "]";
    std::string out, line;
    bool keep = true;
    while (std::getline(all, line)) {
        if (!line.empty() && line.front() == '[') {
            keep = line == own;
            if (keep)
                out += line + "\n";
            continue;
        }
        const std::size_t eq = line.find('=');
        if (!keep || eq == std::string::npos || line.compare(0, eq, "out") == 0 || line.find('.') < eq)
            continue;
        // Defaults print as "[a,b]" and parsed vectors as [a, b]; write one form.
        std::string value = line.substr(eq + 1);
        if (value.size() > 3 && value.front() == '"' && value[1] == '[' && value.back() == '"')
            value = value.substr(1, value.size() - 2);
        if (!value.empty() && value.front() == '[')
            std::erase(value, ' ');
        out += line.substr(0, eq + 1) + value + "\n";
    }
    return out;
}

std::string fmt_cplx(cplx z) { return fmt(z.real()) + "," + fmt(z.imag()); }

NormSpec norm_from_name(const std::string& space, double r, double s, double p, double q)
{
    if (space == "lebesgue")
        return NormSpec::lebesgue(p);
    if (space == "sequence")
        return NormSpec::sequence(p);
    if (space == "besov")
        return NormSpec::besov(r, p, q);
    if (space == "triebel")
        return NormSpec::triebel(r, p, q);
    if (space == "holder")
        return NormSpec::holder(s);
    if (space == "holder-seminorm")
        return NormSpec::holder_semi(s);
    if (space == "mixed-holder")
        return NormSpec::mixed_holder(s, p);
    throw domain_error("unknown space '" + space + "'");
}

std::string class_table(const ClassReport& cr)
{
    std::string out;
    for (int a = 0; a <= cr.spec.alpha_max; ++a)
        for (int b = 0; b <= cr.spec.beta_max; ++b) {
            const auto& w = cr.witnesses[static_cast<std::size_t>(a)][static_cast<std::size_t>(b)];
            out += "  C[" + std::to_string(a) + "][" + std::to_string(b) + "] = " + fmt(cr.constant(a, b))
                   + "  (witness x_j = " + std::to_string(w.x_index) + ", xi = " + std::to_string(w.xi) + ")\n";
        }
    out += "  max = " + fmt(cr.max_constant()) + "\n";
    return out;
}

double extended(const std::string& text)
{
    if (text == "inf" || text == "infinity")
        return infinity;
    std::size_t used = 0;
    double v = 0.0;
    try {
        v = std::stod(text, &used);
    } catch (const std::exception&) {
        throw domain_error("not a number: '" + text + "'");
    }
    if (used != text.size())
        throw domain_error("not a number: '" + text + "'");
    return v;
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Toroidal pseudo-differential calculus: norms, symbols, composition, parametrix, "
                 "boundedness experiments"};
    app.set_config("--config", "", "Read options from an INI/TOML file (keys mirror flags)");
    app.require_subcommand(1);
    app.fallthrough();

    Common common;
    app.add_option("--out", common.out, "Output directory")->capture_default_str();
    app.add_option("--seed", common.seed, "Seed for probe generation")->capture_default_str();

    // Shared parameter strings: p and q accept "inf".
    std::string r_text = "0.4", s_text = "0.95", p_text = "2", q_text = "2";
    double rho = 1.0, alpha = 2.0;
    int n_points = 64;
    std::string sym, fn;

    auto add_space_params = [&](CLI::App* sc) {
        sc->add_option("--r", r_text, "Target smoothness r")->capture_default_str();
        sc->add_option("--s", s_text, "Source smoothness s")->capture_default_str();
        sc->add_option("--p", p_text, "Integrability p (or inf)")->capture_default_str();
        sc->add_option("--q", q_text, "Summability q (or inf)")->capture_default_str();
    };

    // norm
    auto* c_norm = app.add_subcommand("norm", "Norm of a function given in the expression language");
    std::string space = "besov";
    c_norm->add_option("--fn", fn, "Function of x, e.g. \"exp(1) + exp(4)\"")->required();
    c_norm->add_option("--n", n_points, "Grid size N")->capture_default_str();
    c_norm->add_option("--space", space, "lebesgue|sequence|besov|triebel|holder|holder-seminorm|mixed-holder")
        ->capture_default_str();
    add_space_params(c_norm);

    // apply
    auto* c_apply = app.add_subcommand("apply", "Apply Op(sigma) to a function and dump samples");
    c_apply->add_option("--sym", sym, "Symbol sigma(x, xi)")->required();
    c_apply->add_option("--fn", fn, "Function of x")->required();
    c_apply->add_option("--n", n_points, "Grid size N")->capture_default_str();

    // check-symbol
    auto* c_check = app.add_subcommand("check-symbol", "Class constants, Marcinkiewicz constant, ellipticity");
    std::string klass = "rho";
    double order_m = 0.0, delta = 0.0, ell_m = 0.0;
    int alpha_max = 0, beta_max = 0, min_xi = 1;
    c_check->add_option("--sym", sym, "Symbol sigma(x, xi)")->required();
    c_check->add_option("--n", n_points, "Grid size N")->capture_default_str();
    c_check->add_option("--class", klass, "rho (|xi|^-rho) | mixed (|xi|^{-rho-a}) | hormander (<xi>^{m-rho a+delta b})")
        ->capture_default_str();
    c_check->add_option("--rho", rho, "rho")->capture_default_str();
    c_check->add_option("--m", order_m, "Order m (hormander class)")->capture_default_str();
    c_check->add_option("--delta", delta, "delta (hormander class)")->capture_default_str();
    c_check->add_option("--alpha-max", alpha_max, "Largest difference order")->capture_default_str();
    c_check->add_option("--beta-max", beta_max, "Largest x-derivative order")->capture_default_str();
    c_check->add_option("--ellipticity-m", ell_m, "Order used for the ellipticity margin")->capture_default_str();
    c_check->add_option("--min-xi", min_xi, "Ellipticity on |xi| >= M")->capture_default_str();

    // compose
    auto* c_compose = app.add_subcommand("compose", "Asymptotic vs exact composition residuals");
    std::string tau = "bracket_pow(-1)", xmult = "falling-factorial";
    int order = 3, para_order = 2, para_n = 128, chord_n = 1024, demo_n = 128;
    c_compose->add_option("--tau", tau, "Left symbol tau")->capture_default_str();
    c_compose->add_option("--sym", sym, "Right symbol sigma")->required();
    c_compose->add_option("--n", n_points, "Grid size N")->capture_default_str();
    c_compose->add_option("--order", order, "Largest expansion order")->capture_default_str();
    c_compose->add_option("--xmult", xmult, "falling-factorial | derivative")->capture_default_str();

    // parametrix
    auto* c_para = app.add_subcommand("parametrix", "Parametrix residual against its order K");
    int probe_count = 20, probe_min = -1, probe_max = -1;
    c_para->add_option("--sym", sym, "Elliptic symbol sigma")->required();
    c_para->add_option("--m", order_m, "Order m of sigma")->required();
    c_para->add_option("--n", para_n, "Grid size N")->capture_default_str();
    c_para->add_option("--order", para_order, "Largest K")->capture_default_str();
    c_para->add_option("--min-xi", min_xi, "Ellipticity on |xi| >= M")->capture_default_str();
    c_para->add_option("--probes", probe_count, "Number of probes")->capture_default_str();
    c_para->add_option("--probe-min", probe_min, "Lowest probe |xi| (-1: N/16)")->capture_default_str();
    c_para->add_option("--probe-max", probe_max, "Highest probe |xi| (-1: N/8)")->capture_default_str();
    c_para->add_option("--xmult", xmult, "falling-factorial | derivative")->capture_default_str();

    // verify-theorem
    auto* c_thm = app.add_subcommand("verify-theorem", "Hypotheses, class constants and stability for a theorem");
    std::string id_text;
    std::vector<int> resolutions{64, 128, 256, 512};
    TheoremOptions topt;
    bool strict = false;
    c_thm->add_option("--id", id_text, "main|non|main22|hardy|nonHL|trie|trie2|HTC|min|thm13")->required();
    c_thm->add_option("--sym", sym, "Symbol (default depends on the theorem)");
    add_space_params(c_thm);
    c_thm->add_option("--rho", rho, "rho")->capture_default_str();
    c_thm->add_option("--alpha", alpha, "alpha (trie2, HTC)")->capture_default_str();
    c_thm->add_option("--resolutions", resolutions, "Grid sizes")->delimiter(',')->capture_default_str();
    c_thm->add_option("--lacunary", topt.lacunary_count, "Lacunary probes")->capture_default_str();
    c_thm->add_option("--random", topt.random_count, "Random probes")->capture_default_str();
    c_thm->add_option("--decay", topt.random_decay, "Random probe decay")->capture_default_str();
    c_thm->add_option("--growth", topt.growth_factor, "Allowed growth per doubling")->capture_default_str();
    c_thm->add_option("--frozen-nodes", topt.frozen_nodes, "Frozen multipliers per resolution")->capture_default_str();
    c_thm->add_flag("--strict", strict, "Exit 1 unless the verdict is stable");

    // inequality
    auto* c_ineq = app.add_subcommand("inequality", "Bernstein, Hardy-Littlewood and chord-bound checks");
    std::string ineq_name;
    int block_m = -1;
    std::vector<int> ineq_res{256, 512};
    InequalityOptions iopt;
    c_ineq->add_option("--name", ineq_name, "bernstein | hardy-littlewood | chord-bound")->required();
    c_ineq->add_option("--m", block_m, "Chord bound: single block m (default: all)");
    c_ineq->add_option("--n", chord_n, "Chord bound: grid size N")->capture_default_str();
    c_ineq->add_option("--p", p_text, "Exponent p")->capture_default_str();
    c_ineq->add_option("--s", s_text, "Hoelder exponent s (bernstein)")->capture_default_str();
    c_ineq->add_option("--resolutions", ineq_res, "Grid sizes")->delimiter(',')->capture_default_str();
    c_ineq->add_option("--lacunary", iopt.lacunary_count, "Lacunary probes")->capture_default_str();
    c_ineq->add_option("--random", iopt.random_count, "Random probes")->capture_default_str();

    // demo
    auto* c_demo = app.add_subcommand("demo", "Named scenarios: vector-field, riesz, elliptic");
    std::string demo_name;
    double c_re = 1.0, c_im = 0.0;
    c_demo->add_option("--name", demo_name, "vector-field | riesz | elliptic")->required();
    c_demo->add_option("--c", c_re, "vector-field: real part of c")->capture_default_str();
    c_demo->add_option("--ci", c_im, "vector-field: imaginary part of c")->capture_default_str();
    c_demo->add_option("--n", demo_n, "elliptic: grid size N")->capture_default_str();

    for (auto* sc : app.get_subcommands({}))
        sc->configurable();

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return exit_config;
    }

    Artifacts art;
    art.dir = common.out;
    std::string text;
    int status = exit_ok;
    try {
        const double r = extended(r_text), s = extended(s_text), p = extended(p_text), q = extended(q_text);
        XMultiplier kind = XMultiplier::falling_factorial;
        if (xmult == "derivative")
            kind = XMultiplier::derivative;
        else if (xmult != "falling-factorial")
            throw domain_error("unknown --xmult '" + xmult + "'");

        if (*c_norm) {
            const TorusGrid g(n_points);
            const auto f = SymbolExpr::parse(fn).function(g);
            const NormSpec spec = norm_from_name(space, r, s, p, q);
            const NormValue v = spec.evaluate(f);
            text = "function: " + fn + "\nN = " + std::to_string(n_points) + "\nspace: " + spec.label()
                   + "\nvalue: " + fmt(v.value) + "\n";
            if (v.max_block >= 0)
                text += "blocks: 0.." + std::to_string(v.max_block) + "\n";
            if (v.subsampled)
                text += "hoelder shifts subsampled\n";
            art.add("norm.txt", text);
        } else if (*c_apply) {
            const TorusGrid g(n_points);
            const auto f = SymbolExpr::parse(fn).function(g);
            const auto u = apply_full_symbol(SymbolExpr::parse(sym).full(g), f);
            std::string csv = "j,x,f_re,f_im,u_re,u_im\n";
            for (int j = 0; j < n_points; ++j)
                csv += std::to_string(j) + "," + fmt(g.node(j)) + "," + fmt_cplx(f[j]) + "," + fmt_cplx(u[j]) + "\n";
            art.add("apply.csv", csv);
            text = "applied " + sym + " to " + fn + " at N = " + std::to_string(n_points) + "; samples in apply.csv\n";
        } else if (*c_check) {
            const TorusGrid g(n_points);
            const SymbolExpr e = SymbolExpr::parse(sym);
            ClassSpec spec;
            if (klass == "rho")
                spec = ClassSpec::rho_condition(rho);
            else if (klass == "mixed")
                spec = ClassSpec::mixed_condition(rho, alpha_max, beta_max);
            else if (klass == "hormander")
                spec = ClassSpec::hormander(order_m, rho, delta, alpha_max, beta_max);
            else
                throw domain_error("unknown --class '" + klass + "'");
            const FullSymbol sigma = e.full(g, std::max(default_band_margin, spec.alpha_max + 1));
            const auto cr = class_constant(sigma, spec);
            text = "symbol: " + sym + "\nN = " + std::to_string(n_points) + "\nclass: " + klass + ", rho = " + fmt(rho)
                   + "\nconstants:\n" + class_table(cr);
            if (!e.depends_on_x()) {
                const auto mp = marcinkiewicz_profile(e.multiplier(g, 4));
                text += "marcinkiewicz: sup " + fmt(mp.sup_norm) + ", constant " + fmt(mp.constant) + "\n";
            }
            const double margin = ellipticity_margin(sigma, ell_m, min_xi);
            text += "ellipticity margin (m = " + fmt(ell_m) + ", |xi| >= " + std::to_string(min_xi) + "): " + fmt(margin)
                    + (is_elliptic(margin) ? " (elliptic)" : " (not elliptic)") + "\n";
            art.add("check-symbol.txt", text);
        } else if (*c_compose) {
            const TorusGrid g(n_points);
            const FullSymbol t = SymbolExpr::parse(tau).full(g, std::max(default_band_margin, order));
            const FullSymbol sg = SymbolExpr::parse(sym).full(g, std::max(default_band_margin, order));
            const auto exact = exact_compose(t, sg);
            const auto ex = compose_asymptotic(t, sg, order, kind);
            const auto w = FrequencyWindow::composition_default(g);
            std::string csv = "M_order,residual\n";
            text = "tau: " + tau + "\nsigma: " + sym + "\nN = " + std::to_string(n_points) + ", window " + std::to_string(w.lo)
                   + " <= |xi| <= " + std::to_string(w.hi) + ", D_x^(gamma): " + xmult + "\n";
            for (int k = 0; k <= order; ++k) {
                const double res = composition_residual(ex, exact, k, w);
                csv += std::to_string(k) + "," + fmt(res) + "\n";
                text += "  M_order = " + std::to_string(k) + ": sup residual " + fmt(res) + "\n";
            }
            art.add("compose.csv", csv);
            art.add("compose.txt", text);
        } else if (*c_para) {
            const TorusGrid g(para_n);
            const FullSymbol sg = SymbolExpr::parse(sym).full(g, std::max(default_band_margin, para_order));
            std::string csv = "K,max_residual,mean_residual\n";
            text = "sigma: " + sym + "\nm = " + fmt(order_m) + ", N = " + std::to_string(para_n) + "\n";
            for (int k = 0; k <= para_order; ++k) {
                ParametrixOptions po;
                po.order = k;
                po.min_abs_xi = min_xi;
                po.probe_min = probe_min;
                po.probe_max = probe_max;
                po.probe_count = probe_count;
                po.seed = common.seed;
                po.kind = kind;
                const auto res = parametrix(sg, order_m, po);
                double mean = 0.0;
                for (double v : res.residuals)
                    mean += v;
                mean /= static_cast<double>(std::max<std::size_t>(1, res.residuals.size()));
                csv += std::to_string(k) + "," + fmt(res.max_residual()) + "," + fmt(mean) + "\n";
                text += "  K = " + std::to_string(k) + ": max residual " + fmt(res.max_residual()) + ", mean " + fmt(mean)
                        + "\n";
            }
            art.add("parametrix.csv", csv);
            art.add("parametrix.txt", text);
        } else if (*c_thm) {
            const TheoremId id = parse_theorem_id(id_text);
            const TheoremParams tp{r, s, p, q, rho, alpha};
            const std::string symbol_text = sym.empty() ? default_symbol_text(id, rho) : sym;
            topt.seed = common.seed;
            const auto rep = theorem_check(id, tp, SymbolExpr::parse(symbol_text), resolutions, topt);
            text = render_text(rep);
            const std::string base = std::string("theorem_") + to_string(id);
            art.add(base + ".txt", text);
            art.add(base + ".csv", render_csv(rep));
            if (strict && rep.verdict != Verdict::stable)
                status = exit_verdict;
        } else if (*c_ineq) {
            iopt.seed = common.seed;
            if (ineq_name == "chord-bound") {
                std::vector<ChordBlock> blocks;
                if (block_m >= 0) {
                    if ((2LL << block_m) >= chord_n / 2)
                        throw domain_error("chord-bound: block m = " + std::to_string(block_m) + " needs 2^{m+1} < N/2");
                    blocks.push_back(chord_bound(block_m));
                } else {
                    blocks = chord_bound_all(chord_n);
                }
                text = render_text(blocks);
            } else if (ineq_name == "hardy-littlewood") {
                text = render_text(hardy_littlewood_check(p, ineq_res, iopt));
            } else if (ineq_name == "bernstein") {
                text = render_text(bernstein_check(p, s, ineq_res, iopt));
            } else {
                throw domain_error("unknown inequality '" + ineq_name + "'");
            }
            art.add("inequality_" + ineq_name + ".txt", text);
        } else if (*c_demo) {
            if (demo_name == "vector-field" || demo_name == "riesz") {
                // (X + c)^{-1} and the regularized Riesz symbol both satisfy the rho-condition with rho = 0.
                const std::string symbol_text = demo_name == "riesz"
                                                    ? std::string("riesz()")
                                                    : "resolvent(" + fmt(c_re) + ", " + fmt(c_im) + ")";
                const SymbolExpr e = SymbolExpr::parse(symbol_text);
                TheoremOptions o;
                o.seed = common.seed;
                const auto rep = theorem_check(TheoremId::main, {0.4, 0.95, 2.0, 2.0, 0.0, 2.0}, e, {64, 128, 256, 512}, o);
                const TorusGrid g(512);
                const auto mult = e.multiplier(g);
                const auto rho1 = class_constant(mult, ClassSpec::rho_condition(1.0));
                text = "demo: " + demo_name + "\nsymbol: " + symbol_text + "\n";
                text += "rho-condition constant at rho = 1 (N = 512): " + fmt(rho1.max_constant()) + "\n";
                text += "marcinkiewicz constant (N = 512): " + fmt(marcinkiewicz_constant(mult)) + "\n";
                text += render_text(rep);
                art.add("demo_" + demo_name + ".txt", text);
                art.add("demo_" + demo_name + ".csv", render_csv(rep));
            } else if (demo_name == "elliptic") {
                const int n = demo_n;
                const TorusGrid g(n);
                const std::string symbol_text = "(2 + cos(1)) * bracket_pow(2)";
                const FullSymbol sg = SymbolExpr::parse(symbol_text).full(g);
                const auto f = band_limited_probes(g, std::max(1, n / 16), n / 8, 1, common.seed).front();
                const auto sol = elliptic_solve(sg, 2.0, f);
                text = "demo: elliptic\nsymbol: " + symbol_text + ", m = 2, K = 2, N = " + std::to_string(n) + "\n";
                text += "data: random, " + std::to_string(std::max(1, n / 16)) + " <= |xi| <= " + std::to_string(n / 8) + "\n";
                text += "residual ||Op(sigma)u - f||_2 / ||f||_2: " + fmt(sol.residual) + "\n";
                text += "parametrix residual (max over probes): " + fmt(sol.parametrix.max_residual()) + "\n";
                text += "||f||_{B^" + fmt(sol.s) + "_{inf,inf," + fmt(sol.p) + "}} = " + fmt(sol.f_norm.value) + "\n";
                text += "||u||_{B^" + fmt(sol.r) + "_{inf,inf," + fmt(sol.p) + "}} = " + fmt(sol.u_norm.value) + "\n";
                text += "ratio: " + fmt(sol.ratio) + "\n";
                art.add("demo_elliptic.txt", text);
            } else {
                throw domain_error("unknown demo '" + demo_name + "'");
            }
        }
        art.add("config.ini", effective_config(app, *app.get_subcommands().front()));
        art.flush();
    } catch (const parse_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return exit_config;
    } catch (const domain_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return exit_config;
    } catch (const resolution_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return exit_config;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return exit_runtime;
    }
    std::cout << text;
    return status;
}
