#pragma once

// Empirical boundedness experiments: probe families, norm specifications,
// operator-norm lower bounds, theorem hypothesis catalogue with
// resolution-stability verdicts, and the classical inequalities used in the
// proofs (Bernstein-type, Hardy-Littlewood, chord bound).

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <iterator>
#include <limits>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "torpdo/detail/random.hpp"
#include "torpdo/error.hpp"
#include "torpdo/quantization.hpp"
#include "torpdo/spaces.hpp"
#include "torpdo/spectral.hpp"
#include "torpdo/symbol_expr.hpp"
#include "torpdo/symbols.hpp"

namespace torpdo {

namespace detail {

inline std::string num(double v)
{
    if (std::isinf(v))
        return v > 0 ? "inf" : "-inf";
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.6g", v);
    return buf;
}

} // namespace detail

// ---------------------------------------------------------------------------
// Norm specifications

struct NormSpec {
    enum class Kind { lebesgue, sequence, besov, triebel, holder, holder_seminorm, mixed_holder };

    Kind kind = Kind::lebesgue;
    double r = 0.0;  ///< smoothness for besov / triebel
    double p = 2.0;
    double q = 2.0;
    double s = 0.5;  ///< Hoelder exponent

    static NormSpec lebesgue(double p) { return {Kind::lebesgue, 0.0, p, 2.0, 0.5}; }
    /// l^p norm of the Fourier coefficients.
    static NormSpec sequence(double p) { return {Kind::sequence, 0.0, p, 2.0, 0.5}; }
    static NormSpec besov(double r, double p, double q) { return {Kind::besov, r, p, q, 0.5}; }
    static NormSpec triebel(double r, double p, double q) { return {Kind::triebel, r, p, q, 0.5}; }
    static NormSpec holder(double s) { return {Kind::holder, 0.0, 2.0, 2.0, s}; }
    static NormSpec holder_semi(double s) { return {Kind::holder_seminorm, 0.0, 2.0, 2.0, s}; }
    static NormSpec mixed_holder(double s, double p) { return {Kind::mixed_holder, 0.0, p, 2.0, s}; }

    NormValue evaluate(const GridFunction& f) const
    {
        switch (kind) {
        case Kind::lebesgue: return lebesgue_norm(f, p);
        case Kind::sequence: return sequence_norm(forward_transform(f), p);
        case Kind::besov: return besov_norm(f, {r, p, q});
        case Kind::triebel: return triebel_norm(f, {r, p, q});
        case Kind::holder: return holder_norm(f, s);
        case Kind::holder_seminorm: return holder_seminorm(f, s);
        case Kind::mixed_holder: return mixed_holder_norm(f, s, p);
        }
        throw domain_error("NormSpec: unknown kind");
    }

    std::string label() const
    {
        using detail::num;
        switch (kind) {
        case Kind::lebesgue: return "L^" + num(p);
        case Kind::sequence: return "l^" + num(p) + "(Z)";
        case Kind::besov: return "B^" + num(r) + "_{" + num(p) + "," + num(q) + "}";
        case Kind::triebel: return "F^" + num(r) + "_{" + num(p) + "," + num(q) + "}";
        case Kind::holder: return "Lambda^" + num(s);
        case Kind::holder_seminorm: return "|.|_Lambda^" + num(s);
        case Kind::mixed_holder: return "B^" + num(s) + "_{inf,inf," + num(p) + "}";
        }
        return "?";
    }
};

// ---------------------------------------------------------------------------
// Probe families

enum class ProbeKind { random_trig, lacunary, single_mode, dc_free_random };

inline const char* to_string(ProbeKind k)
{
    switch (k) {
    case ProbeKind::random_trig: return "random-trig";
    case ProbeKind::lacunary: return "lacunary";
    case ProbeKind::single_mode: return "single-mode";
    case ProbeKind::dc_free_random: return "dc-free-random";
    }
    return "?";
}

inline ProbeKind parse_probe_kind(const std::string& s)
{
    for (auto k : {ProbeKind::random_trig, ProbeKind::lacunary, ProbeKind::single_mode, ProbeKind::dc_free_random})
        if (s == to_string(k))
            return k;
    throw domain_error("unknown probe kind '" + s + "'");
}

struct ProbeFamily {
    ProbeKind kind = ProbeKind::random_trig;
    int count = 1;
    std::uint64_t seed = 0;
    double decay = 1.0;     ///< random coefficients scale like <xi>^{-decay}
    int max_mode = -1;      ///< highest |xi| used; -1 means N/2 - 1. The mode itself for single-mode.
    double lacunary_s = 0.5;  ///< lacunary coefficients 2^{-m s}
};

namespace detail {

/// 0, 1, -1, 2, -2, ...: coefficient draws are nested across resolutions.
inline std::vector<int> frequencies_by_modulus(int max_mode, bool with_dc)
{
    std::vector<int> out;
    if (with_dc)
        out.push_back(0);
    for (int k = 1; k <= max_mode; ++k) {
        out.push_back(k);
        out.push_back(-k);
    }
    return out;
}

} // namespace detail

/// Deterministic probes; normalized to norm 1 in `normalize` when given (zero probes are left as is).
inline std::vector<GridFunction> make_probes(const ProbeFamily& fam, const TorusGrid& g,
                                             const std::optional<NormSpec>& normalize = std::nullopt)
{
    if (fam.count < 0)
        throw domain_error("make_probes: count must be non-negative");
    const int top = fam.max_mode < 0 ? g.max_frequency() : fam.max_mode;
    if (fam.kind == ProbeKind::single_mode ? !g.contains_frequency(top) : top > g.max_frequency())
        throw band_error("make_probes: max mode " + std::to_string(top) + " must be below N/2 = "
                         + std::to_string(g.size() / 2));

    detail::NormalStream rng(fam.seed);
    std::vector<GridFunction> out;
    switch (fam.kind) {
    case ProbeKind::single_mode:
        out.push_back(GridFunction::mode(g, top));
        break;
    case ProbeKind::random_trig:
    case ProbeKind::dc_free_random: {
        const auto freqs = detail::frequencies_by_modulus(top, fam.kind == ProbeKind::random_trig);
        for (int i = 0; i < fam.count; ++i) {
            auto spec = SpectrumFunction::zeros(g);
            for (int xi : freqs)
                spec.at(xi) = rng.complex_normal() * std::pow(japanese_bracket(xi), -fam.decay);
            out.push_back(inverse_transform(spec));
        }
        break;
    }
    case ProbeKind::lacunary: {
        if (top < 1)
            throw band_error("make_probes: lacunary probes need max mode >= 1");
        const int blocks = static_cast<int>(std::bit_width(static_cast<unsigned>(top)));
        for (int i = 0; i < fam.count; ++i) {
            auto spec = SpectrumFunction::zeros(g);
            for (int m = 0; m < blocks; ++m) {
                // Probe 0 has all phases 1; later probes draw one phase per block.
                const cplx phase = i == 0 ? cplx(1.0) : rng.phase();
                spec.at(1 << m) = phase * std::exp2(-m * fam.lacunary_s);
            }
            out.push_back(inverse_transform(spec));
        }
        break;
    }
    }
    if (normalize)
        for (auto& f : out) {
            const double n = normalize->evaluate(f).value;
            if (n > 0.0)
                f *= cplx(1.0 / n);
        }
    return out;
}

// ---------------------------------------------------------------------------
// Operator norm lower bounds

struct NormEstimate {
    double value = 0.0;
    int argmax = -1;  ///< index of the extremal probe
};

/// max over probes of ||T f||_target / ||f||_source; probes with zero source norm are skipped.
inline NormEstimate operator_norm_estimate_detailed(const LinearOperator& t, const NormSpec& source,
                                                    const NormSpec& target, const std::vector<GridFunction>& probes)
{
    NormEstimate best;
    bool any = false;
    for (std::size_t i = 0; i < probes.size(); ++i) {
        const double sn = source.evaluate(probes[i]).value;
        if (!(sn > 0.0))
            continue;
        any = true;
        const double ratio = target.evaluate(t(probes[i])).value / sn;
        if (best.argmax < 0 || ratio > best.value)
            best = {ratio, static_cast<int>(i)};
    }
    if (!any)
        throw domain_error("operator_norm_estimate: every probe has zero " + source.label() + " norm");
    return best;
}

inline double operator_norm_estimate(const LinearOperator& t, const NormSpec& source, const NormSpec& target,
                                     const std::vector<GridFunction>& probes)
{
    return operator_norm_estimate_detailed(t, source, target, probes).value;
}

// ---------------------------------------------------------------------------
// Theorem catalogue

enum class TheoremId { main, non, main22, hardy, nonHL, trie, trie2, HTC, min, thm13 };

inline constexpr TheoremId all_theorems[] = {TheoremId::main,  TheoremId::non,   TheoremId::main22, TheoremId::hardy,
                                             TheoremId::nonHL, TheoremId::trie,  TheoremId::trie2,  TheoremId::HTC,
                                             TheoremId::min,   TheoremId::thm13};

inline const char* to_string(TheoremId id)
{
    switch (id) {
    case TheoremId::main: return "main";
    case TheoremId::non: return "non";
    case TheoremId::main22: return "main22";
    case TheoremId::hardy: return "hardy";
    case TheoremId::nonHL: return "nonHL";
    case TheoremId::trie: return "trie";
    case TheoremId::trie2: return "trie2";
    case TheoremId::HTC: return "HTC";
    case TheoremId::min: return "min";
    case TheoremId::thm13: return "thm13";
    }
    return "?";
}

inline TheoremId parse_theorem_id(const std::string& s)
{
    for (auto id : all_theorems)
        if (s == to_string(id))
            return id;
    throw domain_error("unknown theorem id '" + s + "'");
}

/// Whether the theorem concerns a full symbol sigma(x, xi) rather than a multiplier.
inline bool is_full_symbol_theorem(TheoremId id)
{
    return id == TheoremId::non || id == TheoremId::main22 || id == TheoremId::nonHL || id == TheoremId::HTC;
}

struct TheoremParams {
    double r = 0.4;
    double s = 0.95;
    double p = 2.0;
    double q = 2.0;
    double rho = 1.0;
    double alpha = 2.0;  ///< trie2 and the second case of HTC
};

/// rho = 2 (1 - rho_tilde) |1/p - 1/2|: the decay exponent paired with main22 configurations.
inline double rhodelta_rho(double p, double rho_tilde)
{
    if (!(p > 0.0) || rho_tilde < 0.0 || rho_tilde > 1.0)
        throw domain_error("rhodelta_rho: need p > 0 and 0 <= rho_tilde <= 1");
    return 2.0 * (1.0 - rho_tilde) * std::abs(1.0 / p - 0.5);
}

struct HypothesisCheck {
    std::string text;  ///< the inequality with numbers substituted
    bool holds = false;
    bool informational = false;  ///< recorded but not part of the verdict
};

struct Hypotheses {
    std::vector<HypothesisCheck> checks;
    bool ok = false;
    TheoremParams effective;  ///< parameters after derived substitutions (thm13: p from q)
    std::vector<std::string> notes;
};

namespace detail {

class HypothesisBuilder {
public:
    void cmp(const std::string& form, const std::string& subst, double lhs, const char* op, double rhs,
             bool informational = false)
    {
        bool holds = false;
        const std::string o = op;
        if (o == "<")
            holds = lhs < rhs;
        else if (o == "<=")
            holds = lhs <= rhs;
        else if (o == ">")
            holds = lhs > rhs;
        else if (o == ">=")
            holds = lhs >= rhs;
        std::string text = form + ": ";
        if (!subst.empty())
            text += subst + " = ";
        text += num(lhs) + " " + o + " " + num(rhs);
        out.push_back({text, holds, informational});
    }

    /// lo <op1> x <op2> hi, as one check.
    void range(const std::string& name, double lo, const char* op1, double x, const char* op2, double hi)
    {
        auto test = [](double a, const std::string& o, double b) { return o == "<" ? a < b : a <= b; };
        const bool holds = test(lo, op1, x) && test(x, op2, hi);
        out.push_back({num(lo) + " " + op1 + " " + name + " " + op2 + " " + num(hi) + ": " + name + " = " + num(x),
                       holds, false});
    }

    std::vector<HypothesisCheck> out;
};

inline int derivative_count(double e)
{
    return static_cast<int>(std::floor(1.0 / e)) + 1;
}

} // namespace detail

/// Evaluates the hypotheses of a theorem on a parameter tuple. Pure; reports recompute it.
inline Hypotheses evaluate_hypotheses(TheoremId id, const TheoremParams& in)
{
    using detail::num;
    Hypotheses h;
    h.effective = in;
    TheoremParams& t = h.effective;
    detail::HypothesisBuilder b;
    const bool qinf = std::isinf(t.q);
    const std::string lhs_half = num(t.r) + " + 1/2 - " + num(t.rho);
    const double v_half = t.r + 0.5 - t.rho;

    switch (id) {
    case TheoremId::main:
        b.range("rho", 0.0, "<=", t.rho, "<=", 1.0);
        b.cmp(qinf ? "r + 1/2 - rho <= s" : "r + 1/2 - rho < s", lhs_half, v_half, qinf ? "<=" : "<", t.s);
        b.cmp("s <= 1", "", t.s, "<=", 1.0);
        b.cmp("p > 0", "", t.p, ">", 0.0);
        break;
    case TheoremId::non:
        b.range("rho", 0.0, "<=", t.rho, "<=", 1.0);
        b.range("p", 1.0, "<=", t.p, "<", std::numeric_limits<double>::infinity());
        b.range("q", 0.0, "<", t.q, "<", std::numeric_limits<double>::infinity());
        b.cmp("r + 1/2 - rho < s", lhs_half, v_half, "<", t.s);
        b.cmp("s <= 1", "", t.s, "<=", 1.0);
        break;
    case TheoremId::main22:
        b.range("rho", 0.0, "<=", t.rho, "<=", 1.0);
        b.cmp("r + 1/2 - rho <= s", lhs_half, v_half, "<=", t.s);
        b.cmp("s <= 1", "", t.s, "<=", 1.0);
        b.cmp("r + 1/2 - rho < s (strict variant)", lhs_half, v_half, "<", t.s, true);
        h.notes.push_back("main22: the statement allows equality, the proof route through Theorem non needs the "
                          "strict inequality; both are recorded, the verdict uses the stated (non-strict) form");
        break;
    case TheoremId::hardy:
    case TheoremId::nonHL: {
        const std::string lhs = num(t.r) + " + 1 - 2/" + num(t.p);
        const double v = t.r + 1.0 - 2.0 / t.p;
        if (id == TheoremId::hardy)
            b.range("s", 0.0, "<", t.s, "<", 1.0);
        b.range("p", 2.0, "<=", t.p, "<", std::numeric_limits<double>::infinity());
        const bool weak = id == TheoremId::hardy && qinf;
        if (!weak)
            b.range("q", 0.0, "<", t.q, "<", std::numeric_limits<double>::infinity());
        b.cmp(weak ? "r + 1 - 2/p <= rho" : "r + 1 - 2/p < rho", lhs, v, weak ? "<=" : "<", t.rho);
        b.cmp("rho <= 1", "", t.rho, "<=", 1.0);
        break;
    }
    case TheoremId::trie:
        b.cmp(qinf ? "r <= rho" : "r < rho", "", t.r, qinf ? "<=" : "<", t.rho);
        b.cmp("rho <= 1", "", t.rho, "<=", 1.0);
        b.range("s", 0.5, "<", t.s, "<=", 1.0);
        b.cmp("p > 0", "", t.p, ">", 0.0);
        break;
    case TheoremId::trie2:
    case TheoremId::HTC: {
        const double s_alpha = 1.0 / t.alpha - 0.5;
        auto second_case = [&](detail::HypothesisBuilder& c) {
            c.range("alpha", 1.0, "<", t.alpha, "<=", 2.0);
            c.range("rho", 0.0, "<=", t.rho, "<=", 1.0);
            c.cmp(id == TheoremId::trie2 && qinf ? "r + 1 - 1/alpha <= rho" : "r + 1 - 1/alpha < rho",
                  num(t.r) + " + 1 - 1/" + num(t.alpha), t.r + 1.0 - 1.0 / t.alpha,
                  id == TheoremId::trie2 && qinf ? "<=" : "<", t.rho);
            c.range("s", s_alpha, "<", t.s, "<", 1.0);
        };
        if (id == TheoremId::trie2) {
            second_case(b);
            break;
        }
        detail::HypothesisBuilder a, c;
        a.range("q", 1.0, "<=", t.q, "<", std::numeric_limits<double>::infinity());
        a.cmp("r < rho", "", t.r, "<", t.rho);
        a.cmp("rho <= 1", "", t.rho, "<=", 1.0);
        a.range("s", 0.5, "<", t.s, "<=", 1.0);
        second_case(c);
        auto all = [](const std::vector<HypothesisCheck>& v) {
            return std::all_of(v.begin(), v.end(), [](const HypothesisCheck& x) { return x.holds; });
        };
        const bool case_a = all(a.out), case_b = all(c.out);
        for (auto& x : a.out) {
            x.text = "[case 1] " + x.text;
            x.informational = true;
        }
        for (auto& x : c.out) {
            x.text = "[case 2] " + x.text;
            x.informational = true;
        }
        b.out = a.out;
        b.out.insert(b.out.end(), c.out.begin(), c.out.end());
        b.out.push_back({std::string("case 1 or case 2 holds: ") + (case_a ? "case 1" : case_b ? "case 2" : "neither"),
                         case_a || case_b, false});
        break;
    }
    case TheoremId::min:
        b.range("q", 1.0, "<", t.q, "<=", std::numeric_limits<double>::infinity());
        b.cmp(qinf ? "r + 1/2 - rho <= s" : "r + 1/2 - rho < s", lhs_half, v_half, qinf ? "<=" : "<", t.s);
        b.cmp("s <= 1", "", t.s, "<=", 1.0);
        break;
    case TheoremId::thm13: {
        // p is tied to q through 1/p + 1/q = 1.
        const double p = t.q == 1.0 ? std::numeric_limits<double>::infinity() : t.q / (t.q - 1.0);
        if (p != in.p)
            h.notes.push_back("thm13: p set to the Hoelder conjugate of q, p = " + num(p) + " (given " + num(in.p)
                              + ")");
        t.p = p;
        const double s_p = 1.0 / p - 0.5;
        b.range("p", 2.0 / 3.0, "<", p, "<=", 2.0);
        b.range("r", 0.0, "<", t.r, "<", 1.0);
        b.range("s", s_p, "<", t.s, "<", 1.0);
        b.cmp("r + 1/q <= rho", num(t.r) + " + 1/" + num(t.q), t.r + 1.0 / t.q, "<=", t.rho);
        break;
    }
    }
    h.checks = std::move(b.out);
    h.ok = std::all_of(h.checks.begin(), h.checks.end(),
                       [](const HypothesisCheck& c) { return c.informational || c.holds; });
    return h;
}

/// Source and target norms of the experiment for a theorem.
inline std::pair<NormSpec, NormSpec> theorem_spaces(TheoremId id, const TheoremParams& t)
{
    switch (id) {
    case TheoremId::main:
    case TheoremId::non:
    case TheoremId::hardy:
    case TheoremId::nonHL: return {NormSpec::holder(t.s), NormSpec::besov(t.r, t.p, t.q)};
    case TheoremId::main22: return {NormSpec::mixed_holder(t.s, t.p), NormSpec::mixed_holder(t.r, t.p)};
    case TheoremId::trie:
    case TheoremId::trie2:
    case TheoremId::HTC:
    case TheoremId::min: return {NormSpec::holder(t.s), NormSpec::triebel(t.r, t.p, t.q)};
    case TheoremId::thm13: return {NormSpec::holder(t.s), NormSpec::besov(t.r, infinity, infinity)};
    }
    throw domain_error("theorem_spaces: unknown id");
}

/// The class condition each theorem imposes on its symbol.
inline ClassSpec theorem_class(TheoremId id, const TheoremParams& t)
{
    switch (id) {
    case TheoremId::non:
    case TheoremId::nonHL: return ClassSpec::mixed_condition(t.rho, 0, detail::derivative_count(t.p));
    case TheoremId::HTC: return ClassSpec::mixed_condition(t.rho, 0, detail::derivative_count(t.q));
    case TheoremId::main22: return ClassSpec::mixed_condition(t.rho, 2, detail::derivative_count(t.p));
    default: return ClassSpec::rho_condition(t.rho);
    }
}

/// Symbol used when a run does not name one.
inline std::string default_symbol_text(TheoremId id, double rho)
{
    const std::string e = detail::num(-rho);
    return is_full_symbol_theorem(id) ? "(2 + cos(1)) * bracket_pow(" + e + ")" : "abs_pow(" + e + ")";
}

struct TheoremOptions {
    int lacunary_count = 100;
    int random_count = 100;
    double random_decay = 1.0;
    std::uint64_t seed = 1;
    double growth_factor = 1.10;  ///< allowed ratio growth per resolution doubling
    int frozen_nodes = 16;        ///< frozen multipliers swept for full-symbol theorems
};

struct ResolutionRow {
    int n = 0;
    double max_ratio = 0.0;
    double frozen_max_ratio = -1.0;  ///< -1 when no frozen sweep was run
    int max_block = -1;
    bool subsampled = false;
    bool stability_ok = true;  ///< against the previous resolution
};

enum class Verdict { stable, unstable, hypothesis_fails };

inline const char* to_string(Verdict v)
{
    switch (v) {
    case Verdict::stable: return "stable";
    case Verdict::unstable: return "unstable";
    case Verdict::hypothesis_fails: return "hypothesis-fails";
    }
    return "?";
}

struct ClassConstantEntry {
    int alpha = 0;
    int beta = 0;
    double value = 0.0;
};

struct TheoremReport {
    TheoremId id = TheoremId::main;
    TheoremParams params;  ///< effective parameters
    std::string symbol;
    std::string source_label;
    std::string target_label;
    Hypotheses hypotheses;
    ClassSpec class_spec;
    /// class constants at the finest resolution
    std::vector<ClassConstantEntry> class_constants;
    std::vector<ResolutionRow> rows;
    TheoremOptions options;
    Verdict verdict = Verdict::stable;
};

namespace detail {

inline bool growth_ok(double prev, double cur, int n_prev, int n_cur, double factor)
{
    const double doublings = std::log2(static_cast<double>(n_cur) / n_prev);
    const double allowed = std::pow(factor, std::max(doublings, 0.0));
    return cur <= allowed * prev * (1.0 + 1e-12) || cur == 0.0;
}

} // namespace detail

/// Probes at resolution N: lacunary with the source smoothness, plus decaying random
/// trigonometric polynomials, normalized in the source norm.
inline std::vector<GridFunction> theorem_probes(const TorusGrid& g, const TheoremParams& t,
                                                const TheoremOptions& o, const NormSpec& source)
{
    ProbeFamily lac{ProbeKind::lacunary, o.lacunary_count, o.seed, 0.0, -1, t.s};
    ProbeFamily rnd{ProbeKind::random_trig, o.random_count, o.seed + 1, o.random_decay, -1, 0.0};
    auto probes = make_probes(lac, g, source);
    auto more = make_probes(rnd, g, source);
    probes.insert(probes.end(), std::make_move_iterator(more.begin()), std::make_move_iterator(more.end()));
    return probes;
}

/// Runs the experiment for a theorem at each resolution. A violated hypothesis still
/// produces the full report, with verdict hypothesis-fails.
inline TheoremReport theorem_check(TheoremId id, const TheoremParams& params, const SymbolExpr& symbol,
                                   const std::vector<int>& resolutions, const TheoremOptions& opts = {})
{
    if (!(opts.growth_factor >= 1.0))
        throw domain_error("theorem_check: growth factor must be >= 1");
    TheoremReport rep;
    rep.id = id;
    rep.symbol = symbol.text();
    rep.options = opts;
    rep.hypotheses = evaluate_hypotheses(id, params);
    rep.params = rep.hypotheses.effective;
    const bool full = is_full_symbol_theorem(id);
    if (!full && symbol.depends_on_x())
        throw domain_error(std::string("theorem ") + to_string(id) + " concerns Fourier multipliers, but symbol '"
                           + symbol.text() + "' depends on x");
    const auto [source, target] = theorem_spaces(id, rep.params);
    rep.source_label = source.label();
    rep.target_label = target.label();
    rep.class_spec = theorem_class(id, rep.params);

    std::vector<int> ns = resolutions;
    std::sort(ns.begin(), ns.end());
    ns.erase(std::unique(ns.begin(), ns.end()), ns.end());
    for (int n : ns) {
        const TorusGrid g(n);
        const int margin = std::max(default_band_margin, rep.class_spec.alpha_max);
        const FullSymbol sigma = symbol.full(g, margin);
        if (n == ns.back()) {
            const auto cr = class_constant(sigma, rep.class_spec);
            rep.class_constants.clear();
            for (int a = 0; a <= rep.class_spec.alpha_max; ++a)
                for (int b = 0; b <= rep.class_spec.beta_max; ++b)
                    rep.class_constants.push_back({a, b, cr.constant(a, b)});
        }
        const auto probes = theorem_probes(g, rep.params, opts, source);
        const LinearOperator op = full ? LinearOperator::full_symbol(sigma)
                                       : LinearOperator::multiplier(freeze_at(sigma, 0));
        ResolutionRow row;
        row.n = n;
        row.max_ratio = operator_norm_estimate(op, source, target, probes);
        row.max_block = max_usable_block(n);
        row.subsampled = n > 1024 && (source.kind == NormSpec::Kind::holder
                                      || source.kind == NormSpec::Kind::mixed_holder);
        if (full && opts.frozen_nodes > 0) {
            const int count = std::min(opts.frozen_nodes, n);
            double worst = 0.0;
            for (int k = 0; k < count; ++k) {
                const int node = static_cast<int>(static_cast<long long>(k) * n / count);
                worst = std::max(worst, operator_norm_estimate(LinearOperator::multiplier(freeze_at(sigma, node)),
                                                               source, target, probes));
            }
            row.frozen_max_ratio = worst;
        }
        if (!rep.rows.empty()) {
            const auto& prev = rep.rows.back();
            row.stability_ok = detail::growth_ok(prev.max_ratio, row.max_ratio, prev.n, n, opts.growth_factor);
            if (row.frozen_max_ratio >= 0.0)
                row.stability_ok = row.stability_ok
                                   && detail::growth_ok(prev.frozen_max_ratio, row.frozen_max_ratio, prev.n, n,
                                                        opts.growth_factor);
        }
        rep.rows.push_back(row);
    }
    const bool stable = std::all_of(rep.rows.begin(), rep.rows.end(), [](const ResolutionRow& r) { return r.stability_ok; });
    rep.verdict = !rep.hypotheses.ok ? Verdict::hypothesis_fails : stable ? Verdict::stable : Verdict::unstable;
    return rep;
}

// ---------------------------------------------------------------------------
// Classical inequalities

struct ChordBlock {
    int m = 0;
    double h = 0.0;
    double min_chord = 0.0;
    int argmin = 0;  ///< smallest |xi| attaining the minimum
};

/// min over 2^m <= |xi| <= 2^{m+1} of |e^{-i xi h} - 1| with h = 2 pi / (3 2^m).
inline ChordBlock chord_bound(int m)
{
    if (m < 0 || m > 28)
        throw domain_error("chord_bound: m must lie in 0..28");
    const double h = two_pi / (3.0 * std::ldexp(1.0, m));
    ChordBlock out{m, h, std::numeric_limits<double>::infinity(), 0};
    const int lo = 1 << m, hi = 2 << m;
    for (int a = lo; a <= hi; ++a)
        for (int xi : {a, -a}) {
            const double c = std::abs(std::polar(1.0, -xi * h) - 1.0);
            if (c < out.min_chord) {
                out.min_chord = c;
                out.argmin = xi;
            }
        }
    return out;
}

/// Every block with 2^{m+1} < N/2.
inline std::vector<ChordBlock> chord_bound_all(int n_points)
{
    const TorusGrid g(n_points);
    std::vector<ChordBlock> out;
    for (int m = 0; (2LL << m) < g.size() / 2; ++m)
        out.push_back(chord_bound(m));
    return out;
}

struct InequalityRow {
    int n = 0;
    double constant = 0.0;  ///< max over probes of LHS / RHS core
    bool stability_ok = true;
};

struct InequalityReport {
    std::string name;
    std::string statement;
    std::vector<InequalityRow> rows;
    bool stable = true;
};

/// ||f||_p^p / sum_xi (1 + |xi|)^{p-2} |fhat(xi)|^p, 2 <= p < inf.
inline double hardy_littlewood_ratio(const GridFunction& f, double p)
{
    if (!(p >= 2.0 && p < infinity))
        throw domain_error("hardy-littlewood: p must lie in [2, inf), got " + detail::num(p));
    const auto fh = forward_transform(f);
    const TorusGrid& g = f.grid();
    double rhs = 0.0;
    for (int xi = g.min_frequency(); xi <= g.max_frequency(); ++xi)
        rhs += std::pow(1.0 + std::abs(xi), p - 2.0) * std::pow(std::abs(fh(xi)), p);
    if (rhs == 0.0)
        return 0.0;
    return std::pow(lebesgue_norm(f, p).value, p) / rhs;
}

/// ||fhat||_{l^p} / ||f||_{Lambda^s}, 2/3 < p <= 2, 1/p - 1/2 < s < 1.
inline double bernstein_ratio(const GridFunction& f, double p, double s)
{
    if (!(p > 2.0 / 3.0 && p <= 2.0))
        throw domain_error("bernstein: p must lie in (2/3, 2], got " + detail::num(p));
    if (!(s > 1.0 / p - 0.5 && s < 1.0))
        throw domain_error("bernstein: s must lie in (1/p - 1/2, 1), got " + detail::num(s));
    const double den = holder_norm(f, s).value;
    return den == 0.0 ? 0.0 : sequence_norm(forward_transform(f), p).value / den;
}

struct InequalityOptions {
    int lacunary_count = 100;
    int random_count = 100;
    double random_decay = 1.0;
    double lacunary_s = 0.5;
    std::uint64_t seed = 1;
    double growth_factor = 1.10;
};

namespace detail {

template <class Ratio>
InequalityReport run_inequality(std::string name, std::string statement, const std::vector<int>& resolutions,
                                const InequalityOptions& o, Ratio ratio)
{
    InequalityReport rep{std::move(name), std::move(statement), {}, true};
    std::vector<int> ns = resolutions;
    std::sort(ns.begin(), ns.end());
    ns.erase(std::unique(ns.begin(), ns.end()), ns.end());
    for (int n : ns) {
        const TorusGrid g(n);
        auto probes = make_probes({ProbeKind::lacunary, o.lacunary_count, o.seed, 0.0, -1, o.lacunary_s}, g);
        auto more = make_probes({ProbeKind::random_trig, o.random_count, o.seed + 1, o.random_decay, -1, 0.0}, g);
        probes.insert(probes.end(), more.begin(), more.end());
        InequalityRow row{n, 0.0, true};
        for (const auto& f : probes)
            row.constant = std::max(row.constant, ratio(f));
        if (!rep.rows.empty())
            row.stability_ok = growth_ok(rep.rows.back().constant, row.constant, rep.rows.back().n, n, o.growth_factor);
        rep.stable = rep.stable && row.stability_ok;
        rep.rows.push_back(row);
    }
    return rep;
}

} // namespace detail

inline InequalityReport hardy_littlewood_check(double p, const std::vector<int>& resolutions,
                                               const InequalityOptions& o = {})
{
    hardy_littlewood_ratio(GridFunction::zeros(TorusGrid(8)), p);
    return detail::run_inequality("hardy-littlewood",
                                  "||f||_p^p <= C_p sum (1 + |xi|)^{p-2} |fhat(xi)|^p, p = " + detail::num(p),
                                  resolutions, o, [p](const GridFunction& f) { return hardy_littlewood_ratio(f, p); });
}

inline InequalityReport bernstein_check(double p, double s, const std::vector<int>& resolutions,
                                        const InequalityOptions& o = {})
{
    bernstein_ratio(GridFunction::zeros(TorusGrid(8)), p, s);
    return detail::run_inequality("bernstein",
                                  "||fhat||_{l^p} <= C ||f||_{Lambda^s}, p = " + detail::num(p) + ", s = "
                                      + detail::num(s) + ", s_p = " + detail::num(1.0 / p - 0.5),
                                  resolutions, o, [p, s](const GridFunction& f) { return bernstein_ratio(f, p, s); });
}

} // namespace torpdo
