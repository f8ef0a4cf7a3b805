#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "oracles.hpp"

using namespace torpdo;

namespace {

std::vector<NormSpec> all_specs()
{
    return {NormSpec::lebesgue(2.0),         NormSpec::lebesgue(infinity),   NormSpec::sequence(1.0),
            NormSpec::besov(0.4, 2.0, 2.0),  NormSpec::besov(-0.5, 1.0, infinity), NormSpec::triebel(0.4, 0.5, 2.0),
            NormSpec::holder(0.5),           NormSpec::holder_semi(0.95),    NormSpec::mixed_holder(0.5, 2.0)};
}

std::string slurp(const std::filesystem::path& p)
{
    std::ifstream in(p, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

} // namespace

TEST(NormSpec, DispatchesAndLabels)
{
    const auto f = GridFunction(TorusGrid(32), oracle::random_vector(32, 1));
    EXPECT_EQ(NormSpec::besov(0.4, 2.0, 2.0).evaluate(f).value, besov_norm(f, {0.4, 2.0, 2.0}).value);
    EXPECT_EQ(NormSpec::holder(0.5).evaluate(f).value, holder_norm(f, 0.5).value);
    EXPECT_EQ(NormSpec::sequence(2.0).evaluate(f).value, sequence_norm(forward_transform(f), 2.0).value);
    EXPECT_EQ(NormSpec::besov(0.4, 2.0, infinity).label(), "B^0.4_{2,inf}");
    EXPECT_EQ(NormSpec::holder(0.95).label(), "Lambda^0.95");
    EXPECT_EQ(NormSpec::mixed_holder(0.5, 2.0).label(), "B^0.5_{inf,inf,2}");
}

TEST(Probes, KindNamesRoundTrip)
{
    for (auto k : {ProbeKind::random_trig, ProbeKind::lacunary, ProbeKind::single_mode, ProbeKind::dc_free_random})
        EXPECT_EQ(parse_probe_kind(to_string(k)), k);
    EXPECT_THROW(parse_probe_kind("gaussian"), domain_error);
}

TEST(Probes, DeterministicAndNestedAcrossResolutions)
{
    ProbeFamily fam{ProbeKind::random_trig, 3, 42, 1.0, 15, 0.5};
    const auto a = make_probes(fam, TorusGrid(32));
    const auto b = make_probes(fam, TorusGrid(32));
    const auto c = make_probes(fam, TorusGrid(64));
    ASSERT_EQ(a.size(), 3u);
    for (std::size_t i = 0; i < a.size(); ++i) {
        EXPECT_EQ(oracle::values(a[i]), oracle::values(b[i]));
        const auto sa = forward_transform(a[i]);
        const auto sc = forward_transform(c[i]);
        for (int xi = -15; xi <= 15; ++xi)
            EXPECT_NEAR(std::abs(sa(xi) - sc(xi)), 0.0, 1e-13);
    }
}

TEST(Probes, LacunaryCoefficients)
{
    const TorusGrid g(64);
    const auto p = make_probes({ProbeKind::lacunary, 2, 0, 0.0, -1, 0.5}, g);
    const auto s0 = forward_transform(p[0]);
    const auto s1 = forward_transform(p[1]);
    for (int m = 0; m <= 4; ++m) {
        EXPECT_NEAR(std::abs(s0(1 << m) - std::exp2(-0.5 * m)), 0.0, 1e-14);
        EXPECT_NEAR(std::abs(s1(1 << m)), std::exp2(-0.5 * m), 1e-14);
    }
    EXPECT_LT(std::abs(s0(31)), 1e-15);
}

TEST(Probes, SingleModeAndDcFree)
{
    const TorusGrid g(32);
    const auto m = make_probes({ProbeKind::single_mode, 1, 0, 1.0, 9, 0.5}, g);
    EXPECT_NEAR(std::abs(forward_transform(m[0])(9) - 1.0), 0.0, 1e-14);
    const auto top = make_probes({ProbeKind::single_mode, 1, 0, 1.0, -1, 0.5}, g);
    EXPECT_NEAR(std::abs(forward_transform(top[0])(15) - 1.0), 0.0, 1e-14);
    const auto d = make_probes({ProbeKind::dc_free_random, 4, 3, 1.0, -1, 0.5}, g);
    for (const auto& f : d)
        EXPECT_LT(std::abs(forward_transform(f)(0)), 1e-15);
    EXPECT_THROW(make_probes({ProbeKind::random_trig, 1, 0, 1.0, 16, 0.5}, g), band_error);
}

TEST(Probes, NormalizedToSourceNorm)
{
    const TorusGrid g(64);
    const auto spec = NormSpec::holder(0.5);
    for (const auto& f : make_probes({ProbeKind::random_trig, 5, 1, 1.0, -1, 0.5}, g, spec))
        EXPECT_NEAR(spec.evaluate(f).value, 1.0, 1e-13);
}

TEST(OperatorNorm, IdentityIsOneForEveryNorm)
{
    const TorusGrid g(64);
    auto probes = make_probes({ProbeKind::random_trig, 10, 1, 1.0, -1, 0.5}, g);
    auto lac = make_probes({ProbeKind::lacunary, 5, 2, 0.0, -1, 0.5}, g);
    probes.insert(probes.end(), lac.begin(), lac.end());
    for (const auto& spec : all_specs())
        EXPECT_NEAR(operator_norm_estimate(LinearOperator::identity(g), spec, spec, probes), 1.0, 1e-12) << spec.label();
}

TEST(OperatorNorm, ZeroOperatorAndZeroProbes)
{
    const TorusGrid g(32);
    const auto probes = make_probes({ProbeKind::random_trig, 4, 1, 1.0, -1, 0.5}, g);
    for (const auto& spec : all_specs())
        EXPECT_EQ(operator_norm_estimate(LinearOperator::zero(g), spec, spec, probes), 0.0);
    const std::vector<GridFunction> zeros(3, GridFunction::zeros(g));
    EXPECT_THROW(operator_norm_estimate(LinearOperator::identity(g), NormSpec::lebesgue(2.0), NormSpec::lebesgue(2.0), zeros),
                 domain_error);
}

TEST(OperatorNorm, MonotoneUnderProbeAddition)
{
    const TorusGrid g(64);
    const auto op = LinearOperator::multiplier(SymbolExpr::parse("abs_pow(-0.5)").multiplier(g));
    const auto src = NormSpec::holder(0.95), dst = NormSpec::besov(0.4, 2.0, 2.0);
    const auto all = make_probes({ProbeKind::random_trig, 30, 9, 1.0, -1, 0.5}, g);
    double prev = 0.0;
    for (std::size_t k = 1; k <= all.size(); ++k) {
        const std::vector<GridFunction> head(all.begin(), all.begin() + static_cast<long>(k));
        const auto est = operator_norm_estimate_detailed(op, src, dst, head);
        EXPECT_GE(est.value, prev);
        EXPECT_LT(est.argmax, static_cast<int>(k));
        prev = est.value;
    }
}

TEST(Hypotheses, MainTheoremInequality)
{
    TheoremParams t;
    t.rho = 1.0;
    auto h = evaluate_hypotheses(TheoremId::main, t);
    EXPECT_TRUE(h.ok);
    t.rho = 0.0;
    t.r = 0.5;
    t.s = 0.5;
    h = evaluate_hypotheses(TheoremId::main, t);
    EXPECT_FALSE(h.ok);
    bool found = false;
    for (const auto& c : h.checks)
        if (c.text == "r + 1/2 - rho < s: 0.5 + 1/2 - 0 = 1 < 0.5") {
            found = true;
            EXPECT_FALSE(c.holds);
        }
    EXPECT_TRUE(found);
    t.q = infinity;
    t.r = 0.0;
    h = evaluate_hypotheses(TheoremId::main, t);
    EXPECT_TRUE(h.ok) << "equality is allowed for q = inf";
}

TEST(Hypotheses, ConjugateExponentAndStrictVariant)
{
    TheoremParams t;
    t.q = 2.0;
    t.p = 5.0;
    t.r = 0.4;
    t.s = 0.5;
    t.rho = 1.0;
    const auto h = evaluate_hypotheses(TheoremId::thm13, t);
    EXPECT_EQ(h.effective.p, 2.0);
    EXPECT_EQ(h.notes.size(), 1u);
    EXPECT_TRUE(h.ok);

    TheoremParams e;
    e.rho = 0.5;
    e.r = 0.75;
    e.s = 0.75;
    const auto m = evaluate_hypotheses(TheoremId::main22, e);
    EXPECT_TRUE(m.ok);
    int informational = 0;
    for (const auto& c : m.checks)
        if (c.informational) {
            ++informational;
            EXPECT_FALSE(c.holds);
        }
    EXPECT_EQ(informational, 1);
}

TEST(Hypotheses, EitherCaseSuffices)
{
    TheoremParams t;
    t.q = 2.0;
    t.r = 0.2;
    t.rho = 1.0;
    t.s = 0.4;  // case 1 needs s > 1/2
    t.alpha = 2.0;
    EXPECT_TRUE(evaluate_hypotheses(TheoremId::HTC, t).ok);
    t.alpha = 1.5;
    t.r = 0.9;
    EXPECT_FALSE(evaluate_hypotheses(TheoremId::HTC, t).ok);
}

TEST(Hypotheses, DerivedRho)
{
    EXPECT_NEAR(rhodelta_rho(4.0, 0.5), 0.25, 1e-15);
    EXPECT_EQ(rhodelta_rho(2.0, 0.0), 0.0);
    EXPECT_THROW(rhodelta_rho(2.0, 1.5), domain_error);
}

TEST(Theorems, IdsRoundTrip)
{
    for (auto id : all_theorems)
        EXPECT_EQ(parse_theorem_id(to_string(id)), id);
    EXPECT_THROW(parse_theorem_id("nope"), domain_error);
}

TEST(Theorems, MainIsStableForHomogeneousSymbol)
{
    TheoremOptions o;
    o.lacunary_count = 10;
    o.random_count = 10;
    const auto rep = theorem_check(TheoremId::main, {}, SymbolExpr::parse("abs_pow(-1)"), {128, 64}, o);
    ASSERT_EQ(rep.rows.size(), 2u);
    EXPECT_EQ(rep.rows[0].n, 64);
    EXPECT_EQ(rep.verdict, Verdict::stable);
    EXPECT_EQ(rep.target_label, "B^0.4_{2,2}");
    ASSERT_EQ(rep.class_constants.size(), 1u);
    EXPECT_NEAR(rep.class_constants[0].value, 1.0, 1e-14);
}

TEST(Theorems, FullSymbolRunsFrozenSweep)
{
    TheoremOptions o;
    o.lacunary_count = 5;
    o.random_count = 5;
    o.frozen_nodes = 4;
    TheoremParams t;
    t.p = 2.0;
    const auto rep = theorem_check(TheoremId::non, t, SymbolExpr::parse(default_symbol_text(TheoremId::non, 1.0)), {64}, o);
    EXPECT_GE(rep.rows[0].frozen_max_ratio, 0.0);
    EXPECT_EQ(rep.class_spec.beta_max, 1);
}

TEST(Theorems, MultiplierTheoremRejectsXDependence)
{
    EXPECT_THROW(theorem_check(TheoremId::main, {}, SymbolExpr::parse("cos(1) * abs_pow(-1)"), {64}), domain_error);
}

TEST(Theorems, HypothesisFailureStillReports)
{
    TheoremParams t;
    t.rho = 0.0;
    t.r = 0.5;
    t.s = 0.5;
    TheoremOptions o;
    o.lacunary_count = 4;
    o.random_count = 4;
    const auto rep = theorem_check(TheoremId::main, t, SymbolExpr::parse("1"), {64, 128}, o);
    EXPECT_EQ(rep.verdict, Verdict::hypothesis_fails);
    EXPECT_EQ(rep.rows.size(), 2u);
}

TEST(Inequalities, ChordBoundIsSqrtThree)
{
    for (const auto& b : chord_bound_all(1024))
        EXPECT_NEAR(b.min_chord, std::sqrt(3.0), 1e-12) << b.m;
    EXPECT_EQ(chord_bound_all(1024).size(), 8u);
}

TEST(Inequalities, HardyLittlewoodAtTwoIsPlancherel)
{
    const auto f = GridFunction(TorusGrid(64), oracle::random_vector(64, 3));
    EXPECT_NEAR(hardy_littlewood_ratio(f, 2.0), 1.0, 1e-12);
    EXPECT_THROW(hardy_littlewood_ratio(f, 1.5), domain_error);
    EXPECT_THROW(hardy_littlewood_check(infinity, {64}), domain_error);
}

TEST(Inequalities, BernsteinRanges)
{
    const auto f = GridFunction(TorusGrid(64), oracle::random_vector(64, 3));
    EXPECT_GT(bernstein_ratio(f, 1.0, 0.6), 0.0);
    EXPECT_THROW(bernstein_ratio(f, 1.0, 0.5), domain_error);
    EXPECT_THROW(bernstein_ratio(f, 0.5, 0.99), domain_error);
}

TEST(Report, CsvAndTextRendering)
{
    TheoremOptions o;
    o.lacunary_count = 3;
    o.random_count = 3;
    const auto rep = theorem_check(TheoremId::main, {}, SymbolExpr::parse("abs_pow(-1)"), {64, 128}, o);
    const std::string csv = render_csv(rep);
    EXPECT_EQ(csv.substr(0, csv.find('\n')), theorem_csv_header);
    EXPECT_EQ(std::count(csv.begin(), csv.end(), '\n'), 3);
    EXPECT_NE(csv.find("\nmain,64,0.4,0.95,2,2,1,true,"), std::string::npos);
    const std::string text = render_text(rep);
    EXPECT_NE(text.find("r + 1/2 - rho < s: 0.4 + 1/2 - 1 = -0.1 < 0.95"), std::string::npos);
    EXPECT_NE(text.find("verdict: stable"), std::string::npos);
    EXPECT_EQ(text, render_text(theorem_check(TheoremId::main, {}, SymbolExpr::parse("abs_pow(-1)"), {64, 128}, o)));
}

TEST(Report, AtomicWrite)
{
    const auto dir = std::filesystem::temp_directory_path() / "torpdo_report_test";
    std::filesystem::remove_all(dir);
    write_file_atomic(dir / "nested" / "a.txt", "hello\n");
    EXPECT_EQ(slurp(dir / "nested" / "a.txt"), "hello\n");
    EXPECT_FALSE(std::filesystem::exists(dir / "nested" / "a.txt.tmp"));
    EXPECT_THROW(write_file_atomic(dir / "nested" / "a.txt" / "b.txt", "x"), io_error);
    std::filesystem::remove_all(dir);
}
