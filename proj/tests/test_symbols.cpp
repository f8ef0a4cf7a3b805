#include <gtest/gtest.h>

#include "oracles.hpp"

using namespace torpdo;

namespace {

double bracket(double xi) { return std::sqrt(1.0 + xi * xi); }

} // namespace

TEST(Symbols, SampleCoversExtendedBand)
{
    const TorusGrid g(16);
    const auto s = FullSymbol::sample(g, [](double, int xi) { return double(xi); });
    EXPECT_EQ(s.first_xi(), -8 - default_band_margin);
    EXPECT_EQ(s.last_xi(), 7 + default_band_margin);
    EXPECT_EQ(s.right_margin(), default_band_margin);
    EXPECT_EQ(s(3, 11), cplx(11.0));
    EXPECT_THROW(s(0, 12), band_error);
}

TEST(Symbols, ForwardDifferenceOfBracketPower)
{
    const TorusGrid g(32);
    const auto s = MultiplierSymbol::sample(g, [](int xi) { return std::pow(bracket(xi), -1.0); });
    const auto d2 = difference(s, 2);
    for (int xi = g.min_frequency(); xi <= g.max_frequency(); ++xi) {
        const double expected = std::pow(bracket(xi + 2), -1.0) - 2.0 * std::pow(bracket(xi + 1), -1.0)
                                + std::pow(bracket(xi), -1.0);
        EXPECT_NEAR(d2(xi).real(), expected, 1e-15);
    }
}

TEST(Symbols, DifferenceOfPolynomialVanishes)
{
    const TorusGrid g(32);
    const auto s = MultiplierSymbol::sample(g, [](int xi) { return double(xi) * xi * xi; });
    const auto d3 = difference(s, 3);
    const auto d4 = difference(s, 4);
    for (int xi = g.min_frequency(); xi <= g.max_frequency(); ++xi) {
        EXPECT_EQ(d3(xi), cplx(6.0));
        EXPECT_EQ(d4(xi), cplx(0.0));
    }
}

TEST(Symbols, DifferenceBeyondMarginThrows)
{
    const auto s = MultiplierSymbol::sample(TorusGrid(16), [](int) { return 1.0; }, 2);
    EXPECT_NO_THROW(difference(s, 2));
    EXPECT_THROW(difference(s, 3), band_error);
    EXPECT_THROW(difference(s, -1), domain_error);
}

TEST(Symbols, SpectralXDerivative)
{
    const TorusGrid g(32);
    const auto s = FullSymbol::sample(g, [](double x, int xi) { return (2.0 + std::cos(x)) * bracket(xi); });
    const auto d1 = x_derivative(s, 1);
    const auto d2 = x_derivative(s, 2);
    for (int j = 0; j < g.size(); ++j)
        for (int xi : {-16, 0, 5, 15}) {
            EXPECT_NEAR(std::abs(d1(j, xi) - (-std::sin(g.node(j)) * bracket(xi))), 0.0, 1e-13 * bracket(xi));
            EXPECT_NEAR(std::abs(d2(j, xi) - (-std::cos(g.node(j)) * bracket(xi))), 0.0, 1e-13 * bracket(xi));
        }
}

TEST(Symbols, FallingFactorialOnPureMode)
{
    // D^{(gamma)} e^{ikx} = k (k-1) ... (k-gamma+1) e^{ikx}.
    const TorusGrid g(32);
    const int k = 3;
    const auto s = FullSymbol::sample(g, [k](double x, int) { return std::polar(1.0, k * x); });
    for (int gamma = 0; gamma <= 4; ++gamma) {
        double ff = 1.0;
        for (int i = 0; i < gamma; ++i)
            ff *= k - i;
        const auto d = x_difference_derivative(s, gamma, XMultiplier::falling_factorial);
        const auto p = x_difference_derivative(s, gamma, XMultiplier::derivative);
        // Round-off in the other x-modes is amplified by up to (N/2)^gamma.
        const double tol = 1e-14 * std::pow(16.0, gamma) + 1e-14;
        for (int j = 0; j < g.size(); ++j) {
            EXPECT_NEAR(std::abs(d(j, 0) - ff * std::polar(1.0, k * g.node(j))), 0.0, tol) << gamma;
            EXPECT_NEAR(std::abs(p(j, 0) - std::pow(double(k), gamma) * std::polar(1.0, k * g.node(j))), 0.0, tol);
        }
    }
}

TEST(Symbols, UnresolvedXDependenceThrows)
{
    const TorusGrid g(32);
    const auto s = FullSymbol::sample(g, [](double x, int) { return std::cos(10.0 * x); });
    EXPECT_THROW(x_derivative(s, 1), resolution_error);
    const auto ok = FullSymbol::sample(g, [](double x, int) { return std::cos(7.0 * x); });
    EXPECT_NO_THROW(x_derivative(ok, 1));
}

TEST(ClassConstant, RhoConditionOfHomogeneousSymbol)
{
    const TorusGrid g(64);
    const auto s = MultiplierSymbol::sample(g, [](int xi) { return xi == 0 ? 0.0 : std::pow(std::abs(xi), -0.5); });
    const auto rep = class_constant(s, ClassSpec::rho_condition(0.5));
    EXPECT_NEAR(rep.max_constant(), 1.0, 1e-14);
}

TEST(ClassConstant, MixedConditionMatchesBruteForce)
{
    const TorusGrid g(32);
    auto fn = [](double x, int xi) { return (2.0 + std::cos(x)) * std::pow(bracket(xi), -1.0); };
    const auto s = FullSymbol::sample(g, fn);
    const auto rep = class_constant(s, ClassSpec::mixed_condition(1.0, 2, 1));
    // Brute force: Delta^a in xi by direct sums, d_x analytically.
    for (int a = 0; a <= 2; ++a)
        for (int b = 0; b <= 1; ++b) {
            double best = 0.0;
            for (int j = 0; j < g.size(); ++j) {
                const double x = g.node(j);
                const double xfac = b == 0 ? 2.0 + std::cos(x) : -std::sin(x);
                for (int xi = g.min_frequency(); xi <= g.max_frequency(); ++xi) {
                    if (xi == 0)
                        continue;
                    double d = 0.0;
                    for (int k = 0; k <= a; ++k) {
                        const double binom = a == 2 && k == 1 ? 2.0 : 1.0;
                        d += ((a - k) % 2 == 0 ? 1.0 : -1.0) * binom * std::pow(bracket(xi + k), -1.0);
                    }
                    best = std::max(best, std::abs(xfac * d) / std::pow(std::abs(xi), -1.0 - a));
                }
            }
            EXPECT_NEAR(rep.constant(a, b), best, 1e-10 * best) << a << "," << b;
        }
    const auto& w = rep.worst;
    EXPECT_NEAR(evaluate_witness(s, rep.spec, w), rep.max_constant(), 1e-14);
}

TEST(ClassConstant, HormanderOrderZeroOfConstant)
{
    const auto s = MultiplierSymbol::sample(TorusGrid(32), [](int) { return 2.0; });
    const auto rep = class_constant(s, ClassSpec::hormander(0.0, 1.0, 0.0, 2, 0));
    EXPECT_NEAR(rep.constant(0, 0), 2.0, 1e-15);
    EXPECT_NEAR(rep.constant(1, 0), 0.0, 1e-15);
    EXPECT_NEAR(rep.constant(2, 0), 0.0, 1e-15);
}

TEST(Marcinkiewicz, SignSymbolHasBoundedVariation)
{
    const TorusGrid g(256);
    const auto s = MultiplierSymbol::sample(g, [](int xi) { return xi > 0 ? 1.0 : (xi < 0 ? -1.0 : 0.0); });
    const auto mp = marcinkiewicz_profile(s);
    EXPECT_EQ(mp.sup_norm, 1.0);
    // Block j = 0 holds the step sigma(0) - sigma(-1) = 1; the step at xi = 0 belongs to no block.
    EXPECT_EQ(mp.block_variation.front(), 1.0);
    for (std::size_t j = 1; j < mp.block_variation.size(); ++j)
        EXPECT_EQ(mp.block_variation[j], 0.0);
    EXPECT_EQ(mp.constant, 2.0);
}

TEST(Marcinkiewicz, NeedsFourBlocks)
{
    const auto s = MultiplierSymbol::sample(TorusGrid(16), [](int) { return 1.0; }, 0);
    EXPECT_THROW(marcinkiewicz_constant(s), band_error);
}

TEST(Ellipticity, MarginOfModulatedBracket)
{
    const TorusGrid g(64);
    const auto s = FullSymbol::sample(g, [](double x, int xi) { return (2.0 + std::cos(x)) * bracket(xi) * bracket(xi); });
    EXPECT_NEAR(ellipticity_margin(s, 2.0, 1), 1.0, 1e-12);
    EXPECT_TRUE(is_elliptic(ellipticity_margin(s, 2.0, 1)));
    const auto h = FullSymbol::sample(g, [](double, int xi) { return double(std::abs(xi)); });
    EXPECT_FALSE(is_elliptic(ellipticity_margin(h, 1.0, 0)));
    EXPECT_TRUE(is_elliptic(ellipticity_margin(h, 1.0, 1)));
}

TEST(SymbolExpr, EvaluatesNamedForms)
{
    const auto e = SymbolExpr::parse("(2 + cos(1)) * bracket_pow(-1)");
    EXPECT_TRUE(e.depends_on_x());
    EXPECT_TRUE(e.depends_on_xi());
    EXPECT_NEAR(std::abs(e(0.3, 4) - (2.0 + std::cos(0.3)) / std::sqrt(17.0)), 0.0, 1e-15);
    EXPECT_EQ(SymbolExpr::parse("abs_pow(-1)")(0.0, 0), cplx{});
    EXPECT_NEAR(std::abs(SymbolExpr::parse("resolvent(2, 0.5)")(0.0, 3) - 1.0 / cplx(2.0, 3.5)), 0.0, 1e-15);
    EXPECT_NEAR(std::abs(SymbolExpr::parse("riesz()")(0.0, -3) - cplx(0.0, -3.0 / std::sqrt(10.0))), 0.0, 1e-15);
    EXPECT_EQ(SymbolExpr::parse("riesz_sign()")(0.0, -3), cplx(0.0, -1.0));
    EXPECT_EQ(SymbolExpr::parse("xi_pow(2) - 3 * i")(0.0, 5), cplx(25.0, -3.0));
    EXPECT_NEAR(std::abs(SymbolExpr::parse("-exp(2)")(0.5, 0) + std::polar(1.0, 1.0)), 0.0, 1e-15);
    EXPECT_NEAR(SymbolExpr::parse("pi")(0.0, 0).real(), std::numbers::pi, 0.0);
}

TEST(SymbolExpr, SamplesFunctionsAndSymbols)
{
    const TorusGrid g(32);
    const auto f = SymbolExpr::parse("lacunary(0.5, 3)").function(g);
    for (int j = 0; j < g.size(); ++j) {
        cplx acc{};
        for (int m = 0; m <= 3; ++m)
            acc += std::pow(2.0, -0.5 * m) * std::polar(1.0, (1 << m) * g.node(j));
        EXPECT_NEAR(std::abs(f[j] - acc), 0.0, 1e-13);
    }
    EXPECT_THROW(SymbolExpr::parse("cos(1)").multiplier(g), domain_error);
    EXPECT_THROW(SymbolExpr::parse("bracket_pow(1)").function(g), domain_error);
    const auto m = SymbolExpr::parse("bracket_pow(2)").multiplier(g, 3);
    EXPECT_EQ(m.right_margin(), 3);
}

TEST(SymbolExpr, RejectsMalformedInput)
{
    for (const char* bad : {"", "exp(", "bracket_pow(1", "foo(1)", "cos(0.5)", "1 +", "resolvent(0)",
                            "bracket_pow(cos(1))", "2 $ 3", "lacunary(1)"})
        EXPECT_THROW(SymbolExpr::parse(bad), parse_error) << bad;
}
