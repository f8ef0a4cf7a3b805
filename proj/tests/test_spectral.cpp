#include <gtest/gtest.h>

#include "oracles.hpp"

using namespace torpdo;

namespace {

GridFunction random_function(int n, std::uint64_t seed)
{
    return {TorusGrid(n), oracle::random_vector(n, seed)};
}

} // namespace

TEST(TorusGrid, RejectsOddAndSmall)
{
    EXPECT_THROW(TorusGrid(7), domain_error);
    EXPECT_THROW(TorusGrid(6), domain_error);
    EXPECT_THROW(TorusGrid(9), domain_error);
    EXPECT_NO_THROW(TorusGrid(8));
    EXPECT_NO_THROW(TorusGrid(24));
}

TEST(TorusGrid, BandAndWrap)
{
    const TorusGrid g(16);
    EXPECT_EQ(g.min_frequency(), -8);
    EXPECT_EQ(g.max_frequency(), 7);
    EXPECT_FALSE(g.contains_frequency(8));
    EXPECT_EQ(g.wrap(-1), 15);
    EXPECT_EQ(g.wrap(33), 1);
}

class TransformAgainstBruteForce : public ::testing::TestWithParam<int> {};

TEST_P(TransformAgainstBruteForce, ForwardMatchesDirectSum)
{
    const int n = GetParam();
    const auto f = random_function(n, 11);
    const auto spec = forward_transform(f);
    const auto ref = oracle::dft(oracle::values(f));
    for (const auto& [xi, v] : ref)
        EXPECT_LT(std::abs(spec(xi) - v), 1e-12) << "xi = " << xi;
}

TEST_P(TransformAgainstBruteForce, InverseMatchesDirectSynthesis)
{
    const int n = GetParam();
    const TorusGrid g(n);
    const auto raw = oracle::random_vector(n, 5);
    std::map<int, oracle::cplx> c;
    for (int xi = -n / 2; xi < n / 2; ++xi)
        c[xi] = raw[static_cast<std::size_t>(xi + n / 2)];
    const auto f = inverse_transform(SpectrumFunction(g, raw));
    EXPECT_LT(oracle::max_abs_diff(oracle::values(f), oracle::synthesize(n, c)), 1e-11);
}

INSTANTIATE_TEST_SUITE_P(Sizes, TransformAgainstBruteForce, ::testing::Values(8, 16, 24, 64));

TEST(Transform, SingleModeHasUnitCoefficient)
{
    const TorusGrid g(32);
    for (int xi : {-16, -3, 0, 5, 15}) {
        const auto spec = forward_transform(GridFunction::mode(g, xi));
        for (int k = g.min_frequency(); k <= g.max_frequency(); ++k)
            EXPECT_NEAR(std::abs(spec(k)), k == xi ? 1.0 : 0.0, 1e-13);
    }
}

TEST(Transform, OutOfBandCoefficientIsZero)
{
    const auto spec = forward_transform(random_function(16, 2));
    EXPECT_EQ(spec(8), cplx{});
    EXPECT_EQ(spec(-9), cplx{});
}

TEST(Transform, RoundTripAndPlancherel)
{
    for (int n : {16, 64, 256}) {
        const auto f = random_function(n, static_cast<std::uint64_t>(n));
        const auto back = inverse_transform(forward_transform(f));
        EXPECT_LT(oracle::max_abs_diff(oracle::values(back), oracle::values(f)) / oracle::max_abs(oracle::values(f)), 1e-13);
        double lhs = 0.0, rhs = 0.0;
        for (auto v : f.values())
            lhs += std::norm(v);
        lhs /= n;
        const auto spec = forward_transform(f);
        for (auto c : spec.coefficients())
            rhs += std::norm(c);
        EXPECT_NEAR(lhs, rhs, 1e-12 * lhs);
    }
}

TEST(Dyadic, BlockMembership)
{
    EXPECT_TRUE(in_dyadic_block(0, 0));
    EXPECT_TRUE(in_dyadic_block(1, 0));
    EXPECT_TRUE(in_dyadic_block(-1, 0));
    EXPECT_FALSE(in_dyadic_block(2, 0));
    EXPECT_TRUE(in_dyadic_block(2, 1));
    EXPECT_TRUE(in_dyadic_block(3, 1));
    EXPECT_TRUE(in_dyadic_block(-7, 2));
    EXPECT_FALSE(in_dyadic_block(8, 2));
    for (int xi = -300; xi <= 300; ++xi) {
        int owners = 0;
        for (int m = 0; m < 12; ++m)
            owners += in_dyadic_block(xi, m) ? 1 : 0;
        EXPECT_EQ(owners, 1) << xi;
        EXPECT_TRUE(in_dyadic_block(xi, dyadic_index(xi)));
    }
}

TEST(Dyadic, UsableAndTopBlocks)
{
    EXPECT_EQ(max_usable_block(8), 1);
    EXPECT_EQ(top_block(8), 2);
    EXPECT_EQ(max_usable_block(64), 4);
    EXPECT_EQ(top_block(64), 5);
    EXPECT_EQ(max_usable_block(512), 7);
}

TEST(Dyadic, BlocksSumToFunction)
{
    for (int n : {16, 64, 256}) {
        const auto f = random_function(n, 3);
        auto sum = GridFunction::zeros(f.grid());
        for (const auto& b : dyadic_blocks(f, top_block(n)))
            sum += b;
        EXPECT_LT(oracle::max_abs_diff(oracle::values(sum), oracle::values(f)), 1e-12 * oracle::max_abs(oracle::values(f)));
    }
}

TEST(Dyadic, BlockMatchesBruteForceFilter)
{
    const auto f = random_function(32, 8);
    for (int m = 0; m <= top_block(32); ++m)
        EXPECT_LT(oracle::max_abs_diff(oracle::values(dyadic_block(f, m)), oracle::block(oracle::values(f), m)), 1e-12);
}

TEST(Dyadic, BlockBeyondBandThrows)
{
    const auto spec = forward_transform(random_function(16, 1));
    EXPECT_THROW(restrict_to_block(spec, top_block(16) + 1), resolution_error);
    EXPECT_THROW(restrict_to_block(spec, -1), resolution_error);
}

TEST(InnerProduct, NormalizedPairing)
{
    const TorusGrid g(16);
    EXPECT_NEAR(std::abs(inner_product(GridFunction::mode(g, 3), GridFunction::mode(g, 3)) - 1.0), 0.0, 1e-14);
    EXPECT_NEAR(std::abs(inner_product(GridFunction::mode(g, 3), GridFunction::mode(g, 4))), 0.0, 1e-14);
    EXPECT_THROW(inner_product(GridFunction::zeros(g), GridFunction::zeros(TorusGrid(32))), domain_error);
}
