#include <gtest/gtest.h>

#include "dqg/blockalg.hpp"
#include "dqg/rng.hpp"

using namespace dqg;

TEST(Linalg, PermuteLegsSwapsKroneckerFactors)
{
    Rng rng(11);
    const Mat a = rng.gaussian(2, 2), b = rng.gaussian(3, 3);
    const Mat swapped = permute_legs(kron(a, b), {2, 3}, {1, 0});
    EXPECT_LT((swapped - kron(b, a)).cwiseAbs().maxCoeff(), 1e-15);
}

TEST(Linalg, SliceLegMatchesPartialTrace)
{
    Rng rng(12);
    const Mat a = rng.gaussian(2, 2), b = rng.gaussian(3, 3), d = rng.gaussian(3, 3);
    // (id ⊗ f)(a ⊗ b) = f(b) a with f(y) = trace(d y).
    const Mat s = slice_leg(kron(a, b), {2, 3}, 1, d);
    EXPECT_LT((s - (d * b).trace() * a).cwiseAbs().maxCoeff(), 1e-14);
    const Mat s0 = slice_leg(kron(a, b), {2, 3}, 0, identity(2));
    EXPECT_LT((s0 - a.trace() * b).cwiseAbs().maxCoeff(), 1e-14);
}

TEST(Linalg, HomLegWithIdentityIsAmplification)
{
    Rng rng(13);
    const Mat x = rng.gaussian(2, 2), y = rng.gaussian(3, 3);
    const Mat out = hom_leg(kron(x, y), {2, 3}, 1, identity(6), 2, {3, 2});
    EXPECT_LT((out - kron(x, kron(y, identity(2)))).cwiseAbs().maxCoeff(), 1e-14);
}

TEST(Linalg, NullspaceFindsKernel)
{
    Mat a(2, 3);
    a << 1, 0, 1, 0, 1, 1;
    const Mat k = nullspace(a);
    ASSERT_EQ(k.cols(), 1);
    EXPECT_LT((a * k).norm(), 1e-14);
    EXPECT_NEAR(k.norm(), 1.0, 1e-14);
}

TEST(Linalg, PullbackDensityTransposesTheMap)
{
    Rng rng(14);
    const Mat G = rng.gaussian(2, 2), L = rng.gaussian(4, 9), x = rng.gaussian(3, 3);
    const Mat D = pullback_density(G, L, 3);
    const cplx lhs = (D * x).trace();
    const cplx rhs = (G * unvec_rm(L * vec_rm(x), 2, 2)).trace();
    EXPECT_LT(std::abs(lhs - rhs), 1e-13);
}

TEST(Linalg, HermitianPowerInverts)
{
    Mat p(2, 2);
    p << 2, 1, 1, 2;
    EXPECT_LT((hermitian_power(p, 0.5) * hermitian_power(p, 0.5) - p).cwiseAbs().maxCoeff(), 1e-14);
    EXPECT_LT((hermitian_power(p, -1.0) * p - identity(2)).cwiseAbs().maxCoeff(), 1e-14);
}

TEST(BlockMap, ArithmeticAndPruning)
{
    const BlockLayout L({{"a", 1}, {"b", 2}});
    Element x = L.central(1) + 2.0 * L.unit(0, 0, 0);
    EXPECT_EQ(x.size(), 2u);
    Element y = x - x;
    EXPECT_TRUE(y.prune().empty());
    const Element p = L.unit(1, 0, 1) * L.unit(1, 1, 0);
    EXPECT_LT(distance(p, L.unit(1, 0, 0)), 1e-15);
    EXPECT_EQ((L.unit(0, 0, 0) * L.unit(1, 0, 0)).size(), 0u);
    EXPECT_THROW(L.find("c"), StructuralError);
}

TEST(BlockMap, SliceTContractsHilbertLeg)
{
    RepBlockMatrix X{2, {}};
    Mat m = Mat::Zero(2, 2);
    m(0, 1) = 3.0;
    X.blocks.set(0, m);
    Vec e0 = Vec::Unit(2, 0), e1 = Vec::Unit(2, 1);
    EXPECT_NEAR(slice_T(e0, e1, X).find(0)->coeff(0, 0).real(), 3.0, 1e-15);
    EXPECT_TRUE(slice_T(e1, e0, X).empty());
}

TEST(Rng, CaseStreamsAreStable)
{
    Rng a = Rng::for_case(5, "x", {1, 2});
    Rng b = Rng::for_case(5, "x", {1, 2});
    Rng c = Rng::for_case(5, "x", {2, 1});
    const double va = a.normal();
    EXPECT_EQ(va, b.normal());
    EXPECT_NE(va, c.normal());
}
