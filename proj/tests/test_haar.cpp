#include <gtest/gtest.h>

#include "dqg/haar.hpp"
#include "support.hpp"

using namespace dqg;
using namespace dqg::testing;

TEST(Haar, CommutativeIsCountingMeasure)
{
    const DqgSpec s = build_commutative(cyclic_group(5));
    const HaarData h = haar_from_spec(s);
    for (BlockId b : s.layout.all()) {
        EXPECT_NEAR(std::abs(phi(h, s.layout.unit(b, 0, 0)) - 1.0), 0.0, 1e-15);
        EXPECT_NEAR(std::abs(psi(h, s.layout.unit(b, 0, 0)) - 1.0), 0.0, 1e-15);
    }
}

TEST(Haar, GroupDualPlancherel)
{
    // φ(λ_g) = Σ_π n_π χ_π(g) = |Γ| δ_{g,e}.
    const GroupTable g = symmetric_group(3);
    const DqgSpec s = build_group_dual(g);
    const HaarData h = haar_from_spec(s);
    const auto irreps = group_irreps(g);
    for (int t = 0; t < g.order(); ++t) {
        Element lambda;
        for (BlockId b : s.layout.all()) lambda.set(b, irreps[b][t]);
        const double expect = t == g.identity ? g.order() : 0.0;
        EXPECT_LT(std::abs(phi(h, lambda) - expect), 1e-10) << t;
        EXPECT_LT(std::abs(psi(h, lambda) - expect), 1e-10) << t;
    }
}

TEST(Haar, SuiteOnShippedStyleSpecs)
{
    VerifyOptions o;
    for (const DqgSpec& s : {build_commutative(cyclic_group(6)), build_group_dual(symmetric_group(3))}) {
        const Report r = verify_haar(s, haar_from_spec(s), o);
        EXPECT_TRUE(r.passed()) << format_text(r);
    }
    o.tol = 1e-8;
    const DqgSpec w = build_suq2_window(1.5, 2);
    const Report r = verify_haar(w, haar_from_spec(w), o);
    EXPECT_TRUE(r.passed()) << format_text(r);
}

TEST(Haar, SuqTwoModularShape)
{
    const double q = 2.0;
    const DqgSpec s = build_suq2_window(q, 1);
    const BlockId half = s.layout.find("1/2");
    // S²(e_12) = K⁻¹ e_12 K with K = diag(q, 1/q).
    const Element e12 = s.layout.unit(half, 0, 1);
    const Element s2 = antipode(s, antipode(s, e12));
    EXPECT_LT(distance(s2, (1.0 / (q * q)) * e12), 1e-14);
    const DerivedK dk = derive_K_from_S2(s);
    Mat expect = Mat::Zero(2, 2);
    expect(0, 0) = q;
    expect(1, 1) = 1.0 / q;
    EXPECT_TRUE(dk.found[half]);
    EXPECT_LT(matrix_angle(dk.K[half], expect), 1e-8);
    EXPECT_NEAR(dk.K[half].trace().real(), q + 1.0 / q, 1e-10);
    EXPECT_NEAR(dk.K[half].inverse().trace().real(), q + 1.0 / q, 1e-10);
}

TEST(Haar, NonKacThetaIsNotTrivial)
{
    const DqgSpec s = build_suq2_window(1.5, 1);
    const HaarData h = haar_from_spec(s);
    const BlockId half = s.layout.find("1/2");
    EXPECT_GT((h.theta[half] - identity(2)).norm(), 1e-3);
    const Element e12 = s.layout.unit(half, 0, 1);
    EXPECT_GT(distance(antipode(s, antipode(s, e12)), e12), 1e-3);
}
