#include <gtest/gtest.h>

#include "dqg/assembly.hpp"
#include "dqg/rng.hpp"
#include "support.hpp"

using namespace dqg;
using namespace dqg::testing;

namespace {

Mat random_hermitian(int d, std::uint64_t seed)
{
    Rng rng(seed);
    const Mat g = rng.gaussian(d, d);
    return 0.5 * (g + g.adjoint());
}

// Positive h with φ(h²) = 1; such an h satisfies A3 for C = A.
Element random_cutoff(const DqgSpec& s, const HaarData& h, std::uint64_t seed)
{
    Rng rng(seed);
    Element p;
    for (BlockId b : s.layout.all()) {
        const Mat g = rng.gaussian(s.dim(b), s.dim(b));
        p.set(b, g * g.adjoint() + 0.1 * identity(s.dim(b)));
    }
    return (1.0 / std::sqrt(phi(h, p * p).real())) * p;
}

}  // namespace

TEST(Assembly, ClassicalAveragingOracle)
{
    for (const GroupTable& g : {cyclic_group(2), cyclic_group(3), cyclic_group(5), cyclic_group(6), symmetric_group(3)}) {
        const DqgSpec s = build_commutative(g);
        const HaarData h = haar_from_spec(s);
        const int n = g.order();
        const Mat F = random_hermitian(n, 41 + n);
        const Element cutoff = random_cutoff(s, h, 43 + n);
        const Cycle cy = regular_cycle(s, h, F, cutoff);
        Mat pih = Mat::Zero(n, n);
        for (int t = 0; t < n; ++t) pih(t, t) = cutoff.find(t)->coeff(0, 0);
        Mat expect = Mat::Zero(n, n);
        for (int t = 0; t < n; ++t) {
            const Mat R = right_translation(g, t);
            expect += R * pih * F * pih * R.adjoint();
        }
        EXPECT_LT((f_prime(s, h, cy, cutoff).F - expect).cwiseAbs().maxCoeff(), 1e-12) << n;
    }
}

TEST(Assembly, A3Examples)
{
    const GroupTable g = cyclic_group(4);
    const DqgSpec s = build_commutative(g);
    const HaarData h = haar_from_spec(s);
    const Coaction co = self_coaction(s, s.layout.unit(g.identity, 0, 0));
    EXPECT_EQ(a3_residual(s, h, co, co.h), 0.0);
    EXPECT_NEAR(a3_residual(s, h, co, 2.0 * co.h), 3.0, 1e-15);
    const DqgSpec d = build_group_dual(symmetric_group(3));
    const HaarData hd = haar_from_spec(d);
    const Coaction cd = self_coaction(d, Element{});
    EXPECT_LT(a3_residual(d, hd, cd, random_cutoff(d, hd, 5)), 1e-9);
    EXPECT_LT(a3_residual(d, hd, cd, counit_cutoff(d, hd)), 1e-12);
}

TEST(Assembly, TrivialCorepGivesSandwichedF)
{
    const DqgSpec s = build_commutative(cyclic_group(3));
    const HaarData h = haar_from_spec(s);
    Mat F = Mat::Zero(2, 2);
    F(0, 0) = 1.0;
    F(1, 1) = -1.0;
    const Cycle cy = trivial_cycle(s, h, 2, F);
    EXPECT_LT((f_prime(s, h, cy, cy.coaction.h).F - F).cwiseAbs().maxCoeff(), 1e-12);
    VerifyOptions o;
    o.tol = 1e-12;
    const AssemblyClassRep ac = assembly_class(s, h, cy, o);
    EXPECT_TRUE(ac.report.passed()) << format_text(ac.report);
    EXPECT_LE(worst(ac.report, "module self-adjoint"), 1e-12);
}

TEST(Assembly, SignCycleOnZ2)
{
    const DqgSpec s = build_commutative(cyclic_group(2));
    const HaarData h = haar_from_spec(s);
    Element u;
    u.set(0, Mat::Constant(1, 1, 1.0));
    u.set(1, Mat::Constant(1, 1, -1.0));
    const Cycle cy = character_cycle(s, h, u, Mat::Zero(1, 1));
    VerifyOptions o;
    o.tol = 1e-12;
    const AssemblyClassRep ac = assembly_class(s, h, cy, o);
    EXPECT_TRUE(ac.report.passed()) << format_text(ac.report);
    EXPECT_LT(ac.Fprime.norm(), 1e-15);
    EXPECT_FALSE(ac.witnesses.empty());
    ASSERT_EQ(ac.module_basis.size(), 1u);
    // ⟨1, 1⟩ = δ_e − δ_g.
    EXPECT_LT(distance(ac.gram[0][0], s.layout.unit(0, 0, 0) - s.layout.unit(1, 0, 0)), 1e-15);
}

TEST(Assembly, ZeroOperatorHasNoWitnesses)
{
    const DqgSpec s = build_commutative(cyclic_group(3));
    const HaarData h = haar_from_spec(s);
    const Cycle cy = regular_cycle(s, h, random_hermitian(3, 1), counit_cutoff(s, h));
    const CompactWitness cw = compact_witness(s, h, cy, Mat::Zero(3, 3), cy.coaction.h, VerifyOptions{});
    EXPECT_TRUE(cw.witnesses.empty());
    EXPECT_EQ(cw.identity_residual, 0.0);
}

TEST(Assembly, IdentityWitnessesOnZ2)
{
    // With T = 1 the witness identity reduces to ΣΣ* = Σ B ⊗ L_e.
    const DqgSpec s = build_commutative(cyclic_group(2));
    const HaarData h = haar_from_spec(s);
    const Cycle cy = regular_cycle(s, h, identity(2), counit_cutoff(s, h));
    const CompactWitness cw = compact_witness(s, h, cy, identity(2), cy.coaction.h, VerifyOptions{});
    EXPECT_LE(cw.identity_residual, 1e-12);
    EXPECT_LE(cw.conv_residual, 1e-12);
    EXPECT_LE(cw.equivariance, 1e-15);
}

TEST(Assembly, ConvActionShiftsClassically)
{
    const GroupTable g = symmetric_group(3);
    const DqgSpec s = build_commutative(g);
    const HaarData h = haar_from_spec(s);
    Rng rng(45);
    const Mat P = rng.gaussian(2, 2);
    for (int a = 0; a < g.order(); ++a)
        for (int t = 0; t < g.order(); ++t) {
            RepBlockMatrix X{2, {}};
            X.blocks.set(a, P);
            const RepBlockMatrix Y = conv_action(s, h, X, s.layout.unit(t, 0, 0));
            ASSERT_EQ(Y.blocks.size(), 1u);
            const BlockId st = g.mul[a][t];
            ASSERT_NE(Y.blocks.find(st), nullptr);
            EXPECT_LT((*Y.blocks.find(st) - P).cwiseAbs().maxCoeff(), 1e-14);
        }
}

TEST(Assembly, ConvActionAgreesWithConvolution)
{
    const DqgSpec s = build_group_dual(symmetric_group(3));
    const HaarData h = haar_from_spec(s);
    Rng rng(46);
    const Element x = random_element(s.layout, s.layout.all(), rng);
    const Element b = random_element(s.layout, s.layout.all(), rng);
    RepBlockMatrix X{1, x};
    EXPECT_LT(distance(conv_action(s, h, X, b).blocks, convolve(s, h, x, b)), 1e-12);
    RepBlockMatrix X2{1, 2.0 * x};
    EXPECT_LT(distance(conv_action(s, h, X2, b).blocks, 2.0 * conv_action(s, h, X, b).blocks), 1e-12);
}

TEST(Assembly, GroupDualPipeline)
{
    const DqgSpec s = build_group_dual(symmetric_group(3));
    const HaarData h = haar_from_spec(s);
    Mat F = random_hermitian(6, 47);
    F /= opnorm(F);
    const Cycle cy = regular_cycle(s, h, F, counit_cutoff(s, h));
    VerifyOptions o;
    const AssemblyClassRep ac = assembly_class(s, h, cy, o);
    EXPECT_TRUE(ac.report.passed()) << format_text(ac.report);
    const Report hr = homotopy_check(s, h, cy, cy.coaction.h, random_cutoff(s, h, 48), 7, o);
    EXPECT_TRUE(hr.passed()) << format_text(hr);
}

TEST(Assembly, HomotopyWithEqualCutoffs)
{
    const DqgSpec s = build_commutative(cyclic_group(2));
    const HaarData h = haar_from_spec(s);
    const Cycle cy = regular_cycle(s, h, random_hermitian(2, 49), counit_cutoff(s, h));
    VerifyOptions o;
    o.tol = 1e-12;
    const Report r = homotopy_check(s, h, cy, cy.coaction.h, cy.coaction.h, 7, o);
    EXPECT_TRUE(r.passed()) << format_text(r);
    const Check* d = r.find("|F'_h1 - F'_h2|");
    ASSERT_NE(d, nullptr);
    EXPECT_EQ(d->residual, 0.0);
}

TEST(Assembly, ViolatedA3IsReported)
{
    const DqgSpec s = build_commutative(cyclic_group(2));
    const HaarData h = haar_from_spec(s);
    Cycle cy = regular_cycle(s, h, identity(2), counit_cutoff(s, h));
    cy.coaction.h = 2.0 * cy.coaction.h;
    const Report r = coaction_validate(s, h, cy.coaction, VerifyOptions{});
    const Check* c = r.find("A3: (id x phi)(Delta_C(h^2)) = 1");
    ASSERT_NE(c, nullptr);
    EXPECT_EQ(c->verdict, Verdict::Fail);
    EXPECT_NEAR(c->residual, 3.0, 1e-15);
}
