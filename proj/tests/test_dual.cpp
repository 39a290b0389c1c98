#include <gtest/gtest.h>

#include "dqg/dual.hpp"
#include "dqg/rng.hpp"
#include "support.hpp"

using namespace dqg;
using namespace dqg::testing;

namespace {

using Fn = std::vector<cplx>;

Fn random_fn(int n, Rng& rng)
{
    Fn f(n);
    for (auto& v : f) v = rng.cnormal();
    return f;
}

Element as_element(const DqgSpec& s, const GroupTable& g, const Fn& f)
{
    Element a;
    for (int t = 0; t < g.order(); ++t) a.set(s.layout.find(g.labels[t]), Mat::Constant(1, 1, f[t]));
    return a;
}

// (a ∗ b)(s) = Σ_t a(s t⁻¹) b(t).
Fn group_convolution(const GroupTable& g, const Fn& a, const Fn& b)
{
    Fn out(g.order(), 0.0);
    for (int s = 0; s < g.order(); ++s)
        for (int t = 0; t < g.order(); ++t) out[s] += a[g.mul[s][g.inverse[t]]] * b[t];
    return out;
}

// Fourier transform f ↦ Σ_g f(g) λ_g into the group-dual spec.
Element fourier(const DqgSpec& s, const std::vector<std::vector<Mat>>& irreps, const Fn& f)
{
    Element x;
    for (BlockId b : s.layout.all()) {
        Mat m = Mat::Zero(s.dim(b), s.dim(b));
        for (std::size_t t = 0; t < f.size(); ++t) m += f[t] * irreps[b][t];
        x.set(b, m);
    }
    return x;
}

}  // namespace

TEST(Dual, ConvolutionMatchesGroupConvolution)
{
    for (const GroupTable& g : {cyclic_group(5), symmetric_group(3)}) {
        const DqgSpec s = build_commutative(g);
        const HaarData h = haar_from_spec(s);
        Rng rng(21);
        for (int k = 0; k < 3; ++k) {
            const Fn a = random_fn(g.order(), rng), b = random_fn(g.order(), rng);
            const Element expect = as_element(s, g, group_convolution(g, a, b));
            const Element ea = as_element(s, g, a), eb = as_element(s, g, b);
            EXPECT_LT(distance(convolve(s, h, ea, eb), expect), 1e-12);
            EXPECT_LT(distance(convolve_second_form(s, h, ea, eb), expect), 1e-12);
            Fn star(g.order());
            for (int t = 0; t < g.order(); ++t) star[t] = std::conj(a[g.inverse[t]]);
            EXPECT_LT(distance(sharp(s, h, ea), as_element(s, g, star)), 1e-13);
        }
    }
}

TEST(Dual, DeltaAtIdentityIsTheUnit)
{
    const GroupTable g = symmetric_group(3);
    const DqgSpec s = build_commutative(g);
    const HaarData h = haar_from_spec(s);
    Rng rng(22);
    const Element a = random_element(s.layout, s.layout.all(), rng);
    const Element e = s.layout.unit(s.layout.find(g.labels[g.identity]), 0, 0);
    EXPECT_LT(distance(convolve(s, h, e, a), a), 1e-13);
    EXPECT_LT(distance(convolve(s, h, a, e), a), 1e-13);
}

TEST(Dual, GroupDualConvolutionIsPointwiseProduct)
{
    // Σ f(g)λ_g ∗ Σ f′(g)λ_g = |Γ| Σ f(g)f′(g) λ_g and (Σ fλ)♯ = Σ conj(f) λ.
    const GroupTable g = symmetric_group(3);
    const DqgSpec s = build_group_dual(g);
    const HaarData h = haar_from_spec(s);
    const auto irreps = group_irreps(g);
    Rng rng(23);
    for (int k = 0; k < 3; ++k) {
        const Fn f = random_fn(g.order(), rng), fp = random_fn(g.order(), rng);
        Fn prod(g.order()), conj(g.order());
        for (int t = 0; t < g.order(); ++t) {
            prod[t] = static_cast<double>(g.order()) * f[t] * fp[t];
            conj[t] = std::conj(f[t]);
        }
        const Element x = fourier(s, irreps, f), y = fourier(s, irreps, fp);
        EXPECT_LT(distance(convolve(s, h, x, y), fourier(s, irreps, prod)), 1e-9);
        EXPECT_LT(distance(sharp(s, h, x), fourier(s, irreps, conj)), 1e-9);
    }
}

TEST(Dual, FunctionalEmbeddingIsMultiplicative)
{
    const DqgSpec s = build_group_dual(symmetric_group(3));
    const HaarData h = haar_from_spec(s);
    Rng rng(24);
    const Element a = random_element(s.layout, s.layout.all(), rng);
    const Element b = random_element(s.layout, s.layout.all(), rng);
    const Functional lhs = func_convolve(s, psi_embed(h, a), psi_embed(h, b));
    EXPECT_LT(functional_distance(lhs, psi_embed(h, convolve(s, h, a, b))), 1e-9);
    EXPECT_LT(functional_distance(func_star(s, psi_embed(h, a)), psi_embed(h, sharp(s, h, a))), 1e-9);
}

TEST(Dual, SuiteOnFiniteAndWindowSpecs)
{
    VerifyOptions o;
    for (const DqgSpec& s : {build_commutative(cyclic_group(5)), build_group_dual(symmetric_group(3))}) {
        const Report r = verify_dual(s, haar_from_spec(s), o);
        EXPECT_TRUE(r.passed()) << format_text(r);
    }
    o.tol = 1e-8;
    const DqgSpec w = build_suq2_window(1.5, 2);
    const Report r = verify_dual(w, haar_from_spec(w), o);
    EXPECT_TRUE(r.passed()) << format_text(r);
}

TEST(Dual, LeftRegularOfDeltaIdentityIsIdentity)
{
    const GroupTable g = cyclic_group(4);
    const DqgSpec s = build_commutative(g);
    const HaarData h = haar_from_spec(s);
    const auto basis = matrix_unit_basis(s.layout, s.layout.all());
    const LeftRegular L = left_regular(s, h, s.layout.unit(g.identity, 0, 0), basis);
    EXPECT_EQ(L.rank, 4);
    EXPECT_LT((L.matrix - identity(4)).cwiseAbs().maxCoeff(), 1e-13);
    EXPECT_NEAR(L.norm, 1.0, 1e-13);
}
