#include <gtest/gtest.h>

#include "dqg/rng.hpp"
#include "support.hpp"

using namespace dqg;
using namespace dqg::testing;

namespace {

VerifyOptions opts(double tol)
{
    VerifyOptions o;
    o.tol = tol;
    return o;
}

}  // namespace

TEST(GroupTable, RejectsNonAssociativeTables)
{
    EXPECT_THROW(make_group_table({{0, 1, 2}, {1, 0, 2}, {2, 2, 0}}), StructuralError);
    EXPECT_THROW(make_group_table({{0, 1}, {1, 1}}), StructuralError);
    EXPECT_NO_THROW(make_group_table({{0, 1}, {1, 0}}));
}

TEST(Core, CommutativeDeltaIsGroupMultiplication)
{
    const GroupTable g = symmetric_group(3);
    const DqgSpec s = build_commutative(g);
    Rng rng(3);
    Element f;
    std::vector<cplx> values(g.order());
    for (int t = 0; t < g.order(); ++t) {
        values[t] = rng.cnormal();
        f.set(s.layout.find(g.labels[t]), Mat::Constant(1, 1, values[t]));
    }
    for (int a = 0; a < g.order(); ++a)
        for (int b = 0; b < g.order(); ++b) {
            const Mat d = delta_block(s, f, s.layout.find(g.labels[a]), s.layout.find(g.labels[b]));
            EXPECT_LT(std::abs(d(0, 0) - values[g.mul[a][b]]), 1e-15);
        }
}

TEST(Core, BialgebraSuiteOnCommutativeSpecs)
{
    for (const auto& g : {cyclic_group(2), cyclic_group(6), symmetric_group(3)}) {
        const DqgSpec s = build_commutative(g);
        const Report r = verify_bialgebra(s, opts(1e-12));
        EXPECT_TRUE(r.passed()) << format_text(r);
        EXPECT_LE(worst_certified(r), 1e-12);
    }
}

TEST(Core, BialgebraSuiteOnGroupDuals)
{
    const DqgSpec z3 = build_group_dual(cyclic_group(3));
    EXPECT_EQ(z3.size(), 3);
    EXPECT_TRUE(verify_bialgebra(z3, opts(1e-12)).passed());
    const DqgSpec s3 = build_group_dual(symmetric_group(3));
    std::vector<int> dims;
    for (BlockId b : s3.layout.all()) dims.push_back(s3.dim(b));
    EXPECT_EQ(dims, (std::vector<int>{1, 1, 2}));
    const Report r = verify_bialgebra(s3, opts(1e-9));
    EXPECT_TRUE(r.passed()) << format_text(r);
}

TEST(Core, StdTensorStdContainsStdOnce)
{
    const DqgSpec s = build_group_dual(symmetric_group(3));
    int mult = 0;
    for (int idx : s.entries_into(2, 2))
        if (s.delta[idx].target == 2) mult += s.delta[idx].mult;
    EXPECT_EQ(mult, 1);
}

TEST(Core, CorruptedIsometryIsFlagged)
{
    const DqgSpec s = build_group_dual(symmetric_group(3));
    const DqgSpec bad = corrupt_entry(s, 2, 2, 2, 1e-3, 5);
    const Report r = verify_bialgebra(bad, opts(1e-9));
    EXPECT_FALSE(r.passed());
    EXPECT_GT(worst_certified(r), 1e-4);
}

TEST(Core, WindowCertification)
{
    const DqgSpec s = build_suq2_window(1.5, 2);
    const Window w = make_window(s, 0);
    std::vector<std::string> labels;
    for (BlockId b : w.J) labels.push_back(s.label(b));
    EXPECT_EQ(labels, (std::vector<std::string>{"0", "1/2", "1"}));
    EXPECT_THROW(s.require_pair(s.layout.find("2"), s.layout.find("1"), "probe"), WindowOverflow);
    EXPECT_NO_THROW(s.require_pair(s.layout.find("1"), s.layout.find("1"), "probe"));
    const Report r = verify_bialgebra(s, opts(1e-8));
    EXPECT_TRUE(r.passed()) << format_text(r);
}

TEST(Core, GaloisMapsInvertOnFiniteSpecs)
{
    const DqgSpec s = build_group_dual(symmetric_group(3));
    Rng rng(8);
    const TensorElement x = tensor(random_element(s.layout, s.layout.all(), rng), random_element(s.layout, s.layout.all(), rng));
    for (GaloisKind kind : {GaloisKind::T1, GaloisKind::T2}) {
        const TensorElement y = kind == GaloisKind::T1 ? galois_t1(s, x) : galois_t2(s, x);
        const GaloisSolution sol = galois_solve(s, kind, y);
        EXPECT_TRUE(sol.bijective);
        EXPECT_LT(distance(sol.x, x), 1e-10);
    }
}

TEST(Core, StructureRejectsBadSpecs)
{
    DqgSpec s = build_commutative(cyclic_group(2));
    s.delta[0].isometry = Mat::Ones(2, 1);
    EXPECT_THROW(s.finalize(), StructuralError);
    DqgSpec t = build_commutative(cyclic_group(3));
    t.antipode[1].image = 1;
    EXPECT_THROW(t.finalize(), StructuralError);
}
