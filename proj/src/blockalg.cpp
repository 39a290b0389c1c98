#include "dqg/blockalg.hpp"

#include <set>

namespace dqg {

Element adjoint(const Element& a) { return a.adjoint(); }

double elem_opnorm(const Element& a) { return a.opnorm(); }

BlockLayout::BlockLayout(std::vector<BlockIndex> blocks) : blocks_(std::move(blocks))
{
    std::set<std::string> seen;
    for (const auto& b : blocks_) {
        if (b.dim < 1) throw StructuralError("block '" + b.label + "' has dimension < 1");
        if (!seen.insert(b.label).second) throw StructuralError("duplicate block label '" + b.label + "'");
    }
}

BlockId BlockLayout::find(const std::string& label) const
{
    for (int i = 0; i < size(); ++i)
        if (blocks_[i].label == label) return i;
    throw StructuralError("unknown block label '" + label + "'");
}

Element BlockLayout::unit(BlockId b, int i, int j) const
{
    const int n = dim(b);
    if (i < 0 || j < 0 || i >= n || j >= n) throw StructuralError("matrix unit index out of range");
    Mat m = Mat::Zero(n, n);
    m(i, j) = 1.0;
    Element e;
    e.set(b, std::move(m));
    return e;
}

Element BlockLayout::central(BlockId b) const
{
    Element e;
    e.set(b, identity(dim(b)));
    return e;
}

Element BlockLayout::central(const std::vector<BlockId>& J) const
{
    Element e;
    for (BlockId b : J) e.set(b, identity(dim(b)));
    return e;
}

std::vector<BlockId> BlockLayout::all() const
{
    std::vector<BlockId> out(blocks_.size());
    for (int i = 0; i < size(); ++i) out[i] = i;
    return out;
}

void BlockLayout::check(const Element& a) const
{
    for (const auto& [b, m] : a) {
        if (b < 0 || b >= size()) throw StructuralError("element block out of range");
        if (m.rows() != dim(b) || m.cols() != dim(b))
            throw StructuralError("element block '" + label(b) + "' has wrong shape");
    }
}

void BlockLayout::check(const TensorElement& t) const
{
    for (const auto& [p, m] : t) {
        if (p.first < 0 || p.first >= size() || p.second < 0 || p.second >= size())
            throw StructuralError("tensor block out of range");
        const int n = dim(p.first) * dim(p.second);
        if (m.rows() != n || m.cols() != n)
            throw StructuralError("tensor block (" + label(p.first) + "," + label(p.second) + ") has wrong shape");
    }
}

TensorElement tensor(const Element& a, const Element& b)
{
    TensorElement out;
    for (const auto& [x, ma] : a)
        for (const auto& [y, mb] : b) out.set({x, y}, kron(ma, mb));
    return out;
}

cplx Functional::operator()(const Element& x) const
{
    cplx s = 0.0;
    for (const auto& [b, d] : densities) {
        const Mat* m = x.find(b);
        if (!m) continue;
        if (m->rows() != d.rows()) throw StructuralError("functional density shape mismatch");
        s += (d * *m).trace();
    }
    return s;
}

Element slice_T(const Vec& xi, const Vec& eta, const RepBlockMatrix& X)
{
    if (xi.size() != X.hdim || eta.size() != X.hdim)
        throw StructuralError("slice vector length does not match hdim");
    const Mat density = eta * xi.adjoint();
    Element out;
    for (const auto& [b, m] : X.blocks) {
        const int n = static_cast<int>(m.rows()) / X.hdim;
        out.set(b, slice_leg(m, {X.hdim, n}, 0, density));
    }
    return out.prune();
}

Element id_tensor_f(const TensorElement& X, const Functional& f, int leg)
{
    if (leg != 0 && leg != 1) throw StructuralError("tensor leg out of range");
    Element out;
    for (const auto& [p, m] : X) {
        const BlockId sliced = leg == 0 ? p.first : p.second;
        const BlockId kept = leg == 0 ? p.second : p.first;
        const Mat* d = f.densities.find(sliced);
        if (!d) continue;
        const int ns = static_cast<int>(d->rows());
        const int nk = static_cast<int>(m.rows()) / ns;
        const Dims dims = leg == 0 ? Dims{ns, nk} : Dims{nk, ns};
        out.add(kept, slice_leg(m, dims, leg, *d));
    }
    return out.prune();
}

Mat id_tensor_f(const RepBlockMatrix& X, const Functional& f)
{
    Mat out = Mat::Zero(X.hdim, X.hdim);
    for (const auto& [b, m] : X.blocks) {
        const Mat* d = f.densities.find(b);
        if (!d) continue;
        out += slice_leg(m, {X.hdim, static_cast<int>(d->rows())}, 1, *d);
    }
    return out;
}

}  // namespace dqg
