#pragma once

#include <array>
#include <map>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "dqg/linalg.hpp"

namespace dqg {

// Block labels are resolved to positions in the owning layout.
using BlockId = int;
using BlockPair = std::pair<BlockId, BlockId>;
using BlockTriple = std::array<BlockId, 3>;

inline constexpr double kPruneTol = 1e-14;

class StructuralError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Finitely supported family of square blocks; absent keys are zero.
template <class Key, class Scalar = cplx>
class BlockMap {
public:
    using Matrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
    using Storage = std::map<Key, Matrix>;

    BlockMap() = default;

    void set(const Key& k, Matrix m) { blocks_[k] = std::move(m); }

    void add(const Key& k, const Matrix& m)
    {
        auto it = blocks_.find(k);
        if (it == blocks_.end())
            blocks_.emplace(k, m);
        else {
            if (it->second.rows() != m.rows() || it->second.cols() != m.cols())
                throw StructuralError("block shape mismatch in sum");
            it->second += m;
        }
    }

    const Matrix* find(const Key& k) const
    {
        auto it = blocks_.find(k);
        return it == blocks_.end() ? nullptr : &it->second;
    }

    bool contains(const Key& k) const { return blocks_.count(k) != 0; }
    bool empty() const { return blocks_.empty(); }
    std::size_t size() const { return blocks_.size(); }

    auto begin() const { return blocks_.begin(); }
    auto end() const { return blocks_.end(); }
    const Storage& blocks() const { return blocks_; }

    BlockMap& prune(double tol = kPruneTol)
    {
        for (auto it = blocks_.begin(); it != blocks_.end();)
            if (it->second.norm() < tol)
                it = blocks_.erase(it);
            else
                ++it;
        return *this;
    }

    BlockMap& operator+=(const BlockMap& o)
    {
        for (const auto& [k, m] : o.blocks_) add(k, m);
        return *this;
    }

    BlockMap& operator-=(const BlockMap& o)
    {
        for (const auto& [k, m] : o.blocks_) add(k, -m);
        return *this;
    }

    BlockMap& operator*=(Scalar s)
    {
        for (auto& [k, m] : blocks_) m *= s;
        return *this;
    }

    friend BlockMap operator+(BlockMap a, const BlockMap& b) { return a += b; }
    friend BlockMap operator-(BlockMap a, const BlockMap& b) { return a -= b; }
    friend BlockMap operator*(Scalar s, BlockMap a) { return a *= s; }
    friend BlockMap operator*(BlockMap a, Scalar s) { return a *= s; }

    // Blockwise product; support is the intersection of supports.
    friend BlockMap operator*(const BlockMap& a, const BlockMap& b)
    {
        BlockMap out;
        for (const auto& [k, m] : a.blocks_) {
            const Matrix* other = b.find(k);
            if (!other) continue;
            if (m.cols() != other->rows()) throw StructuralError("block dimension mismatch in product");
            out.blocks_.emplace(k, m * *other);
        }
        return out;
    }

    BlockMap adjoint() const
    {
        BlockMap out;
        for (const auto& [k, m] : blocks_) out.blocks_.emplace(k, m.adjoint());
        return out;
    }

    double opnorm() const
    {
        double r = 0.0;
        for (const auto& [k, m] : blocks_) r = std::max(r, dqg::opnorm(m));
        return r;
    }

    double max_abs() const
    {
        double r = 0.0;
        for (const auto& [k, m] : blocks_)
            if (m.size()) r = std::max(r, m.cwiseAbs().maxCoeff());
        return r;
    }

private:
    Storage blocks_;
};

template <class Key, class Scalar>
double distance(const BlockMap<Key, Scalar>& a, const BlockMap<Key, Scalar>& b)
{
    return (a - b).max_abs();
}

using Element = BlockMap<BlockId>;
using TensorElement = BlockMap<BlockPair>;
using Tensor3 = BlockMap<BlockTriple>;

Element adjoint(const Element& a);
double elem_opnorm(const Element& a);

// Block sizes and labels shared by every algebra of the form ⊕ M_n.
struct BlockIndex {
    std::string label;
    int dim = 1;
};

class BlockLayout {
public:
    BlockLayout() = default;
    explicit BlockLayout(std::vector<BlockIndex> blocks);

    int size() const { return static_cast<int>(blocks_.size()); }
    int dim(BlockId b) const { return blocks_.at(b).dim; }
    const std::string& label(BlockId b) const { return blocks_.at(b).label; }
    const std::vector<BlockIndex>& blocks() const { return blocks_; }
    BlockId find(const std::string& label) const;  // throws StructuralError

    Element unit(BlockId b, int i, int j) const;
    Element central(BlockId b) const;
    Element central(const std::vector<BlockId>& J) const;
    Element one() const { return central(all()); }
    std::vector<BlockId> all() const;

    // Throws if any stored block has the wrong shape or an unknown key.
    void check(const Element& a) const;
    void check(const TensorElement& t) const;

private:
    std::vector<BlockIndex> blocks_;
};

// a ⊗ b, block (α, β) = kron(a_α, b_β).
TensorElement tensor(const Element& a, const Element& b);

// f(x) = Σ trace(F_α x_α).
struct Functional {
    Element densities;

    cplx operator()(const Element& x) const;
};

// Elements of B(H) ⊗ A, legs ordered (H, block).
struct RepBlockMatrix {
    int hdim = 0;
    Element blocks;
};

// T_ξη(X) = contraction of the H leg against ⟨ξ| and |η⟩.
Element slice_T(const Vec& xi, const Vec& eta, const RepBlockMatrix& X);

// Contracts leg 0 or 1 of a tensor against f.
Element id_tensor_f(const TensorElement& X, const Functional& f, int leg);
// Contracts the block leg of X, leaving an operator on H.
Mat id_tensor_f(const RepBlockMatrix& X, const Functional& f);

}  // namespace dqg
