#pragma once

#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "dqg/blockalg.hpp"
#include "dqg/report.hpp"

namespace dqg {

// Raised when a computation needs fusion data for a pair that the spec
// does not certify as complete.
class WindowOverflow : public std::runtime_error {
public:
    WindowOverflow(BlockPair missing, const std::string& what)
        : std::runtime_error(what), missing_(missing) {}
    BlockPair missing() const { return missing_; }

private:
    BlockPair missing_;
};

// x_γ ↦ Δ(x_γ)(e_α ⊗ e_β) = V (x_γ ⊗ 1_m) V*, V of shape (n_α n_β, n_γ m).
struct HomEntry {
    BlockId target = 0;
    BlockId left = 0;
    BlockId right = 0;
    int mult = 1;
    Mat isometry;
};

// S restricted to block α, as a map on row-major vectorizations into the
// paired block.
struct AntipodeBlock {
    BlockId image = 0;
    Mat map;
};

struct HaarParams {
    std::vector<Mat> K;
    std::vector<double> c_alpha;
    double c = 1.0;
};

class DqgSpec {
public:
    std::string name;
    BlockLayout layout;
    std::vector<HomEntry> delta;
    std::vector<AntipodeBlock> antipode;
    Functional counit;
    std::optional<HaarParams> haar;
    bool all_pairs_complete = false;
    std::set<BlockPair> complete_pairs;

    // Builds lookup tables and inverse antipode maps; validates structure.
    void finalize();

    int size() const { return layout.size(); }
    int dim(BlockId b) const { return layout.dim(b); }
    const std::string& label(BlockId b) const { return layout.label(b); }

    BlockId pair(BlockId a) const { return antipode.at(a).image; }
    bool pair_complete(BlockId a, BlockId b) const;
    void require_pair(BlockId a, BlockId b, const std::string& context) const;
    bool is_finite() const;  // every pair certified

    const std::vector<int>& entries_into(BlockId left, BlockId right) const;
    const std::vector<int>& entries_from(BlockId target) const;

    // Map from block β to β′ implementing S⁻¹ there.
    const Mat& antipode_inverse_map(BlockId b) const { return antipode_inverse_.at(b); }

    std::string pair_label(BlockId a, BlockId b) const;

private:
    std::map<BlockPair, std::vector<int>> by_pair_;
    std::map<BlockId, std::vector<int>> by_target_;
    std::vector<Mat> antipode_inverse_;
};

// Fibre certification. With a at γ and b at β, T₁(a,b) is exact on every
// first leg when (γ, β′) is complete; T₂(a,b) with a at α and b at γ is exact
// when (α′, γ) is complete.
void require_t1(const DqgSpec& s, BlockId gamma, BlockId beta);
void require_t2(const DqgSpec& s, BlockId alpha, BlockId gamma);

// Largest prefix of blocks whose pairs are all certified, then `grow` more.
struct Window {
    std::vector<BlockId> J;
    std::string describe(const DqgSpec& s) const;
};
Window make_window(const DqgSpec& s, int grow);

Mat delta_component(const HomEntry& e, const Mat& x);

// Δ(a) restricted to the block (α, β); exact for finitely supported a.
Mat delta_block(const DqgSpec& s, const Element& a, BlockId alpha, BlockId beta);

TensorElement galois_t1(const DqgSpec& s, const Element& a, const Element& b);
TensorElement galois_t2(const DqgSpec& s, const Element& a, const Element& b);
TensorElement galois_t1(const DqgSpec& s, const TensorElement& x);
TensorElement galois_t2(const DqgSpec& s, const TensorElement& x);

enum class GaloisKind { T1, T2 };

struct GaloisSolution {
    TensorElement x;
    int unknowns = 0;
    int equations = 0;
    int rank = 0;
    double residual = 0.0;
    // Injective with y in the range; on finite specs also surjective.
    bool bijective = false;
};

GaloisSolution galois_solve(const DqgSpec& s, GaloisKind kind, const TensorElement& y);

Element antipode(const DqgSpec& s, const Element& a, bool inverse = false);
Mat antipode_block(const DqgSpec& s, const Mat& x, BlockId b, bool inverse = false);
cplx counit(const DqgSpec& s, const Element& a);

// S on one leg of a tensor: block (α, β) moves to (α′, β) or (α, β′).
TensorElement antipode_leg(const DqgSpec& s, const TensorElement& t, int leg, bool inverse = false);

// Lazily evaluated multiplier (x_α)_α with a thread-safe cache.
class Multiplier {
public:
    using Rule = std::function<Mat(BlockId)>;

    explicit Multiplier(Rule rule);
    static Multiplier identity(const BlockLayout& layout);
    static Multiplier central(const BlockLayout& layout, std::vector<BlockId> J);
    static Multiplier from_blocks(std::vector<Mat> blocks);

    Mat block(BlockId b) const;

private:
    struct Cache {
        std::mutex mutex;
        std::map<BlockId, Mat> values;
    };
    Rule rule_;
    std::shared_ptr<Cache> cache_;
};

Mat multiplier_delta_block(const DqgSpec& s, const Multiplier& X, BlockId alpha, BlockId beta);
Mat multiplier_antipode(const DqgSpec& s, const Multiplier& X, BlockId alpha);
// X·a for a finitely supported a.
Element multiply(const Multiplier& X, const Element& a);
Element multiply(const Element& a, const Multiplier& X);

// Enlarges J until it is closed under α ↦ α′.
std::vector<BlockId> symmetric_closure(const DqgSpec& s, std::vector<BlockId> J);

struct VerifyOptions {
    int samples = 3;
    std::uint64_t seed = 1;
    double tol = 1e-9;
    int window_grow = 0;
};

Report verify_structure(const DqgSpec& s, double tol);
Report verify_bialgebra(const DqgSpec& s, const VerifyOptions& opt);

}  // namespace dqg
