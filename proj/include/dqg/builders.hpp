#pragma once

#include <functional>
#include <string>
#include <vector>

#include "dqg/core.hpp"

namespace dqg {

struct GroupTable {
    std::vector<std::string> labels;
    std::vector<std::vector<int>> mul;  // mul[g][h] = g·h
    int identity = 0;
    std::vector<int> inverse;

    int order() const { return static_cast<int>(mul.size()); }
};

// Validates associativity, identity and inverses.
GroupTable make_group_table(std::vector<std::vector<int>> mul, std::vector<std::string> labels = {});
GroupTable cyclic_group(int n);
GroupTable symmetric_group(int n);
// Whitespace-separated n×n table of 0-based element indices.
GroupTable parse_group_table(const std::string& text);

// Representation data of a Hopf *-algebra on finitely many irreducible
// unitary blocks, given on a set of algebra generators.
struct HopfRepSystem {
    std::string name;
    std::vector<std::string> labels;
    std::vector<int> dims;
    int generators = 0;
    int trivial = 0;
    std::function<Mat(int block, int gen)> rep;
    std::function<Mat(int left, int right, int gen)> coproduct;  // (ρ_l ⊗ ρ_r)(Δ X)
    std::function<Mat(int block, int gen)> antipode;              // ρ(S X)
    std::function<bool(int, int)> pair_complete;
    std::function<int(int, int, int)> expected_mult;  // -1 when unknown
};

// Intertwiner nullspaces give the Δ isometries, the transpose-intertwiner
// gives S, K shapes come from S², and the Haar weights are then fitted.
DqgSpec build_from_hopf_reps(const HopfRepSystem& sys);

DqgSpec build_commutative(const GroupTable& g, const std::string& name = "");
DqgSpec build_group_dual(const GroupTable& g, const std::string& name = "", std::uint64_t seed = 7);
DqgSpec build_suq2_window(double q, double max_spin);

// Irreducible unitary representations, trivial one first, then by dimension.
std::vector<std::vector<Mat>> group_irreps(const GroupTable& g, std::uint64_t seed = 7);

}  // namespace dqg
