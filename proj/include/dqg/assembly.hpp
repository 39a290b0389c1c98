#pragma once

#include <string>
#include <vector>

#include "dqg/corep.hpp"

namespace dqg {

// Coaction Δ_C of A on C = ⊕ M_{k_μ}. Entries reuse HomEntry with `target`
// and `left` indexing blocks of C and `right` indexing blocks of A:
// Δ_C(x_μ)(e_ν ⊗ e_β) = W (x_μ ⊗ 1_m) W*.
struct Coaction {
    BlockLayout algebra;
    std::vector<HomEntry> delta;
    Element h;  // positive, (id ⊗ φ)(Δ_C(h²)) = 1
};

// C = A with Δ_C = Δ.
Coaction self_coaction(const DqgSpec& s, const Element& h);
// Δ_C(c) = c ⊗ 1 on C = M_m.
Coaction trivial_coaction(const DqgSpec& s, int m, const Element& h);

// π(c) = Σ_μ W_μ (c_μ ⊗ 1_{m_μ}) W_μ*, W_μ of shape (d, k_μ m_μ).
struct Representation {
    int hdim = 0;
    std::vector<Mat> W;
    std::vector<int> mult;
};

Mat represent(const Representation& pi, const Element& c);

struct CycleRep {
    Corep corep;
    Representation pi;
    Mat F;
};

struct Cycle {
    std::string kind;
    Coaction coaction;
    CycleRep rep;
};

// Regular corep with C = A acting by left multiplication on L²(ψ).
Cycle regular_cycle(const DqgSpec& s, const HaarData& h, const Mat& F, const Element& cutoff);
// Group-like unitary u acting on C with the trivial coaction of C = M_1.
Cycle character_cycle(const DqgSpec& s, const HaarData& h, const Element& u, const Mat& F);
// U = 1 on C^m with C = M_m acting identically.
Cycle trivial_cycle(const DqgSpec& s, const HaarData& h, int m, const Mat& F);

// Default cutoffs solving A3: φ(1)^{-1/2} 1 for any coaction, and for C = A
// also e_ε / φ(e_ε)^{1/2} on the counit block.
Element unit_cutoff(const DqgSpec& s, const HaarData& h, const Coaction& co);
Element counit_cutoff(const DqgSpec& s, const HaarData& h);

// (id ⊗ φ)(Δ_C(x)) as an element of C.
Element coaction_phi_slice(const DqgSpec& s, const HaarData& h, const Coaction& co, const Element& x);
double a3_residual(const DqgSpec& s, const HaarData& h, const Coaction& co, const Element& cutoff);

Report coaction_validate(const DqgSpec& s, const HaarData& h, const Coaction& co, const VerifyOptions& opt);
// Covariance (π ⊗ id)Δ_C(c) = U(π(c) ⊗ 1)U* and the cycle data shapes.
Report cycle_validate(const DqgSpec& s, const Cycle& cy, const VerifyOptions& opt);

struct FPrime {
    Mat F;
    double stabilization = 0.0;  // change when the window grows by one block
};

// F′ = (id ⊗ φ)(U(π(h)Fπ(h) ⊗ 1)U*).
FPrime f_prime(const DqgSpec& s, const HaarData& h, const Cycle& cy, const Element& cutoff, int window_grow = 0);
// Largest ‖U_α(X ⊗ 1)U_α* − X ⊗ 1‖ over the listed blocks.
double equivariance_residual(const Corep& U, const Mat& X);

// X ∗ b = (id ⊗ id ⊗ ψ_b∘S⁻¹)((id ⊗ Δ)X).
RepBlockMatrix conv_action(const DqgSpec& s, const HaarData& h, const RepBlockMatrix& X, const Element& b);

struct Witness {
    BlockId block = 0;
    int i = 0;
    int j = 0;
    Mat B;
};

struct CompactWitness {
    std::vector<Witness> witnesses;
    double equivariance = 0.0;
    double identity_residual = 0.0;  // ΣTΣ* against Σ B ⊗ L_e
    double conv_residual = 0.0;      // same, through conv_action
    double support_residual = 0.0;   // Tπ(c) against π(C)B(H)
};

// Y = (π(h) ⊗ θ⁻¹)U(Tπ(h) ⊗ 1) and its slices B^α_ij.
CompactWitness compact_witness(const DqgSpec& s, const HaarData& h, const Cycle& cy, const Mat& T,
                               const Element& cutoff, const VerifyOptions& opt);

struct AssemblyClassRep {
    std::vector<ModuleVector> module_basis;
    std::vector<std::vector<Element>> gram;
    Mat Fprime;
    Mat Fprime_matrix;  // F′ξ_j = Σ_i M_ij ξ_i
    std::vector<Witness> witnesses;
    Report report;
};

AssemblyClassRep assembly_class(const DqgSpec& s, const HaarData& h, const Cycle& cy, const VerifyOptions& opt);

Report homotopy_check(const DqgSpec& s, const HaarData& h, const Cycle& cy, const Element& h1, const Element& h2,
                      int steps, const VerifyOptions& opt);

}  // namespace dqg
