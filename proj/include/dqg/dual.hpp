#pragma once

#include <vector>

#include "dqg/haar.hpp"

namespace dqg {

// a ∗ b = (id ⊗ ψ)((1 ⊗ b)(id ⊗ S⁻¹)Δ(a)), evaluated as
// (id ⊗ ψ)(id ⊗ S⁻¹)(Δ(a)(1 ⊗ S(b))) so every intermediate is finite.
Element convolve(const DqgSpec& s, const HaarData& h, const Element& a, const Element& b);
// (φ ⊗ id)((a ⊗ 1)(S ⊗ id)Δ(b)).
Element convolve_second_form(const DqgSpec& s, const HaarData& h, const Element& a, const Element& b);

// a♯ = θ⁻² S⁻¹(a*).
Element sharp(const DqgSpec& s, const HaarData& h, const Element& a);

// (f ∗ g)(x) = (f ⊗ g)(Δ(x)).
Functional func_convolve(const DqgSpec& s, const Functional& f, const Functional& g);
// f*(x) = conj(f(S(x)*)).
Functional func_star(const DqgSpec& s, const Functional& f);
// ψ_a(x) = ψ(a x).
Functional psi_embed(const HaarData& h, const Element& a);
// f∘S, or f∘S⁻¹ when `inverse` is set.
Functional compose_antipode(const DqgSpec& s, const Functional& f, bool inverse);

double functional_distance(const Functional& f, const Functional& g);

struct LeftRegular {
    Mat matrix;         // in a φ-orthonormal basis of span(basis)
    double norm = 0.0;  // lower bound for the reduced norm
    int rank = 0;
    int pruned = 0;     // basis vectors dropped as linearly dependent
};

// Matrix of b ↦ a ∗ b compressed to span(basis) ⊂ L²(φ).
LeftRegular left_regular(const DqgSpec& s, const HaarData& h, const Element& a, const std::vector<Element>& basis);

// Every matrix unit of the listed blocks.
std::vector<Element> matrix_unit_basis(const BlockLayout& layout, const std::vector<BlockId>& J);

Report verify_dual(const DqgSpec& s, const HaarData& h, const VerifyOptions& opt);

}  // namespace dqg
