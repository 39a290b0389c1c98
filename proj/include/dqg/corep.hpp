#pragma once

#include <vector>

#include "dqg/dual.hpp"

namespace dqg {

// Unitary corepresentation: block α of U is an operator on H ⊗ C^{n_α}.
struct Corep {
    RepBlockMatrix U;
    int hdim() const { return U.hdim; }
};

Corep trivial_corep(const BlockLayout& layout, int hdim);
// A group-like unitary u ∈ A with Δ(u) = u ⊗ u, as a corep on C.
Corep character_corep(const Element& u);
// Right regular corepresentation on L²(ψ) = ⊕ M_{n_β}, with
// (id ⊗ ω)(V) Λ(x) = Λ((id ⊗ ω)Δ(x)). Needs every pair certified.
Corep regular_corep(const DqgSpec& s, const HaarData& h);

// Coordinates of Λ(x) for the regular corep, and back.
Vec regular_vector(const DqgSpec& s, const HaarData& h, const Element& x);
Element regular_element(const DqgSpec& s, const HaarData& h, const Vec& v);

Report corep_validate(const DqgSpec& s, const Corep& U, const VerifyOptions& opt);

// Vector of π(C₀)H together with an operator π(c) whose range contains it.
struct ModuleVector {
    Vec vec;
    Mat support;
};

// Residual of the support certificate; throws if it is absent.
double certificate_residual(const ModuleVector& xi);

// Σ_k e_k ⊗ f_k in H ⊗ Â₀ for the standard basis e_k of H.
struct FreeModuleVector {
    std::vector<Element> coeffs;

    static FreeModuleVector zero(int hdim) { return {std::vector<Element>(hdim)}; }
    void add_term(const Vec& eta, const Element& a);
};

double free_distance(const FreeModuleVector& f, const FreeModuleVector& g);
// ⟨ξ ⊗ a, η ⊗ b⟩ = ⟨ξ, η⟩ a♯ ∗ b.
Element free_inner(const DqgSpec& s, const HaarData& h, const FreeModuleVector& f, const FreeModuleVector& g);
// (η ⊗ a) b = η ⊗ (a ∗ b).
FreeModuleVector free_act(const DqgSpec& s, const HaarData& h, const FreeModuleVector& f, const Element& b);

// ξ·a = (id ⊗ ψ_{θ⁻¹S(a)θ⁻²})(U)ξ.
ModuleVector module_act(const DqgSpec& s, const HaarData& h, const Corep& U, const ModuleVector& xi, const Element& a);
// ξ·a = (id ⊗ ψ_{θa}∘S⁻¹)(U)ξ.
ModuleVector module_act_alt(const DqgSpec& s, const HaarData& h, const Corep& U, const ModuleVector& xi, const Element& a);
// ⟨ξ, η⟩ = θ⁻¹ T_ξη(U).
Element module_inner(const HaarData& h, const Corep& U, const ModuleVector& xi, const ModuleVector& eta);

// Σ(ξ) = ((π(h) ⊗ θ⁻¹)U)ξ.
FreeModuleVector sigma_map(const HaarData& h, const Corep& U, const Mat& pi_h, const ModuleVector& xi);
// Σ*(η ⊗ a) = (π(h)η)·a.
ModuleVector sigma_star(const DqgSpec& s, const HaarData& h, const Corep& U, const Mat& pi_h, const FreeModuleVector& f);

// Element identities twisting by θ, checked on the certified window.
Report verify_theta_identities(const DqgSpec& s, const HaarData& h, const VerifyOptions& opt);

// Module structure of π(C)H; pi_h is π(h) for an h satisfying A3.
Report verify_module(const DqgSpec& s, const HaarData& h, const Corep& U, const Mat& pi_h, const VerifyOptions& opt);

}  // namespace dqg
