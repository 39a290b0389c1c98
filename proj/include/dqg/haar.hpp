#pragma once

#include <vector>

#include "dqg/core.hpp"

namespace dqg {

struct HaarData {
    std::vector<Mat> K;
    std::vector<Mat> K_inv;
    std::vector<double> c_alpha;
    double c = 1.0;
    std::vector<Mat> delta;
    std::vector<Mat> theta;
    std::vector<Mat> theta_inv;

    // θ^p on block b for integer p.
    Mat theta_pow(BlockId b, int p) const;
    Multiplier theta_multiplier(int p) const;
};

HaarData modular_data(const DqgSpec& s, const std::vector<Mat>& K, const std::vector<double>& c_alpha, double c);
HaarData haar_from_spec(const DqgSpec& s);

cplx phi(const HaarData& h, const Element& a);
cplx psi(const HaarData& h, const Element& a);
Functional phi_functional(const HaarData& h);
Functional phi_functional(const HaarData& h, const std::vector<BlockId>& J);
Functional psi_functional(const HaarData& h);

// θ^p a and a θ^p.
Element theta_left(const HaarData& h, int p, const Element& a);
Element theta_right(const HaarData& h, const Element& a, int p);

// (id ⊗ φ_J) on the block leg.
Mat id_tensor_phi_trunc(const RepBlockMatrix& X, const HaarData& h, const std::vector<BlockId>& J);
Element id_tensor_phi_trunc(const TensorElement& X, const HaarData& h, const std::vector<BlockId>& J);

struct DerivedK {
    std::vector<Mat> K;      // normalized so that trace K = trace K⁻¹
    std::vector<bool> found;  // positive solution exists
    std::vector<int> kernel_dim;
};

// Positive K_α with S²(a) = K_α⁻¹ a K_α, up to a positive scalar per block.
DerivedK derive_K_from_S2(const DqgSpec& s);

// Angle between two matrices viewed as vectors, insensitive to scale.
double matrix_angle(const Mat& a, const Mat& b);

// Fits per-block weights to the shapes so that φ is left invariant and ψ is
// right invariant on certified pairs, with ψ = φ∘S and c = 1.
HaarParams solve_haar_weights(const DqgSpec& s, const std::vector<Mat>& K_shape);

Report verify_haar(const DqgSpec& s, const HaarData& h, const VerifyOptions& opt);

}  // namespace dqg
