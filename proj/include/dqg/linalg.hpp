#pragma once

#include <complex>
#include <vector>

#include <Eigen/Dense>

namespace dqg {

using cplx = std::complex<double>;
using Mat = Eigen::MatrixXcd;
using Vec = Eigen::VectorXcd;

// Tensor legs are row-major: for legs (n0, n1, ..., nk) the flat index of
// (i0, i1, ..., ik) is ((i0*n1 + i1)*n2 + ...)*nk + ik. Every reshape in the
// library goes through permute_legs below.
using Dims = std::vector<int>;

int dims_product(const Dims& dims);

// Operator on the tensor product with leg order `dims`, re-expressed with
// leg k of the result being leg perm[k] of the input.
Mat permute_legs(const Mat& x, const Dims& dims, const std::vector<int>& perm);

template <class A, class B>
Mat kron(const Eigen::MatrixBase<A>& a, const Eigen::MatrixBase<B>& b)
{
    Mat out(a.rows() * b.rows(), a.cols() * b.cols());
    for (Eigen::Index i = 0; i < a.rows(); ++i)
        for (Eigen::Index j = 0; j < a.cols(); ++j)
            out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = cplx(a(i, j)) * b;
    return out;
}

inline Mat identity(int n) { return Mat::Identity(n, n); }

// (id ⊗ f)(x) on leg `leg`, where f(y) = trace(density * y).
Mat slice_leg(const Mat& x, const Dims& dims, int leg, const Mat& density);

// Applies a linear map on the row-major vectorization of leg `leg`.
// `map` has shape (out_dim^2, dims[leg]^2).
Mat map_leg(const Mat& x, const Dims& dims, int leg, const Mat& map, int out_dim);

// Replaces leg `leg` (dimension n) by the legs `out_dims` through
// y ↦ W (y ⊗ 1_mult) W*, with W of shape (prod(out_dims), n*mult).
Mat hom_leg(const Mat& x, const Dims& dims, int leg, const Mat& W, int mult, const Dims& out_dims);

// m(Σ A⊗B) = Σ AB for an operator on two legs of equal dimension n.
Mat multiply_legs(const Mat& y, int n);

Vec vec_rm(const Mat& x);
Mat unvec_rm(const Vec& v, int rows, int cols);

// Orthonormal basis of the (numerical) kernel, one column per vector.
Mat nullspace(const Mat& a, double rel_tol = 1e-9);

Mat hermitian_part(const Mat& x);
Mat hermitian_power(const Mat& x, double power, double clamp = 1e-14);
double min_eigenvalue(const Mat& x);
double max_eigenvalue(const Mat& x);
double opnorm(const Mat& x);

// Density D with trace(D a) = trace(G L(a)) for every a, where L acts on
// row-major vectorizations and maps M_n into M_m (G is m×m).
Mat pullback_density(const Mat& G, const Mat& L, int n);

}  // namespace dqg
