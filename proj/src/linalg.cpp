#include "dqg/linalg.hpp"

#include <numeric>
#include <stdexcept>

namespace dqg {

int dims_product(const Dims& dims)
{
    return std::accumulate(dims.begin(), dims.end(), 1, std::multiplies<int>());
}

namespace {

std::vector<int> flat_map(const Dims& dims, const std::vector<int>& perm)
{
    const int total = dims_product(dims);
    const std::size_t k = dims.size();
    Dims new_dims(k);
    for (std::size_t i = 0; i < k; ++i) new_dims[i] = dims[perm[i]];
    std::vector<int> out(total);
    std::vector<int> digits(k);
    for (int flat = 0; flat < total; ++flat) {
        int rem = flat;
        for (std::size_t l = k; l-- > 0;) {
            digits[l] = rem % dims[l];
            rem /= dims[l];
        }
        int idx = 0;
        for (std::size_t i = 0; i < k; ++i) idx = idx * new_dims[i] + digits[perm[i]];
        out[flat] = idx;
    }
    return out;
}

// Moves `leg` to the end; returns the permutation used.
std::vector<int> to_last(std::size_t k, int leg)
{
    std::vector<int> perm;
    for (std::size_t i = 0; i < k; ++i)
        if (static_cast<int>(i) != leg) perm.push_back(static_cast<int>(i));
    perm.push_back(leg);
    return perm;
}

void check_leg(const Mat& x, const Dims& dims, int leg)
{
    if (leg < 0 || leg >= static_cast<int>(dims.size()))
        throw std::invalid_argument("leg out of range");
    if (x.rows() != dims_product(dims) || x.cols() != x.rows())
        throw std::invalid_argument("operator shape does not match leg dimensions");
}

// Legs (others..., inserted...) back to (before, inserted..., after).
Mat restore_order(const Mat& y, std::size_t k, int leg, const Dims& dims_out_last, std::size_t inserted)
{
    const std::size_t others = k - 1;
    std::vector<int> perm;
    for (int i = 0; i < leg; ++i) perm.push_back(i);
    for (std::size_t j = 0; j < inserted; ++j) perm.push_back(static_cast<int>(others + j));
    for (std::size_t i = leg; i < others; ++i) perm.push_back(static_cast<int>(i));
    return permute_legs(y, dims_out_last, perm);
}

}  // namespace

Mat permute_legs(const Mat& x, const Dims& dims, const std::vector<int>& perm)
{
    if (perm.size() != dims.size())
        throw std::invalid_argument("permutation length mismatch");
    const auto map = flat_map(dims, perm);
    const int n = static_cast<int>(map.size());
    Mat out(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) out(map[i], map[j]) = x(i, j);
    return out;
}

Mat slice_leg(const Mat& x, const Dims& dims, int leg, const Mat& density)
{
    check_leg(x, dims, leg);
    const int n = dims[leg];
    if (density.rows() != n || density.cols() != n)
        throw std::invalid_argument("density shape does not match sliced leg");
    const Mat y = permute_legs(x, dims, to_last(dims.size(), leg));
    const int r = dims_product(dims) / n;
    Mat out = Mat::Zero(r, r);
    for (int a = 0; a < r; ++a)
        for (int b = 0; b < r; ++b)
            out(a, b) = (density.transpose().cwiseProduct(y.block(a * n, b * n, n, n))).sum();
    return out;
}

Mat map_leg(const Mat& x, const Dims& dims, int leg, const Mat& map, int out_dim)
{
    check_leg(x, dims, leg);
    const int n = dims[leg];
    if (map.cols() != n * n || map.rows() != out_dim * out_dim)
        throw std::invalid_argument("leg map shape mismatch");
    const Mat y = permute_legs(x, dims, to_last(dims.size(), leg));
    const int r = dims_product(dims) / n;
    Mat z(r * out_dim, r * out_dim);
    for (int a = 0; a < r; ++a)
        for (int b = 0; b < r; ++b) {
            Vec v = map * vec_rm(y.block(a * n, b * n, n, n));
            z.block(a * out_dim, b * out_dim, out_dim, out_dim) = unvec_rm(v, out_dim, out_dim);
        }
    Dims last;
    for (std::size_t i = 0; i < dims.size(); ++i)
        if (static_cast<int>(i) != leg) last.push_back(dims[i]);
    last.push_back(out_dim);
    return restore_order(z, dims.size(), leg, last, 1);
}

Mat hom_leg(const Mat& x, const Dims& dims, int leg, const Mat& W, int mult, const Dims& out_dims)
{
    check_leg(x, dims, leg);
    const int n = dims[leg];
    if (W.cols() != n * mult || W.rows() != dims_product(out_dims))
        throw std::invalid_argument("homomorphism isometry shape mismatch");
    const Mat y = permute_legs(x, dims, to_last(dims.size(), leg));
    const int r = dims_product(dims) / n;
    const Mat z = kron(y, identity(mult));
    const Mat w = kron(identity(r), W);
    const Mat out = w * z * w.adjoint();
    Dims last;
    for (std::size_t i = 0; i < dims.size(); ++i)
        if (static_cast<int>(i) != leg) last.push_back(dims[i]);
    last.insert(last.end(), out_dims.begin(), out_dims.end());
    return restore_order(out, dims.size(), leg, last, out_dims.size());
}

Mat multiply_legs(const Mat& y, int n)
{
    if (y.rows() != n * n || y.cols() != n * n)
        throw std::invalid_argument("multiply_legs shape mismatch");
    Mat out = Mat::Zero(n, n);
    for (int i = 0; i < n; ++i)
        for (int l = 0; l < n; ++l)
            for (int j = 0; j < n; ++j) out(i, l) += y(i * n + j, j * n + l);
    return out;
}

Vec vec_rm(const Mat& x)
{
    Vec v(x.size());
    for (Eigen::Index i = 0; i < x.rows(); ++i)
        for (Eigen::Index j = 0; j < x.cols(); ++j) v(i * x.cols() + j) = x(i, j);
    return v;
}

Mat unvec_rm(const Vec& v, int rows, int cols)
{
    if (v.size() != rows * cols) throw std::invalid_argument("unvec size mismatch");
    Mat x(rows, cols);
    for (int i = 0; i < rows; ++i)
        for (int j = 0; j < cols; ++j) x(i, j) = v(i * cols + j);
    return x;
}

Mat nullspace(const Mat& a, double rel_tol)
{
    if (a.cols() == 0) return Mat(0, 0);
    if (a.rows() == 0) return identity(static_cast<int>(a.cols()));
    Eigen::BDCSVD<Mat> svd(a, Eigen::ComputeFullV);
    const auto& sv = svd.singularValues();
    const double top = std::max(1.0, sv.size() ? sv(0) : 0.0);
    Eigen::Index rank = 0;
    while (rank < sv.size() && sv(rank) > rel_tol * top) ++rank;
    return svd.matrixV().rightCols(a.cols() - rank);
}

Mat hermitian_part(const Mat& x) { return (x + x.adjoint()) * 0.5; }

Mat hermitian_power(const Mat& x, double power, double clamp)
{
    Eigen::SelfAdjointEigenSolver<Mat> es(hermitian_part(x));
    Eigen::VectorXd ev = es.eigenvalues();
    for (Eigen::Index i = 0; i < ev.size(); ++i) ev(i) = std::pow(std::max(ev(i), clamp), power);
    return es.eigenvectors() * ev.cast<cplx>().asDiagonal() * es.eigenvectors().adjoint();
}

double min_eigenvalue(const Mat& x)
{
    if (x.size() == 0) return 0.0;
    Eigen::SelfAdjointEigenSolver<Mat> es(hermitian_part(x), Eigen::EigenvaluesOnly);
    return es.eigenvalues().minCoeff();
}

double max_eigenvalue(const Mat& x)
{
    if (x.size() == 0) return 0.0;
    Eigen::SelfAdjointEigenSolver<Mat> es(hermitian_part(x), Eigen::EigenvaluesOnly);
    return es.eigenvalues().maxCoeff();
}

double opnorm(const Mat& x)
{
    if (x.size() == 0) return 0.0;
    Eigen::JacobiSVD<Mat> svd(x);
    return svd.singularValues()(0);
}

Mat pullback_density(const Mat& G, const Mat& L, int n)
{
    if (L.cols() != n * n || L.rows() != G.rows() * G.rows())
        throw std::invalid_argument("pullback shape mismatch");
    const Vec v = L.transpose() * vec_rm(G.transpose());
    return unvec_rm(v, n, n).transpose();
}

}  // namespace dqg
