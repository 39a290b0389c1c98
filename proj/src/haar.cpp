#include "dqg/haar.hpp"

#include <cmath>

#include "dqg/rng.hpp"

namespace dqg {

Mat HaarData::theta_pow(BlockId b, int p) const
{
    const Mat& base = p >= 0 ? theta.at(b) : theta_inv.at(b);
    Mat out = identity(static_cast<int>(base.rows()));
    for (int k = 0; k < std::abs(p); ++k) out = out * base;
    return out;
}

Multiplier HaarData::theta_multiplier(int p) const
{
    std::vector<Mat> blocks;
    for (std::size_t b = 0; b < theta.size(); ++b) blocks.push_back(theta_pow(static_cast<BlockId>(b), p));
    return Multiplier::from_blocks(std::move(blocks));
}

HaarData modular_data(const DqgSpec& s, const std::vector<Mat>& K, const std::vector<double>& c_alpha, double c)
{
    const int n = s.size();
    if (static_cast<int>(K.size()) != n || static_cast<int>(c_alpha.size()) != n)
        throw StructuralError("modular data needs K and c_alpha for every block");
    if (!(c > 0.0)) throw StructuralError("haar constant c must be positive");
    HaarData h;
    h.K = K;
    h.c_alpha = c_alpha;
    h.c = c;
    for (int b = 0; b < n; ++b) {
        const Mat& k = K[b];
        if ((k - k.adjoint()).cwiseAbs().maxCoeff() > 1e-10 * std::max(1.0, k.cwiseAbs().maxCoeff()))
            throw StructuralError("K at '" + s.label(b) + "' is not Hermitian");
        if (min_eigenvalue(k) <= 1e-12) throw StructuralError("K at '" + s.label(b) + "' is not positive definite");
        if (!(c_alpha[b] > 0.0)) throw StructuralError("c_alpha at '" + s.label(b) + "' must be positive");
        const Mat kh = hermitian_part(k);
        h.K_inv.push_back(hermitian_power(kh, -1.0));
        const Mat d = hermitian_part((c_alpha[b] / c) * kh * kh);
        h.delta.push_back(d);
        h.theta.push_back(hermitian_power(d, 0.5));
        h.theta_inv.push_back(hermitian_power(d, -0.5));
    }
    return h;
}

HaarData haar_from_spec(const DqgSpec& s)
{
    if (!s.haar) throw StructuralError("spec has no haar section");
    return modular_data(s, s.haar->K, s.haar->c_alpha, s.haar->c);
}

Functional phi_functional(const HaarData& h)
{
    Functional f;
    for (std::size_t b = 0; b < h.K_inv.size(); ++b) f.densities.set(static_cast<BlockId>(b), h.K_inv[b]);
    return f;
}

Functional phi_functional(const HaarData& h, const std::vector<BlockId>& J)
{
    Functional f;
    for (BlockId b : J) f.densities.set(b, h.K_inv.at(b));
    return f;
}

Functional psi_functional(const HaarData& h)
{
    Functional f;
    for (std::size_t b = 0; b < h.K.size(); ++b) f.densities.set(static_cast<BlockId>(b), h.c_alpha[b] * h.K[b]);
    return f;
}

cplx phi(const HaarData& h, const Element& a)
{
    cplx s = 0.0;
    for (const auto& [b, m] : a) s += (h.K_inv.at(b) * m).trace();
    return s;
}

cplx psi(const HaarData& h, const Element& a)
{
    cplx s = 0.0;
    for (const auto& [b, m] : a) s += h.c_alpha.at(b) * (h.K.at(b) * m).trace();
    return s;
}

Element theta_left(const HaarData& h, int p, const Element& a)
{
    Element out;
    for (const auto& [b, m] : a) out.set(b, h.theta_pow(b, p) * m);
    return out;
}

Element theta_right(const HaarData& h, const Element& a, int p)
{
    Element out;
    for (const auto& [b, m] : a) out.set(b, m * h.theta_pow(b, p));
    return out;
}

Mat id_tensor_phi_trunc(const RepBlockMatrix& X, const HaarData& h, const std::vector<BlockId>& J)
{
    return id_tensor_f(X, phi_functional(h, J));
}

Element id_tensor_phi_trunc(const TensorElement& X, const HaarData& h, const std::vector<BlockId>& J)
{
    return id_tensor_f(X, phi_functional(h, J), 1);
}

double matrix_angle(const Mat& a, const Mat& b)
{
    const double na = a.norm(), nb = b.norm();
    if (na == 0.0 || nb == 0.0) return M_PI / 2;
    const double cosang = std::abs(a.cwiseProduct(b.conjugate()).sum()) / (na * nb);
    // acos is badly conditioned near 1; use the sine form instead.
    return std::asin(std::sqrt(std::max(0.0, 1.0 - std::min(1.0, cosang * cosang))));
}

DerivedK derive_K_from_S2(const DqgSpec& s)
{
    DerivedK out;
    for (int b = 0; b < s.size(); ++b) {
        const int n = s.dim(b);
        const BlockId p = s.pair(b);
        const Mat S2 = s.antipode[p].map * s.antipode[b].map;
        Mat A(n * n * n * n, n * n);
        for (int u = 0; u < n * n; ++u) {
            Mat e = Mat::Zero(n, n);
            e(u / n, u % n) = 1.0;
            const Mat img = unvec_rm(S2 * vec_rm(e), n, n);
            A.block(u * n * n, 0, n * n, n * n) = kron(identity(n), img.transpose()) - kron(e, identity(n));
        }
        const Mat ker = nullspace(A, 1e-9);
        out.kernel_dim.push_back(static_cast<int>(ker.cols()));
        bool ok = ker.cols() == 1;
        Mat K = identity(n);
        if (ok) {
            K = unvec_rm(ker.col(0), n, n);
            const cplx tr = K.trace();
            if (std::abs(tr) < 1e-12) ok = false;
            else {
                K = hermitian_part(K * (std::abs(tr) / tr));
                ok = min_eigenvalue(K) > 1e-12;
            }
            if (ok) {
                const double t2 = hermitian_power(K, -1.0).trace().real() / K.trace().real();
                K *= std::sqrt(t2);
            }
        }
        out.K.push_back(K);
        out.found.push_back(ok);
    }
    return out;
}

namespace {

// Unit-norm vector spanning the numerical kernel; requires a 1-dim kernel.
Eigen::VectorXcd null_vector(const Mat& A, const std::string& what)
{
    Eigen::JacobiSVD<Mat> svd(A, Eigen::ComputeFullV);
    const auto& sv = svd.singularValues();
    const Eigen::Index n = A.cols();
    const double top = std::max(1.0, sv(0));
    const double last = sv.size() == n ? sv(n - 1) : 0.0;
    const double second = n >= 2 ? sv(n - 2) : top;
    if (last > 1e-8 * top || second < 1e-8 * top)
        throw StructuralError(what + ": invariance system does not have a one-dimensional solution space");
    return svd.matrixV().col(n - 1);
}

std::vector<double> positive_weights(const Eigen::VectorXcd& v, BlockId anchor, const std::string& what)
{
    const cplx a = v(anchor);
    if (std::abs(a) < 1e-12) throw StructuralError(what + ": weight vanishes on the counit block");
    std::vector<double> w(v.size());
    for (Eigen::Index i = 0; i < v.size(); ++i) {
        const cplx x = v(i) / a;
        if (std::abs(x.imag()) > 1e-8 * std::abs(x) || x.real() <= 0.0)
            throw StructuralError(what + ": no positive solution");
        w[i] = x.real();
    }
    return w;
}

}  // namespace

HaarParams solve_haar_weights(const DqgSpec& s, const std::vector<Mat>& K_shape)
{
    const int n = s.size();
    if (s.counit.densities.empty()) throw StructuralError("counit has no support");
    const BlockId anchor = s.counit.densities.begin()->first;
    std::vector<Mat> Kinv_shape;
    for (const Mat& k : K_shape) Kinv_shape.push_back(hermitian_power(k, -1.0));

    // Left invariance: (id ⊗ φ)((e_α ⊗ 1)Δ(a)) = e_α φ(a), linear in the weights of φ.
    std::vector<Eigen::RowVectorXcd> rows;
    for (BlockId al = 0; al < n; ++al)
        for (BlockId g = 0; g < n; ++g) {
            if (!s.pair_complete(s.pair(al), g)) continue;
            const int ng = s.dim(g), na = s.dim(al);
            for (int u = 0; u < ng * ng; ++u) {
                const Element a = s.layout.unit(g, u / ng, u % ng);
                const TensorElement t = galois_t2(s, s.layout.central(al), a);
                std::vector<Mat> coeff(n, Mat::Zero(na, na));
                for (const auto& [p, m] : t) coeff[p.second] += slice_leg(m, {na, s.dim(p.second)}, 1, Kinv_shape[p.second]);
                coeff[g] -= identity(na) * Kinv_shape[g](u % ng, u / ng);
                for (int e = 0; e < na * na; ++e) {
                    Eigen::RowVectorXcd row(n);
                    for (int b = 0; b < n; ++b) row(b) = coeff[b](e / na, e % na);
                    rows.push_back(row);
                }
            }
        }
    Mat A(static_cast<Eigen::Index>(rows.size()), n);
    for (std::size_t i = 0; i < rows.size(); ++i) A.row(i) = rows[i];
    const auto w = positive_weights(null_vector(A, "left Haar weights"), anchor, "left Haar weights");

    HaarParams out;
    for (int b = 0; b < n; ++b) out.K.push_back(K_shape[b] / w[b]);

    // Right invariance: (ψ ⊗ id)((1 ⊗ e_β)Δ(a)) = ψ(a) e_β, linear in c_α.
    rows.clear();
    for (BlockId be = 0; be < n; ++be)
        for (BlockId g = 0; g < n; ++g) {
            if (!s.pair_complete(g, s.pair(be))) continue;
            const int ng = s.dim(g), nb = s.dim(be);
            for (int u = 0; u < ng * ng; ++u) {
                const Element a = s.layout.unit(g, u / ng, u % ng);
                const TensorElement t = galois_t1(s, a.adjoint(), s.layout.central(be));
                std::vector<Mat> coeff(n, Mat::Zero(nb, nb));
                for (const auto& [p, m] : t)
                    coeff[p.first] += slice_leg(m.adjoint(), {s.dim(p.first), nb}, 0, out.K[p.first]);
                coeff[g] -= identity(nb) * out.K[g](u % ng, u / ng);
                for (int e = 0; e < nb * nb; ++e) {
                    Eigen::RowVectorXcd row(n);
                    for (int b = 0; b < n; ++b) row(b) = coeff[b](e / nb, e % nb);
                    rows.push_back(row);
                }
            }
        }
    Mat B(static_cast<Eigen::Index>(rows.size()), n);
    for (std::size_t i = 0; i < rows.size(); ++i) B.row(i) = rows[i];
    auto c = positive_weights(null_vector(B, "right Haar weights"), anchor, "right Haar weights");

    // Global scale of ψ from ψ = φ∘S on matrix units.
    cplx num = 0.0;
    double den = 0.0;
    for (int b = 0; b < n; ++b) {
        const int nb = s.dim(b);
        const Mat Kinv_img = hermitian_power(out.K[s.pair(b)], -1.0);
        for (int u = 0; u < nb * nb; ++u) {
            Mat e = Mat::Zero(nb, nb);
            e(u / nb, u % nb) = 1.0;
            const cplx psi0 = c[b] * (out.K[b] * e).trace();
            const cplx phiS = (Kinv_img * antipode_block(s, e, b)).trace();
            num += std::conj(psi0) * phiS;
            den += std::norm(psi0);
        }
    }
    const double scale = (num / den).real();
    if (!(scale > 0.0)) throw StructuralError("psi = phi o S fixes a non-positive scale");
    for (double& x : c) x *= scale;
    out.c_alpha = c;
    out.c = 1.0;
    return out;
}

Report verify_haar(const DqgSpec& s, const HaarData& h, const VerifyOptions& opt)
{
    const Window w = make_window(s, opt.window_grow);
    const std::string win = w.describe(s);
    const auto& J = w.J;
    const BlockLayout& L = s.layout;
    Report r;
    r.title = "haar";

    double pd = 0.0, dres = 0.0, tres = 0.0, scal = 0.0;
    const HaarData scaled = [&] {
        std::vector<Mat> K2;
        for (const Mat& k : h.K) K2.push_back(1.7 * k);
        return modular_data(s, K2, h.c_alpha, h.c * 1.7 * 1.7);
    }();
    for (BlockId b : J) {
        pd = std::max(pd, std::max(0.0, 1e-12 - min_eigenvalue(h.K[b])));
        const Mat d = (h.c_alpha[b] / h.c) * h.K[b] * h.K[b];
        dres = std::max(dres, (h.delta[b] - d).cwiseAbs().maxCoeff());
        tres = std::max(tres, (h.theta[b] * h.theta[b] - h.delta[b]).cwiseAbs().maxCoeff());
        scal = std::max(scal, (scaled.delta[b] - h.delta[b]).cwiseAbs().maxCoeff());
    }
    r.pass_fail("K positive definite", pd, 0.0, win);
    r.pass_fail("delta = c^-1 c_alpha K^2", dres, opt.tol, win);
    r.pass_fail("theta^2 = delta", tres, opt.tol, win);
    r.pass_fail("delta invariant under K -> tK, c -> t^2 c", scal, opt.tol, win);

    const Functional phi_f = phi_functional(h);
    const Functional psi_f = psi_functional(h);
    const Multiplier theta = h.theta_multiplier(1);
    const Multiplier theta_inv = h.theta_multiplier(-1);

    Probe left("left invariance (id x phi)((b x 1)Delta(a)) = b phi(a)", opt.tol);
    Probe right("right invariance (psi x id)((1 x b)Delta(a)) = psi(a) b", opt.tol);
    Probe slice("(id x phi)(Delta(a)) = phi(a) 1", opt.tol);
    Probe dtheta("Delta(theta) = theta x theta", opt.tol);
    Probe stheta("S(theta) = theta^-1", opt.tol);
    Probe s2("S^2(a) = theta^-1 a theta", opt.tol);
    Probe prop_c("psi(a) = phi(a theta^2)", opt.tol);
    Probe phis2("phi(S^2(a)) = phi(a)", opt.tol);
    Probe psis2("psi(S^2(a)) = psi(a)", opt.tol);
    Probe phis("phi(S(a)) = phi(a delta)", opt.tol);
    Probe phipos("phi(a*a) >= 0", opt.tol);
    Probe psipos("psi(a*a) >= 0", opt.tol);
    Probe mrule("multiplier rule Delta(theta^+-1)Delta(a) = Delta(theta^+-1 a)", opt.tol);

    cplx fit_num = 0.0;
    double fit_den = 0.0;

    for (BlockId ia : J)
        for (BlockId ib : J)
            for (int k = 0; k < opt.samples; ++k) {
                Rng rng = Rng::for_case(opt.seed, "haar-pair", {ia, ib, k});
                const Element b = random_element(L, {ia}, rng);
                const Element a = random_element(L, {ib}, rng);
                const double scale = 1.0 + a.max_abs() * b.max_abs();
                try {
                    const Element lhs = id_tensor_f(galois_t2(s, b, a), phi_f, 1);
                    left.observe(distance(lhs, phi(h, a) * b) / scale);
                } catch (const WindowOverflow& e) {
                    left.skip(e.what());
                }
                try {
                    const TensorElement t = galois_t1(s, a.adjoint(), b.adjoint()).adjoint();
                    right.observe(distance(id_tensor_f(t, psi_f, 0), psi(h, a) * b) / scale);
                } catch (const WindowOverflow& e) {
                    right.skip(e.what());
                }
                // Slice identity on block ia of the first leg, for a at ib.
                if (s.pair_complete(s.pair(ia), ib)) {
                    Mat acc = Mat::Zero(s.dim(ia), s.dim(ia));
                    for (BlockId be = 0; be < s.size(); ++be) {
                        const Mat d = delta_block(s, a, ia, be);
                        acc += slice_leg(d, {s.dim(ia), s.dim(be)}, 1, h.K_inv[be]);
                    }
                    slice.observe((acc - phi(h, a) * identity(s.dim(ia))).cwiseAbs().maxCoeff() / scale);
                } else {
                    slice.skip("pair " + s.pair_label(s.pair(ia), ib) + " not certified");
                }
                if (s.pair_complete(ia, ib)) {
                    double worst = 0.0;
                    for (BlockId g : J) {
                        Rng r2 = Rng::for_case(opt.seed, "haar-mrule", {ia, ib, g, k});
                        const Element x = random_element(L, {g}, r2);
                        for (const Multiplier* X : {&theta, &theta_inv}) {
                            const Mat lhs = multiplier_delta_block(s, *X, ia, ib) * delta_block(s, x, ia, ib);
                            const Mat rhs = delta_block(s, multiply(*X, x), ia, ib);
                            worst = std::max(worst, (lhs - rhs).cwiseAbs().maxCoeff() / (1.0 + x.max_abs()));
                        }
                    }
                    mrule.observe(worst);
                }
            }

    for (BlockId ia : J)
        for (BlockId ib : J) {
            if (!s.pair_complete(ia, ib)) {
                dtheta.skip("pair " + s.pair_label(ia, ib) + " not certified");
                continue;
            }
            const Mat d = multiplier_delta_block(s, theta, ia, ib);
            dtheta.observe((d - kron(h.theta[ia], h.theta[ib])).cwiseAbs().maxCoeff());
        }

    for (BlockId ia : J) {
        stheta.observe((multiplier_antipode(s, theta, ia) - h.theta_inv[ia]).cwiseAbs().maxCoeff());
        for (int k = 0; k < opt.samples; ++k) {
            Rng rng = Rng::for_case(opt.seed, "haar-single", {ia, k});
            const Element a = random_element(L, {ia}, rng);
            const double scale = 1.0 + a.max_abs();
            const Element ss = antipode(s, antipode(s, a));
            s2.observe(distance(ss, theta_right(h, theta_left(h, -1, a), 1)) / scale);
            prop_c.observe(std::abs(psi(h, a) - phi(h, theta_right(h, a, 2))) / scale);
            phis2.observe(std::abs(phi(h, ss) - phi(h, a)) / scale);
            psis2.observe(std::abs(psi(h, ss) - psi(h, a)) / scale);
            Element ad;
            for (const auto& [b, m] : a) ad.set(b, m * h.delta[b]);
            phis.observe(std::abs(phi(h, antipode(s, a)) - phi(h, ad)) / scale);
            const double n2 = a.adjoint().max_abs() * a.max_abs() + 1.0;
            const cplx pa = phi(h, a.adjoint() * a);
            const cplx sa = psi(h, a.adjoint() * a);
            phipos.observe(std::max(std::abs(pa.imag()), std::max(0.0, -pa.real())) / n2);
            psipos.observe(std::max(std::abs(sa.imag()), std::max(0.0, -sa.real())) / n2);
            const cplx ps = phi(h, antipode(s, a));
            fit_num += std::conj(ps) * psi(h, a);
            fit_den += std::norm(ps);
        }
    }

    for (const Probe* p : {&left, &right, &slice, &dtheta, &stheta, &s2, &prop_c, &phis2, &psis2, &phis, &phipos, &psipos, &mrule})
        r.add(p->finish(win));

    // Truncation monotonicity on a positive element of B(C^2) ⊗ A.
    {
        Rng rng = Rng::for_case(opt.seed, "haar-trunc", {});
        RepBlockMatrix X;
        X.hdim = 2;
        for (BlockId b : J) {
            const Mat y = rng.gaussian(2 * s.dim(b), 2 * s.dim(b));
            X.blocks.set(b, y.adjoint() * y);
        }
        double worst = 0.0;
        Mat prev = Mat::Zero(2, 2);
        std::vector<BlockId> prefix;
        for (BlockId b : J) {
            prefix.push_back(b);
            const Mat cur = id_tensor_phi_trunc(X, h, prefix);
            worst = std::max(worst, std::max(0.0, -min_eigenvalue(cur - prev)));
            prev = cur;
        }
        r.pass_fail("(id x phi_J)(X) increases with J for X >= 0", worst, opt.tol, win);
    }

    // Conventions for c, reported rather than reconciled.
    const double c_fit = fit_den > 0 ? (fit_num / fit_den).real() : 0.0;
    r.info("fitted c in psi = c phi o S", c_fit);
    r.info("spec c", h.c, "property psi = phi(. theta^2) holds exactly when c = 1");

    const DerivedK dk = derive_K_from_S2(s);
    double angle = 0.0;
    bool all_found = true;
    for (BlockId b : J) {
        if (!dk.found[b]) {
            all_found = false;
            continue;
        }
        angle = std::max(angle, matrix_angle(dk.K[b], h.K[b]));
    }
    r.pass_fail("K agrees with S^2 intertwiner up to scalar (angle)", all_found ? angle : 1.0, 1e-8, win,
                all_found ? "" : "no positive intertwiner on some block");
    return r;
}

}  // namespace dqg
