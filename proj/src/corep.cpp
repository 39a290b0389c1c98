#include "dqg/corep.hpp"

#include "dqg/rng.hpp"

namespace dqg {

Corep trivial_corep(const BlockLayout& layout, int hdim)
{
    Corep c;
    c.U.hdim = hdim;
    for (BlockId b : layout.all()) c.U.blocks.set(b, identity(hdim * layout.dim(b)));
    return c;
}

Corep character_corep(const Element& u)
{
    Corep c;
    c.U.hdim = 1;
    c.U.blocks = u;
    return c;
}

namespace {

std::vector<int> regular_offsets(const DqgSpec& s)
{
    std::vector<int> off(s.size() + 1, 0);
    for (BlockId b = 0; b < s.size(); ++b) off[b + 1] = off[b] + s.dim(b) * s.dim(b);
    return off;
}

}  // namespace

Vec regular_vector(const DqgSpec& s, const HaarData& h, const Element& x)
{
    const auto off = regular_offsets(s);
    Vec v = Vec::Zero(off.back());
    for (const auto& [b, m] : x) {
        const Mat root = hermitian_power(h.c_alpha[b] * h.K[b], 0.5);
        v.segment(off[b], off[b + 1] - off[b]) = vec_rm(m * root);
    }
    return v;
}

Element regular_element(const DqgSpec& s, const HaarData& h, const Vec& v)
{
    const auto off = regular_offsets(s);
    if (v.size() != off.back()) throw StructuralError("vector length does not match the regular space");
    Element x;
    for (BlockId b = 0; b < s.size(); ++b) {
        const int n = s.dim(b);
        const Mat root_inv = hermitian_power(h.c_alpha[b] * h.K[b], -0.5);
        x.set(b, unvec_rm(v.segment(off[b], n * n), n, n) * root_inv);
    }
    return x.prune();
}

Corep regular_corep(const DqgSpec& s, const HaarData& h)
{
    if (!s.is_finite()) throw WindowOverflow({0, 0}, "regular corepresentation needs every pair certified");
    const auto off = regular_offsets(s);
    const int d = off.back();
    std::vector<Mat> roots, root_invs;
    for (BlockId b = 0; b < s.size(); ++b) {
        roots.push_back(hermitian_power(h.c_alpha[b] * h.K[b], 0.5));
        root_invs.push_back(hermitian_power(h.c_alpha[b] * h.K[b], -0.5));
    }
    Corep c;
    c.U.hdim = d;
    for (BlockId a = 0; a < s.size(); ++a) c.U.blocks.set(a, Mat::Zero(d * s.dim(a), d * s.dim(a)));
    // Column p of V^α_ij is Λ((id ⊗ φ^α_ij)Δ(x_p)), φ^α_ij reading entry (i, j).
    for (BlockId be = 0; be < s.size(); ++be) {
        const int nb = s.dim(be);
        for (int k = 0; k < nb; ++k)
            for (int l = 0; l < nb; ++l) {
                const int p = off[be] + k * nb + l;
                Mat unit = Mat::Zero(nb, nb);
                unit(k, l) = 1.0;
                const Mat x = unit * root_invs[be];
                for (int idx : s.entries_from(be)) {
                    const HomEntry& e = s.delta[idx];
                    const int ng = s.dim(e.left), na = s.dim(e.right);
                    const Mat comp = delta_component(e, x);
                    Mat& Ua = *const_cast<Mat*>(c.U.blocks.find(e.right));
                    for (int i = 0; i < na; ++i)
                        for (int j = 0; j < na; ++j) {
                            Mat z(ng, ng);
                            for (int r = 0; r < ng; ++r)
                                for (int t = 0; t < ng; ++t) z(r, t) = comp(r * na + i, t * na + j);
                            const Vec col = vec_rm(z * roots[e.left]);
                            for (int q = 0; q < col.size(); ++q) Ua((off[e.left] + q) * na + i, p * na + j) += col(q);
                        }
                }
            }
    }
    return c;
}

Report corep_validate(const DqgSpec& s, const Corep& U, const VerifyOptions& opt)
{
    const Window w = make_window(s, opt.window_grow);
    const std::string win = w.describe(s);
    const int d = U.hdim();
    Report r;
    r.title = "corep";

    Probe unit("U blockwise unitary", opt.tol);
    for (BlockId a : w.J) {
        const Mat* Ua = U.U.blocks.find(a);
        if (!Ua) {
            unit.observe(1.0);
            continue;
        }
        const int n = d * s.dim(a);
        if (Ua->rows() != n || Ua->cols() != n) throw StructuralError("corep block " + s.label(a) + " has wrong shape");
        unit.observe(std::max((*Ua * Ua->adjoint() - identity(n)).cwiseAbs().maxCoeff(),
                              (Ua->adjoint() * *Ua - identity(n)).cwiseAbs().maxCoeff()));
    }
    r.add(unit.finish(win));

    Probe comult("(id x Delta)(U) = U12 U13", opt.tol);
    for (BlockId a : w.J)
        for (BlockId b : w.J) {
            if (!s.pair_complete(a, b)) {
                comult.skip("pair " + s.pair_label(a, b) + " not certified");
                continue;
            }
            const int na = s.dim(a), nb = s.dim(b);
            Mat lhs = Mat::Zero(d * na * nb, d * na * nb);
            for (int idx : s.entries_into(a, b)) {
                const HomEntry& e = s.delta[idx];
                const Mat* Ug = U.U.blocks.find(e.target);
                if (Ug) lhs += hom_leg(*Ug, {d, s.dim(e.target)}, 1, e.isometry, e.mult, {na, nb});
            }
            const Mat* Ua = U.U.blocks.find(a);
            const Mat* Ub = U.U.blocks.find(b);
            if (!Ua || !Ub) {
                comult.observe(lhs.cwiseAbs().maxCoeff() + 1.0);
                continue;
            }
            const Mat u12 = kron(*Ua, identity(nb));
            const Mat u13 = permute_legs(kron(*Ub, identity(na)), {d, nb, na}, {0, 2, 1});
            comult.observe((lhs - u12 * u13).cwiseAbs().maxCoeff());
        }
    r.add(comult.finish(win));

    Probe anti("(id x S)(U(1 x a)) = (1 x S(a))U*", opt.tol);
    for (BlockId a : w.J)
        for (int k = 0; k < opt.samples; ++k) {
            Rng rng = Rng::for_case(opt.seed, "corep-antipode", {a, k});
            const Mat x = rng.gaussian(s.dim(a), s.dim(a));
            const Mat* Ua = U.U.blocks.find(a);
            const BlockId ap = s.pair(a);
            const Mat* Uap = U.U.blocks.find(ap);
            if (!Ua || !Uap) {
                anti.skip("missing block");
                continue;
            }
            const Mat lhs = map_leg(*Ua * kron(identity(d), x), {d, s.dim(a)}, 1, s.antipode[a].map, s.dim(ap));
            const Mat rhs = kron(identity(d), antipode_block(s, x, a)) * Uap->adjoint();
            anti.observe((lhs - rhs).cwiseAbs().maxCoeff() / (1.0 + x.cwiseAbs().maxCoeff()));
        }
    r.add(anti.finish(win));
    return r;
}

double certificate_residual(const ModuleVector& xi)
{
    if (xi.support.size() == 0) throw StructuralError("module vector has no support certificate");
    if (xi.support.rows() != xi.vec.size()) throw StructuralError("support certificate has wrong size");
    const Vec pre = xi.support.completeOrthogonalDecomposition().solve(xi.vec);
    return (xi.support * pre - xi.vec).norm() / (1.0 + xi.vec.norm());
}

void FreeModuleVector::add_term(const Vec& eta, const Element& a)
{
    if (eta.size() != static_cast<Eigen::Index>(coeffs.size()))
        throw StructuralError("free module term has wrong length");
    for (Eigen::Index k = 0; k < eta.size(); ++k)
        if (eta(k) != cplx(0.0)) coeffs[k] += eta(k) * a;
}

double free_distance(const FreeModuleVector& f, const FreeModuleVector& g)
{
    if (f.coeffs.size() != g.coeffs.size()) throw StructuralError("free module vectors of different length");
    double r = 0.0;
    for (std::size_t k = 0; k < f.coeffs.size(); ++k) r = std::max(r, distance(f.coeffs[k], g.coeffs[k]));
    return r;
}

Element free_inner(const DqgSpec& s, const HaarData& h, const FreeModuleVector& f, const FreeModuleVector& g)
{
    if (f.coeffs.size() != g.coeffs.size()) throw StructuralError("free module vectors of different length");
    Element out;
    for (std::size_t k = 0; k < f.coeffs.size(); ++k)
        if (!f.coeffs[k].empty() && !g.coeffs[k].empty()) out += convolve(s, h, sharp(s, h, f.coeffs[k]), g.coeffs[k]);
    return out.prune();
}

FreeModuleVector free_act(const DqgSpec& s, const HaarData& h, const FreeModuleVector& f, const Element& b)
{
    FreeModuleVector out = FreeModuleVector::zero(static_cast<int>(f.coeffs.size()));
    for (std::size_t k = 0; k < f.coeffs.size(); ++k)
        if (!f.coeffs[k].empty()) out.coeffs[k] = convolve(s, h, f.coeffs[k], b);
    return out;
}

namespace {

// At finite dimension a nondegenerate π has π(1) = 1, which certifies
// every vector of H.
ModuleVector apply_slice(const Corep& U, const Functional& f, const ModuleVector& xi)
{
    certificate_residual(xi);
    return {id_tensor_f(U.U, f) * xi.vec, identity(U.hdim())};
}

}  // namespace

ModuleVector module_act(const DqgSpec& s, const HaarData& h, const Corep& U, const ModuleVector& xi, const Element& a)
{
    const Element twisted = theta_right(h, theta_left(h, -1, antipode(s, a)), -2);
    return apply_slice(U, psi_embed(h, twisted), xi);
}

ModuleVector module_act_alt(const DqgSpec& s, const HaarData& h, const Corep& U, const ModuleVector& xi, const Element& a)
{
    return apply_slice(U, compose_antipode(s, psi_embed(h, theta_left(h, 1, a)), true), xi);
}

Element module_inner(const HaarData& h, const Corep& U, const ModuleVector& xi, const ModuleVector& eta)
{
    return theta_left(h, -1, slice_T(xi.vec, eta.vec, U.U));
}

FreeModuleVector sigma_map(const HaarData& h, const Corep& U, const Mat& pi_h, const ModuleVector& xi)
{
    certificate_residual(xi);
    const int d = U.hdim();
    FreeModuleVector out = FreeModuleVector::zero(d);
    const Mat row_op = pi_h.adjoint();
    for (int k = 0; k < d; ++k) out.coeffs[k] = theta_left(h, -1, slice_T(row_op.col(k), xi.vec, U.U));
    return out;
}

ModuleVector sigma_star(const DqgSpec& s, const HaarData& h, const Corep& U, const Mat& pi_h, const FreeModuleVector& f)
{
    const int d = U.hdim();
    ModuleVector out{Vec::Zero(d), identity(d)};
    for (int k = 0; k < d; ++k) {
        if (f.coeffs[k].empty()) continue;
        const ModuleVector ek{pi_h.col(k), pi_h};
        out.vec += module_act(s, h, U, ek, f.coeffs[k]).vec;
    }
    return out;
}

Report verify_theta_identities(const DqgSpec& s, const HaarData& h, const VerifyOptions& opt)
{
    const Window w = make_window(s, opt.window_grow);
    const std::string win = w.describe(s);
    const BlockLayout& L = s.layout;
    Report r;
    r.title = "theta identities";

    Probe id1("theta identity 1: psi_a o S^-1 = psi_(theta^-1 S(a) theta^-1)", opt.tol);
    Probe id2("theta identity 2: (theta^-1 x)*(theta^-1 y) = theta^-1 (x*y)", opt.tol);
    Probe id3("theta identity 3: (theta^-1 x)# = theta^-1 x#", opt.tol);
    Probe id3c("theta identity 3, corrected: (theta^-1 x)# = theta x#", opt.tol);
    Probe id4("theta identity 4: twisted S reverses convolution", opt.tol);

    auto twist = [&](const Element& a) { return theta_right(h, theta_left(h, -1, antipode(s, a)), -2); };
    for (BlockId ia : w.J)
        for (int k = 0; k < opt.samples; ++k) {
            Rng rng = Rng::for_case(opt.seed, "theta-single", {ia, k});
            const Element a = random_element(L, {ia}, rng);
            const double scale = 1.0 + a.max_abs();
            const Functional lhs = compose_antipode(s, psi_embed(h, a), true);
            const Functional rhs = psi_embed(h, theta_right(h, theta_left(h, -1, antipode(s, a)), -1));
            id1.observe(functional_distance(lhs, rhs) / scale);
            const Element sx = sharp(s, h, theta_left(h, -1, a));
            const Element xs = sharp(s, h, a);
            id3.observe(distance(sx, theta_left(h, -1, xs)) / scale);
            id3c.observe(distance(sx, theta_left(h, 1, xs)) / scale);
        }
    for (BlockId ia : w.J)
        for (BlockId ib : w.J)
            for (int k = 0; k < opt.samples; ++k) {
                Rng rng = Rng::for_case(opt.seed, "theta-pair", {ia, ib, k});
                const Element x = random_element(L, {ia}, rng);
                const Element y = random_element(L, {ib}, rng);
                const double scale = 1.0 + x.max_abs() * y.max_abs();
                try {
                    const Element lhs = convolve(s, h, theta_left(h, -1, x), theta_left(h, -1, y));
                    id2.observe(distance(lhs, theta_left(h, -1, convolve(s, h, x, y))) / scale);
                } catch (const WindowOverflow& e) {
                    id2.skip(e.what());
                }
                try {
                    const Element lhs = convolve(s, h, twist(y), twist(x));
                    id4.observe(distance(lhs, twist(convolve(s, h, x, y))) / scale);
                } catch (const WindowOverflow& e) {
                    id4.skip(e.what());
                }
            }
    for (const Probe* p : {&id1, &id2, &id3, &id3c, &id4}) r.add(p->finish(win));
    return r;
}

Report verify_module(const DqgSpec& s, const HaarData& h, const Corep& U, const Mat& pi_h, const VerifyOptions& opt)
{
    const Window w = make_window(s, opt.window_grow);
    const std::string win = w.describe(s);
    const BlockLayout& L = s.layout;
    const int d = U.hdim();
    if (pi_h.rows() != d || pi_h.cols() != d) throw StructuralError("pi(h) does not act on the corep space");
    Report r;
    r.title = "module";

    Probe cert("support certificates valid", 1e-10);
    Probe forms("both module-action forms agree", opt.tol);
    Probe assoc("(xi.a).b = xi.(a*b)", opt.tol);
    Probe inner_act("<xi, eta.a> = <xi, eta> * a", opt.tol);
    Probe herm("<xi, eta># = <eta, xi>", opt.tol);
    Probe iso("Sigma isometric: <Sigma xi, Sigma eta> = <xi, eta>", opt.tol);
    Probe equiv("Sigma(xi.a) = Sigma(xi) a", opt.tol);
    Probe adj("<Sigma xi, f> = <xi, Sigma* f>", opt.tol);
    Probe recon("Sigma* Sigma xi = xi", opt.tol);

    auto random_vector = [&](Rng& rng) { return ModuleVector{pi_h * rng.gaussian(d), pi_h}; };
    for (int k = 0; k < opt.samples; ++k)
        for (BlockId ia : w.J)
            for (BlockId ib : w.J) {
                Rng rng = Rng::for_case(opt.seed, "module", {ia, ib, k});
                const ModuleVector xi = random_vector(rng);
                const ModuleVector eta = random_vector(rng);
                const Element a = random_element(L, {ia}, rng);
                const Element b = random_element(L, {ib}, rng);
                const double sv = 1.0 + xi.vec.norm() * eta.vec.norm();
                const double sa = 1.0 + a.max_abs();
                const double sab = sa * (1.0 + b.max_abs());
                try {
                    cert.observe(certificate_residual(xi));
                    const ModuleVector xa = module_act(s, h, U, xi, a);
                    forms.observe((xa.vec - module_act_alt(s, h, U, xi, a).vec).norm() / (sa * (1.0 + xi.vec.norm())));
                    const Vec lhs = module_act(s, h, U, xa, b).vec;
                    const Vec rhs = module_act(s, h, U, xi, convolve(s, h, a, b)).vec;
                    assoc.observe((lhs - rhs).norm() / (sab * (1.0 + xi.vec.norm())));

                    const Element ie = module_inner(h, U, xi, eta);
                    const Element lhs2 = module_inner(h, U, xi, module_act(s, h, U, eta, a));
                    inner_act.observe(distance(lhs2, convolve(s, h, ie, a)) / (sa * sv));
                    herm.observe(distance(sharp(s, h, ie), module_inner(h, U, eta, xi)) / sv);

                    const FreeModuleVector sx = sigma_map(h, U, pi_h, xi);
                    const FreeModuleVector se = sigma_map(h, U, pi_h, eta);
                    iso.observe(distance(free_inner(s, h, sx, se), ie) / sv);
                    equiv.observe(free_distance(sigma_map(h, U, pi_h, xa), free_act(s, h, sx, a)) / (sa * sv));

                    FreeModuleVector f = FreeModuleVector::zero(d);
                    f.add_term(rng.gaussian(d), a);
                    f.add_term(rng.gaussian(d), b);
                    const Element l3 = free_inner(s, h, sx, f);
                    const Element r3 = module_inner(h, U, xi, sigma_star(s, h, U, pi_h, f));
                    adj.observe(distance(l3, r3) / (sab * sv));
                    recon.observe((sigma_star(s, h, U, pi_h, sx).vec - xi.vec).norm() / (1.0 + xi.vec.norm()));
                } catch (const WindowOverflow& e) {
                    for (Probe* p : {&forms, &assoc, &inner_act, &herm, &iso, &equiv, &adj, &recon}) p->skip(e.what());
                }
            }
    for (const Probe* p : {&cert, &forms, &assoc, &inner_act, &herm, &iso, &equiv, &adj, &recon}) r.add(p->finish(win));

    if (s.is_finite()) {
        // ⟨ξ_i, ξ_j⟩ is positive in M_n(Â₀) ⟺ [L(⟨ξ_i, ξ_j⟩)] ⪰ 0 in the
        // left regular representation on L²(φ).
        const auto basis = matrix_unit_basis(L, L.all());
        Probe gram("Gram of <xi_i, xi_j> positive semidefinite", 1e-10);
        constexpr int family = 3;
        for (int k = 0; k < opt.samples; ++k) {
            Rng rng = Rng::for_case(opt.seed, "module-gram", {k});
            std::vector<ModuleVector> xs;
            for (int i = 0; i < family; ++i) xs.push_back(random_vector(rng));
            std::vector<Mat> blocks;
            int m = 0;
            for (int i = 0; i < family; ++i)
                for (int j = 0; j < family; ++j) {
                    blocks.push_back(left_regular(s, h, module_inner(h, U, xs[i], xs[j]), basis).matrix);
                    m = static_cast<int>(blocks.back().rows());
                }
            Mat big(family * m, family * m);
            for (int i = 0; i < family; ++i)
                for (int j = 0; j < family; ++j) big.block(i * m, j * m, m, m) = blocks[i * family + j];
            const double top = std::max(1.0, big.cwiseAbs().maxCoeff());
            gram.observe(std::max(0.0, -min_eigenvalue(hermitian_part(big))) / top);
            gram.observe((big - big.adjoint()).cwiseAbs().maxCoeff() / top);
        }
        r.add(gram.finish("all blocks"));
    } else {
        r.skipped("Gram of <xi_i, xi_j> positive semidefinite", "left regular representation needs a finite spec");
    }
    r.merge(verify_theta_identities(s, h, opt));
    return r;
}

}  // namespace dqg
