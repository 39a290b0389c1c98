#include "dqg/dual.hpp"

#include "dqg/rng.hpp"

namespace dqg {

Element convolve(const DqgSpec& s, const HaarData& h, const Element& a, const Element& b)
{
    const TensorElement y = antipode_leg(s, galois_t1(s, a, antipode(s, b)), 1, true);
    return id_tensor_f(y, psi_functional(h), 1);
}

Element convolve_second_form(const DqgSpec& s, const HaarData& h, const Element& a, const Element& b)
{
    // (a ⊗ 1)(S ⊗ id)Δ(b) = (S ⊗ id)(Δ(b)(S⁻¹(a) ⊗ 1)), and
    // Δ(b)(x ⊗ 1) = ((x* ⊗ 1)Δ(b*))*.
    const Element x = antipode(s, a, true);
    const TensorElement y = galois_t2(s, x.adjoint(), b.adjoint()).adjoint();
    return id_tensor_f(antipode_leg(s, y, 0), phi_functional(h), 0);
}

Element sharp(const DqgSpec& s, const HaarData& h, const Element& a)
{
    return theta_left(h, -2, antipode(s, a.adjoint(), true));
}

Functional func_convolve(const DqgSpec& s, const Functional& f, const Functional& g)
{
    Functional out;
    for (const auto& [al, F] : f.densities)
        for (const auto& [be, G] : g.densities) {
            s.require_pair(al, be, "functional convolution");
            const Mat FG = kron(F, G);
            for (int k : s.entries_into(al, be)) {
                const HomEntry& e = s.delta[k];
                const Mat P = e.isometry.adjoint() * FG * e.isometry;
                out.densities.add(e.target, slice_leg(P, {s.dim(e.target), e.mult}, 1, identity(e.mult)));
            }
        }
    out.densities.prune();
    return out;
}

Functional func_star(const DqgSpec& s, const Functional& f)
{
    Functional out;
    for (const auto& [be, F] : f.densities) {
        const BlockId al = s.pair(be);
        out.densities.set(al, pullback_density(F.adjoint(), s.antipode[al].map, s.dim(al)));
    }
    return out;
}

Functional psi_embed(const HaarData& h, const Element& a)
{
    Functional out;
    for (const auto& [b, m] : a) out.densities.set(b, h.c_alpha.at(b) * h.K.at(b) * m);
    return out;
}

Functional compose_antipode(const DqgSpec& s, const Functional& f, bool inverse)
{
    Functional out;
    for (const auto& [be, F] : f.densities) {
        const BlockId al = s.pair(be);
        const Mat& map = inverse ? s.antipode_inverse_map(al) : s.antipode[al].map;
        out.densities.set(al, pullback_density(F, map, s.dim(al)));
    }
    return out;
}

double functional_distance(const Functional& f, const Functional& g)
{
    return distance(f.densities, g.densities);
}

std::vector<Element> matrix_unit_basis(const BlockLayout& layout, const std::vector<BlockId>& J)
{
    std::vector<Element> out;
    for (BlockId b : J)
        for (int i = 0; i < layout.dim(b); ++i)
            for (int j = 0; j < layout.dim(b); ++j) out.push_back(layout.unit(b, i, j));
    return out;
}

LeftRegular left_regular(const DqgSpec& s, const HaarData& h, const Element& a, const std::vector<Element>& basis)
{
    const int n = static_cast<int>(basis.size());
    Mat G(n, n), M(n, n);
    std::vector<Element> images;
    for (const Element& b : basis) images.push_back(convolve(s, h, a, b));
    for (int i = 0; i < n; ++i) {
        const Element bi = basis[i].adjoint();
        for (int j = 0; j < n; ++j) {
            G(i, j) = phi(h, bi * basis[j]);
            M(i, j) = phi(h, bi * images[j]);
        }
    }
    Eigen::SelfAdjointEigenSolver<Mat> es(hermitian_part(G));
    std::vector<int> keep;
    for (int i = 0; i < n; ++i)
        if (es.eigenvalues()(i) > 1e-10) keep.push_back(i);
    Mat W(n, static_cast<Eigen::Index>(keep.size()));
    for (std::size_t k = 0; k < keep.size(); ++k)
        W.col(k) = es.eigenvectors().col(keep[k]) / std::sqrt(es.eigenvalues()(keep[k]));
    LeftRegular out;
    out.matrix = W.adjoint() * M * W;
    out.norm = opnorm(out.matrix);
    out.rank = static_cast<int>(keep.size());
    out.pruned = n - out.rank;
    return out;
}

Report verify_dual(const DqgSpec& s, const HaarData& h, const VerifyOptions& opt)
{
    const Window w = make_window(s, opt.window_grow);
    const std::string win = w.describe(s);
    const auto& J = w.J;
    const BlockLayout& L = s.layout;
    Report r;
    r.title = "dual";

    Probe assoc("convolution associative (a*b)*c = a*(b*c)", opt.tol);
    Probe forms("both convolution forms agree", opt.tol);
    Probe anti("(a*b)# = b# * a#", opt.tol);
    Probe invol("a## = a", opt.tol);
    Probe conj("(z a)# = conj(z) a#", opt.tol);
    Probe fconv("psi_a * psi_b = psi_(a*b)", opt.tol);
    Probe fstar("psi_a^* = psi_(a#)", opt.tol);
    Probe fss("f** = f", opt.tol);
    Probe eps_unit("eps * g = g", opt.tol);
    Probe gram("phi-Gram positive semidefinite", opt.tol);

    const Functional psi_f = psi_functional(h);
    for (BlockId ia : J)
        for (BlockId ib : J)
            for (int k = 0; k < opt.samples; ++k) {
                Rng rng = Rng::for_case(opt.seed, "dual-pair", {ia, ib, k});
                const Element a = random_element(L, {ia}, rng);
                const Element b = random_element(L, {ib}, rng);
                const double scale = 1.0 + a.max_abs() * b.max_abs();
                try {
                    const Element ab = convolve(s, h, a, b);
                    forms.observe(distance(ab, convolve_second_form(s, h, a, b)) / scale);
                    const Element rhs = convolve(s, h, sharp(s, h, b), sharp(s, h, a));
                    anti.observe(distance(sharp(s, h, ab), rhs) / scale);
                    const Functional lhs = func_convolve(s, psi_embed(h, a), psi_embed(h, b));
                    fconv.observe(functional_distance(lhs, psi_embed(h, ab)) / scale);
                } catch (const WindowOverflow& e) {
                    forms.skip(e.what());
                    anti.skip(e.what());
                    fconv.skip(e.what());
                }
                try {
                    Functional g;
                    g.densities = b;
                    eps_unit.observe(functional_distance(func_convolve(s, s.counit, g), g) / scale);
                } catch (const WindowOverflow& e) {
                    eps_unit.skip(e.what());
                }
            }

    for (BlockId ia : J)
        for (BlockId ib : J)
            for (BlockId ic : J)
                for (int k = 0; k < opt.samples; ++k) {
                    Rng rng = Rng::for_case(opt.seed, "dual-triple", {ia, ib, ic, k});
                    const Element a = random_element(L, {ia}, rng);
                    const Element b = random_element(L, {ib}, rng);
                    const Element c = random_element(L, {ic}, rng);
                    const double scale = 1.0 + a.max_abs() * b.max_abs() * c.max_abs();
                    try {
                        const Element lhs = convolve(s, h, convolve(s, h, a, b), c);
                        const Element rhs = convolve(s, h, a, convolve(s, h, b, c));
                        assoc.observe(distance(lhs, rhs) / scale);
                    } catch (const WindowOverflow& e) {
                        assoc.skip(e.what());
                    }
                }

    for (BlockId ia : J)
        for (int k = 0; k < opt.samples; ++k) {
            Rng rng = Rng::for_case(opt.seed, "dual-single", {ia, k});
            const Element a = random_element(L, {ia}, rng);
            const cplx z = rng.cnormal();
            const double scale = 1.0 + a.max_abs();
            invol.observe(distance(sharp(s, h, sharp(s, h, a)), a) / scale);
            conj.observe(distance(sharp(s, h, z * a), std::conj(z) * sharp(s, h, a)) / (scale * (1.0 + std::abs(z))));
            fstar.observe(functional_distance(func_star(s, psi_embed(h, a)), psi_embed(h, sharp(s, h, a))) / scale);
            Functional f;
            f.densities = random_element(L, {ia}, rng);
            fss.observe(functional_distance(func_star(s, func_star(s, f)), f) / (1.0 + f.densities.max_abs()));
        }

    for (int k = 0; k < opt.samples; ++k) {
        Rng rng = Rng::for_case(opt.seed, "dual-gram", {k});
        std::vector<Element> fam;
        for (int i = 0; i < 4; ++i) fam.push_back(random_element(L, J, rng));
        Mat G(4, 4);
        double top = 1.0;
        for (int i = 0; i < 4; ++i)
            for (int j = 0; j < 4; ++j) {
                G(i, j) = phi(h, fam[i].adjoint() * fam[j]);
                top = std::max(top, std::abs(G(i, j)));
            }
        gram.observe(std::max(0.0, -min_eigenvalue(G)) / top);
    }

    r.pass_fail("eps* = eps", functional_distance(func_star(s, s.counit), s.counit), opt.tol, win);
    for (const Probe* p : {&assoc, &forms, &anti, &invol, &conj, &fconv, &fstar, &fss, &eps_unit, &gram})
        r.add(p->finish(win));

    if (s.is_finite()) {
        const auto basis = matrix_unit_basis(L, L.all());
        Probe adj("left_regular(a#) = left_regular(a)^dagger in L2(phi)", opt.tol);
        Probe gns("eps(x# * y) positive semidefinite", opt.tol);
        double norm_bound = 0.0;
        for (int k = 0; k < opt.samples; ++k) {
            Rng rng = Rng::for_case(opt.seed, "dual-regular", {k});
            const Element a = random_element(L, L.all(), rng);
            const LeftRegular la = left_regular(s, h, a, basis);
            const LeftRegular ls = left_regular(s, h, sharp(s, h, a), basis);
            adj.observe((ls.matrix - la.matrix.adjoint()).cwiseAbs().maxCoeff() / (1.0 + la.norm));
            norm_bound = std::max(norm_bound, la.norm / (1.0 + a.opnorm()));
        }
        const int n = static_cast<int>(basis.size());
        Mat E(n, n);
        for (int i = 0; i < n; ++i) {
            const Element si = sharp(s, h, basis[i]);
            for (int j = 0; j < n; ++j) E(i, j) = counit(s, convolve(s, h, si, basis[j]));
        }
        gns.observe(std::max(0.0, -min_eigenvalue(E)) / std::max(1.0, E.cwiseAbs().maxCoeff()));
        gns.observe((E - E.adjoint()).cwiseAbs().maxCoeff() / std::max(1.0, E.cwiseAbs().maxCoeff()));
        r.add(adj.finish("all blocks"));
        r.add(gns.finish("all blocks"));
        r.info("left_regular norm / (1 + opnorm) on samples", norm_bound, "reduced-norm lower bound");
    } else {
        r.skipped("left_regular(a#) = left_regular(a)^dagger in L2(phi)", "span of a truncated window is not invariant");
    }
    return r;
}

}  // namespace dqg
