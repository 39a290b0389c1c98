#include "dqg/assembly.hpp"

#include <cmath>
#include <cstdio>

#include "dqg/rng.hpp"

namespace dqg {

Coaction self_coaction(const DqgSpec& s, const Element& h)
{
    return {s.layout, s.delta, h};
}

Coaction trivial_coaction(const DqgSpec& s, int m, const Element& h)
{
    Coaction co;
    co.algebra = BlockLayout({{"C", m}});
    for (BlockId b : s.layout.all()) co.delta.push_back({0, 0, b, s.dim(b), identity(m * s.dim(b))});
    co.h = h;
    return co;
}

Mat represent(const Representation& pi, const Element& c)
{
    Mat out = Mat::Zero(pi.hdim, pi.hdim);
    for (const auto& [mu, x] : c) out += pi.W.at(mu) * kron(x, identity(pi.mult.at(mu))) * pi.W.at(mu).adjoint();
    return out;
}

Element unit_cutoff(const DqgSpec& s, const HaarData& h, const Coaction& co)
{
    // For coactions with (id ⊗ φ)Δ_C(1) = φ(1)1.
    const double mass = phi(h, s.layout.one()).real();
    return (1.0 / std::sqrt(mass)) * co.algebra.one();
}

Element counit_cutoff(const DqgSpec& s, const HaarData& h)
{
    BlockId eps = -1;
    for (const auto& [b, m] : s.counit.densities) eps = b;
    if (eps < 0) throw StructuralError("counit has no support");
    const Element e = s.layout.central(eps);
    return (1.0 / std::sqrt(phi(h, e).real())) * e;
}

Cycle regular_cycle(const DqgSpec& s, const HaarData& h, const Mat& F, const Element& cutoff)
{
    Cycle cy;
    cy.kind = "regular";
    cy.rep.corep = regular_corep(s, h);
    const int d = cy.rep.corep.hdim();
    cy.rep.pi.hdim = d;
    int off = 0;
    for (BlockId b : s.layout.all()) {
        const int n = s.dim(b);
        Mat W = Mat::Zero(d, n * n);
        W.block(off, 0, n * n, n * n) = identity(n * n);
        cy.rep.pi.W.push_back(W);
        cy.rep.pi.mult.push_back(n);
        off += n * n;
    }
    cy.rep.F = F;
    cy.coaction = self_coaction(s, cutoff);
    return cy;
}

Cycle character_cycle(const DqgSpec& s, const HaarData& h, const Element& u, const Mat& F)
{
    Cycle cy;
    cy.kind = "character";
    cy.rep.corep = character_corep(u);
    cy.rep.pi = {1, {identity(1)}, {1}};
    cy.rep.F = F;
    cy.coaction = trivial_coaction(s, 1, Element{});
    cy.coaction.h = unit_cutoff(s, h, cy.coaction);
    return cy;
}

Cycle trivial_cycle(const DqgSpec& s, const HaarData& h, int m, const Mat& F)
{
    Cycle cy;
    cy.kind = "trivial";
    cy.rep.corep = trivial_corep(s.layout, m);
    cy.rep.pi = {m, {identity(m)}, {1}};
    cy.rep.F = F;
    cy.coaction = trivial_coaction(s, m, Element{});
    cy.coaction.h = unit_cutoff(s, h, cy.coaction);
    return cy;
}

namespace {

// Δ_C(x) on the block (ν, β).
std::map<BlockPair, Mat> coaction_blocks(const Coaction& co, const Element& x)
{
    std::map<BlockPair, Mat> out;
    for (const HomEntry& e : co.delta) {
        const Mat* xm = x.find(e.target);
        if (!xm) continue;
        const Mat y = delta_component(e, *xm);
        auto [it, fresh] = out.try_emplace({e.left, e.right}, y);
        if (!fresh) it->second += y;
    }
    return out;
}

}  // namespace

Element coaction_phi_slice(const DqgSpec& s, const HaarData& h, const Coaction& co, const Element& x)
{
    Element out;
    for (const auto& [key, y] : coaction_blocks(co, x)) {
        const int k = co.algebra.dim(key.first);
        out.add(key.first, slice_leg(y, {k, s.dim(key.second)}, 1, h.K_inv.at(key.second)));
    }
    return out;
}

double a3_residual(const DqgSpec& s, const HaarData& h, const Coaction& co, const Element& cutoff)
{
    return distance(coaction_phi_slice(s, h, co, cutoff * cutoff), co.algebra.one());
}

Report coaction_validate(const DqgSpec& s, const HaarData& h, const Coaction& co, const VerifyOptions& opt)
{
    const Window w = make_window(s, opt.window_grow);
    const std::string win = w.describe(s);
    const BlockLayout& C = co.algebra;
    Report r;
    r.title = "coaction";

    for (const HomEntry& e : co.delta) {
        if (e.target < 0 || e.target >= C.size() || e.left < 0 || e.left >= C.size() || e.right < 0 || e.right >= s.size())
            throw StructuralError("coaction entry refers to an unknown block");
        if (e.isometry.rows() != C.dim(e.left) * s.dim(e.right) || e.isometry.cols() != C.dim(e.target) * e.mult)
            throw StructuralError("coaction isometry has wrong shape");
    }

    // A1/A2: Δ_C(c)(c′ ⊗ 1) lives on the listed blocks and Δ_C(1) = 1 ⊗ 1.
    Probe cover("A1/A2 support and nondegeneracy: Delta_C(1) = 1 x 1", opt.tol);
    for (BlockId nu : C.all())
        for (BlockId b : w.J) {
            const int n = C.dim(nu) * s.dim(b);
            Mat sum = Mat::Zero(n, n);
            for (const HomEntry& e : co.delta)
                if (e.left == nu && e.right == b) sum += e.isometry * e.isometry.adjoint();
            cover.observe((sum - identity(n)).cwiseAbs().maxCoeff());
        }
    r.add(cover.finish(win));

    Probe iso("coaction isometries", opt.tol);
    for (const HomEntry& e : co.delta)
        iso.observe((e.isometry.adjoint() * e.isometry - identity(static_cast<int>(e.isometry.cols()))).cwiseAbs().maxCoeff());
    r.add(iso.finish());

    r.pass_fail("A3: (id x phi)(Delta_C(h^2)) = 1", a3_residual(s, h, co, co.h), opt.tol, "all listed blocks");
    Probe pos("h positive", opt.tol);
    for (const auto& [mu, x] : co.h) {
        pos.observe((x - x.adjoint()).cwiseAbs().maxCoeff());
        pos.observe(std::max(0.0, -min_eigenvalue(hermitian_part(x))));
    }
    r.add(pos.finish());

    Probe coassoc("(Delta_C x id)Delta_C = (id x Delta)Delta_C", opt.tol);
    for (BlockId mu : C.all())
        for (int k = 0; k < opt.samples; ++k) {
            Rng rng = Rng::for_case(opt.seed, "coaction-coassoc", {mu, k});
            const Element x = random_element(C, {mu}, rng);
            const auto D = coaction_blocks(co, x);
            for (BlockId nu2 : C.all())
                for (BlockId b1 : w.J)
                    for (BlockId b2 : w.J) {
                        if (!s.pair_complete(b1, b2)) {
                            coassoc.skip("pair " + s.pair_label(b1, b2) + " not certified");
                            continue;
                        }
                        const int n = C.dim(nu2) * s.dim(b1) * s.dim(b2);
                        Mat lhs = Mat::Zero(n, n), rhs = Mat::Zero(n, n);
                        for (const HomEntry& e : co.delta) {
                            if (e.left != nu2 || e.right != b1) continue;
                            auto it = D.find({e.target, b2});
                            if (it == D.end()) continue;
                            lhs += hom_leg(it->second, {C.dim(e.target), s.dim(b2)}, 0, e.isometry, e.mult,
                                           {C.dim(nu2), s.dim(b1)});
                        }
                        for (int idx : s.entries_into(b1, b2)) {
                            const HomEntry& e = s.delta[idx];
                            auto it = D.find({nu2, e.target});
                            if (it == D.end()) continue;
                            rhs += hom_leg(it->second, {C.dim(nu2), s.dim(e.target)}, 1, e.isometry, e.mult,
                                           {s.dim(b1), s.dim(b2)});
                        }
                        coassoc.observe((lhs - rhs).cwiseAbs().maxCoeff() / (1.0 + x.max_abs()));
                    }
        }
    r.add(coassoc.finish(win));
    return r;
}

Report cycle_validate(const DqgSpec& s, const Cycle& cy, const VerifyOptions& opt)
{
    const Window w = make_window(s, opt.window_grow);
    const std::string win = w.describe(s);
    const Representation& pi = cy.rep.pi;
    const BlockLayout& C = cy.coaction.algebra;
    const int d = cy.rep.corep.hdim();
    if (pi.hdim != d) throw StructuralError("representation and corep act on spaces of different dimension");
    if (static_cast<int>(pi.W.size()) != C.size() || pi.mult.size() != pi.W.size())
        throw StructuralError("representation needs one isometry per block of C");
    for (BlockId mu : C.all())
        if (pi.W[mu].rows() != d || pi.W[mu].cols() != C.dim(mu) * pi.mult[mu])
            throw StructuralError("representation isometry for block " + C.label(mu) + " has wrong shape");
    if (cy.rep.F.rows() != d || cy.rep.F.cols() != d) throw StructuralError("F does not act on H");

    Report r;
    r.title = "cycle";
    r.pass_fail("F hermitian", (cy.rep.F - cy.rep.F.adjoint()).cwiseAbs().maxCoeff(), opt.tol);
    Probe iso("pi isometries", opt.tol);
    for (const Mat& W : pi.W) iso.observe((W.adjoint() * W - identity(static_cast<int>(W.cols()))).cwiseAbs().maxCoeff());
    r.add(iso.finish());
    r.pass_fail("pi nondegenerate: pi(1) = 1", (represent(pi, C.one()) - identity(d)).cwiseAbs().maxCoeff(), opt.tol);

    Probe cov("covariance (pi x id)Delta_C(c) = U(pi(c) x 1)U*", opt.tol);
    for (BlockId mu : C.all())
        for (int k = 0; k < opt.samples; ++k) {
            Rng rng = Rng::for_case(opt.seed, "cycle-covariance", {mu, k});
            const Element x = random_element(C, {mu}, rng);
            const auto D = coaction_blocks(cy.coaction, x);
            const Mat px = represent(pi, x);
            for (BlockId b : w.J) {
                const Mat* Ub = cy.rep.corep.U.blocks.find(b);
                if (!Ub) {
                    cov.skip("corep has no block " + s.label(b));
                    continue;
                }
                const int n = s.dim(b);
                Mat lhs = Mat::Zero(d * n, d * n);
                for (BlockId nu : C.all()) {
                    auto it = D.find({nu, b});
                    if (it == D.end()) continue;
                    lhs += hom_leg(it->second, {C.dim(nu), n}, 0, pi.W[nu], pi.mult[nu], {d});
                }
                const Mat rhs = *Ub * kron(px, identity(n)) * Ub->adjoint();
                cov.observe((lhs - rhs).cwiseAbs().maxCoeff() / (1.0 + x.max_abs()));
            }
        }
    r.add(cov.finish(win));
    r.merge(corep_validate(s, cy.rep.corep, opt));
    return r;
}

namespace {

Mat f_prime_on(const HaarData& h, const Corep& U, const Mat& M, const std::vector<BlockId>& J)
{
    RepBlockMatrix X{U.hdim(), {}};
    for (BlockId a : J) {
        const Mat* Ua = U.U.blocks.find(a);
        if (!Ua) continue;
        const int n = static_cast<int>(Ua->rows()) / U.hdim();
        X.blocks.set(a, *Ua * kron(M, identity(n)) * Ua->adjoint());
    }
    return id_tensor_phi_trunc(X, h, J);
}

}  // namespace

FPrime f_prime(const DqgSpec& s, const HaarData& h, const Cycle& cy, const Element& cutoff, int window_grow)
{
    const Mat ph = represent(cy.rep.pi, cutoff);
    const Mat M = ph * cy.rep.F * ph;
    const auto J1 = s.is_finite() ? s.layout.all() : make_window(s, window_grow).J;
    const auto J2 = s.is_finite() ? s.layout.all() : make_window(s, window_grow + 1).J;
    FPrime out;
    out.F = f_prime_on(h, cy.rep.corep, M, J1);
    if (J2 != J1) {
        out.stabilization = (f_prime_on(h, cy.rep.corep, M, J2) - out.F).cwiseAbs().maxCoeff();
        if (out.stabilization > 1e-12)
            throw WindowOverflow({J2.back(), J2.back()}, "averaged operator does not stabilize on the window");
    }
    return out;
}

double equivariance_residual(const Corep& U, const Mat& X)
{
    double r = 0.0;
    for (const auto& [a, Ua] : U.U.blocks) {
        const int n = static_cast<int>(Ua.rows()) / U.hdim();
        const Mat x1 = kron(X, identity(n));
        r = std::max(r, (Ua * x1 * Ua.adjoint() - x1).cwiseAbs().maxCoeff());
    }
    return r;
}

RepBlockMatrix conv_action(const DqgSpec& s, const HaarData& h, const RepBlockMatrix& X, const Element& b)
{
    const Functional f = compose_antipode(s, psi_embed(h, b), true);
    const int d = X.hdim;
    RepBlockMatrix out{d, {}};
    for (const auto& [a, xa] : X.blocks)
        for (int idx : s.entries_from(a)) {
            const HomEntry& e = s.delta[idx];
            const Mat* dens = f.densities.find(e.right);
            if (!dens) continue;
            const int ng = s.dim(e.left), nb = s.dim(e.right);
            const Mat z = hom_leg(xa, {d, s.dim(a)}, 1, e.isometry, e.mult, {ng, nb});
            out.blocks.add(e.left, slice_leg(z, {d, ng, nb}, 2, *dens));
        }
    out.blocks.prune();
    return out;
}

CompactWitness compact_witness(const DqgSpec& s, const HaarData& h, const Cycle& cy, const Mat& T,
                               const Element& cutoff, const VerifyOptions& opt)
{
    const Corep& U = cy.rep.corep;
    const int d = U.hdim();
    const Mat ph = represent(cy.rep.pi, cutoff);
    const auto J = s.is_finite() ? s.layout.all() : make_window(s, opt.window_grow).J;
    CompactWitness out;
    out.equivariance = equivariance_residual(U, T);

    RepBlockMatrix Y{d, {}};
    for (BlockId a : J) {
        const Mat* Ua = U.U.blocks.find(a);
        if (!Ua) continue;
        const int n = s.dim(a);
        const Mat ya = kron(ph, h.theta_inv[a]) * *Ua * kron(T * ph, identity(n));
        Y.blocks.set(a, ya);
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) {
                Mat B(d, d);
                for (int k = 0; k < d; ++k)
                    for (int l = 0; l < d; ++l) B(k, l) = ya(k * n + i, l * n + j);
                if (B.norm() > kPruneTol) out.witnesses.push_back({a, i, j, B});
            }
    }

    const double scale = 1.0 + opnorm(T);
    for (BlockId a : J)
        for (int k = 0; k < opt.samples; ++k) {
            Rng rng = Rng::for_case(opt.seed, "compact-witness", {a, k});
            const Vec eta = rng.gaussian(d);
            const Element x = random_element(s.layout, {a}, rng);
            const double sc = scale * (1.0 + eta.norm()) * (1.0 + x.max_abs());
            try {
                FreeModuleVector in = FreeModuleVector::zero(d);
                in.add_term(eta, x);
                const ModuleVector xi = sigma_star(s, h, U, ph, in);
                const FreeModuleVector lhs = sigma_map(h, U, ph, {T * xi.vec, identity(d)});
                FreeModuleVector rhs = FreeModuleVector::zero(d);
                for (const Witness& wt : out.witnesses)
                    rhs.add_term(wt.B * eta, convolve(s, h, s.layout.unit(wt.block, wt.i, wt.j), x));
                out.identity_residual = std::max(out.identity_residual, free_distance(lhs, rhs) / sc);
                const RepBlockMatrix YX = conv_action(s, h, Y, x);
                FreeModuleVector via = FreeModuleVector::zero(d);
                for (int q = 0; q < d; ++q) via.coeffs[q] = slice_T(Vec::Unit(d, q), eta, YX);
                out.conv_residual = std::max(out.conv_residual, free_distance(lhs, via) / sc);
            } catch (const WindowOverflow&) {
            }
        }

    Mat P = Mat::Zero(d, d);
    for (const Mat& W : cy.rep.pi.W) P += W * W.adjoint();
    const BlockLayout& C = cy.coaction.algebra;
    for (BlockId mu : C.all())
        for (int i = 0; i < C.dim(mu); ++i)
            for (int j = 0; j < C.dim(mu); ++j) {
                const Mat M = T * represent(cy.rep.pi, C.unit(mu, i, j));
                out.support_residual = std::max(out.support_residual, ((identity(d) - P) * M).cwiseAbs().maxCoeff());
            }
    return out;
}

namespace {

void add_witness_checks(Report& r, const std::string& what, const CompactWitness& cw, double tol)
{
    r.pass_fail(what + " equivariant", cw.equivariance, tol);
    r.pass_fail(what + " witness decomposition Sigma T Sigma* = sum B x L_e", cw.identity_residual, tol, "",
                std::to_string(cw.witnesses.size()) + " witnesses");
    r.pass_fail(what + " witness decomposition through conv_action", cw.conv_residual, tol);
    r.pass_fail(what + " proper support T pi(c) in pi(C)B(H)", cw.support_residual, tol);
}

std::vector<ModuleVector> module_basis_of(const Cycle& cy)
{
    const BlockLayout& C = cy.coaction.algebra;
    const int d = cy.rep.corep.hdim();
    std::vector<ModuleVector> cand;
    for (BlockId mu : C.all())
        for (int i = 0; i < C.dim(mu); ++i)
            for (int j = 0; j < C.dim(mu); ++j) {
                const Mat pc = represent(cy.rep.pi, C.unit(mu, i, j));
                for (int k = 0; k < d; ++k) cand.push_back({pc.col(k), pc});
            }
    Mat stack(d, static_cast<Eigen::Index>(cand.size()));
    for (std::size_t c = 0; c < cand.size(); ++c) stack.col(c) = cand[c].vec;
    Eigen::ColPivHouseholderQR<Mat> qr(stack);
    qr.setThreshold(1e-10);
    std::vector<ModuleVector> basis;
    const auto perm = qr.colsPermutation().indices();
    for (Eigen::Index c = 0; c < qr.rank(); ++c) basis.push_back(cand[perm(c)]);
    return basis;
}

}  // namespace

AssemblyClassRep assembly_class(const DqgSpec& s, const HaarData& h, const Cycle& cy, const VerifyOptions& opt)
{
    AssemblyClassRep out;
    Report& r = out.report;
    r.title = "assembly";
    r.merge(coaction_validate(s, h, cy.coaction, opt));
    r.merge(cycle_validate(s, cy, opt));

    const Corep& U = cy.rep.corep;
    const int d = U.hdim();
    const Mat& F = cy.rep.F;
    const FPrime fp = f_prime(s, h, cy, cy.coaction.h, opt.window_grow);
    out.Fprime = fp.F;
    const double normF = opnorm(F);
    r.pass_fail("F' hermitian", (fp.F - fp.F.adjoint()).cwiseAbs().maxCoeff(), opt.tol);
    r.pass_fail("F' equivariant: U(F' x 1)U* = F' x 1", equivariance_residual(U, fp.F), opt.tol);
    const Mat Fh = hermitian_part(fp.F);
    r.pass_fail("-|F| <= F' <= |F|",
                std::max(0.0, std::max(-min_eigenvalue(normF * identity(d) - Fh), -min_eigenvalue(normF * identity(d) + Fh))),
                opt.tol);
    r.info("F' window stabilization", fp.stabilization);

    out.module_basis = module_basis_of(cy);
    const int m = static_cast<int>(out.module_basis.size());
    Probe gh("module Gram #-hermitian", opt.tol);
    out.gram.assign(m, std::vector<Element>(m));
    for (int i = 0; i < m; ++i)
        for (int j = 0; j < m; ++j) out.gram[i][j] = module_inner(h, U, out.module_basis[i], out.module_basis[j]);
    for (int i = 0; i < m; ++i)
        for (int j = 0; j < m; ++j) gh.observe(distance(sharp(s, h, out.gram[i][j]), out.gram[j][i]));
    r.add(gh.finish());

    Mat Bm(d, m);
    for (int i = 0; i < m; ++i) Bm.col(i) = out.module_basis[i].vec;
    out.Fprime_matrix = Bm.completeOrthogonalDecomposition().solve(fp.F * Bm);
    r.pass_fail("F' preserves the module span", (Bm * out.Fprime_matrix - fp.F * Bm).cwiseAbs().maxCoeff(), opt.tol);

    Probe sa("F' module self-adjoint: <xi, F' eta> = <F' xi, eta>", opt.tol);
    for (int i = 0; i < m; ++i)
        for (int j = 0; j < m; ++j) {
            const ModuleVector fi{fp.F * out.module_basis[i].vec, identity(d)};
            const ModuleVector fj{fp.F * out.module_basis[j].vec, identity(d)};
            sa.observe(distance(module_inner(h, U, out.module_basis[i], fj), module_inner(h, U, fi, out.module_basis[j])));
        }
    r.add(sa.finish());

    const Mat T = fp.F * fp.F - identity(d);
    const CompactWitness cw = compact_witness(s, h, cy, T, cy.coaction.h, opt);
    out.witnesses = cw.witnesses;
    add_witness_checks(r, "F'^2 - 1", cw, opt.tol);

    // Cycle conditions are recorded as norms: at finite dimension every
    // operator is compact.
    const BlockLayout& C = cy.coaction.algebra;
    double comm = 0.0, fred = 0.0;
    for (BlockId mu : C.all())
        for (int i = 0; i < C.dim(mu); ++i)
            for (int j = 0; j < C.dim(mu); ++j) {
                const Mat pc = represent(cy.rep.pi, C.unit(mu, i, j));
                comm = std::max(comm, opnorm(F * pc - pc * F));
                fred = std::max(fred, opnorm(pc * (F * F - identity(d))));
            }
    r.info("cycle (i) max |[F, pi(c)]|", comm);
    r.info("cycle (ii) max |pi(c)(F^2 - 1)|", fred);
    for (const auto& [a, Ua] : U.U.blocks) {
        const int n = static_cast<int>(Ua.rows()) / d;
        const Mat f1 = kron(F, identity(n));
        r.info("cycle (iii) |F x 1 - U(F x 1)U*| at block " + s.label(a), opnorm(f1 - Ua * f1 * Ua.adjoint()));
    }
    r.info("module basis size", m);
    return out;
}

Report homotopy_check(const DqgSpec& s, const HaarData& h, const Cycle& cy, const Element& h1, const Element& h2,
                      int steps, const VerifyOptions& opt)
{
    Report r;
    r.title = "homotopy";
    r.pass_fail("A3 for h1", a3_residual(s, h, cy.coaction, h1), opt.tol);
    r.pass_fail("A3 for h2", a3_residual(s, h, cy.coaction, h2), opt.tol);
    const int d = cy.rep.corep.hdim();
    const Mat F1 = f_prime(s, h, cy, h1, opt.window_grow).F;
    const Mat F2 = f_prime(s, h, cy, h2, opt.window_grow).F;
    r.info("|F'_h1 - F'_h2|", opnorm(F1 - F2));
    add_witness_checks(r, "F'_h1 - F'_h2", compact_witness(s, h, cy, F1 - F2, h1, opt), opt.tol);
    for (int k = 0; k < steps; ++k) {
        const double t = steps > 1 ? static_cast<double>(k) / (steps - 1) : 0.0;
        const Mat Ft = t * F2 + (1.0 - t) * F1;
        const CompactWitness cw = compact_witness(s, h, cy, Ft * Ft - identity(d), h1, opt);
        char tag[32];
        std::snprintf(tag, sizeof tag, "t=%.4f", t);
        const double res = std::max({cw.equivariance, cw.identity_residual, cw.conv_residual, cw.support_residual});
        r.pass_fail(std::string("F(t)^2 - 1 witness at ") + tag, res, opt.tol);
    }
    return r;
}

}  // namespace dqg
