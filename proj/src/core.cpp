#include "dqg/core.hpp"

#include <algorithm>
#include <sstream>

#include "dqg/rng.hpp"

namespace dqg {

namespace {

const std::vector<int> kNoEntries;

Mat unit_matrix(int n, int i, int j)
{
    Mat m = Mat::Zero(n, n);
    m(i, j) = 1.0;
    return m;
}

}  // namespace

void DqgSpec::finalize()
{
    const int n = size();
    by_pair_.clear();
    by_target_.clear();
    for (std::size_t k = 0; k < delta.size(); ++k) {
        const HomEntry& e = delta[k];
        for (BlockId b : {e.target, e.left, e.right})
            if (b < 0 || b >= n) throw StructuralError("delta entry references an unknown block");
        const std::string where = "delta entry (target " + label(e.target) + ", pair " + pair_label(e.left, e.right) + ")";
        if (e.mult < 1) throw StructuralError(where + ": multiplicity must be >= 1");
        if (e.isometry.rows() != dim(e.left) * dim(e.right) || e.isometry.cols() != dim(e.target) * e.mult)
            throw StructuralError(where + ": isometry shape mismatch");
        const double err = (e.isometry.adjoint() * e.isometry - identity(static_cast<int>(e.isometry.cols())))
                               .cwiseAbs()
                               .maxCoeff();
        if (err > 1e-10) throw StructuralError(where + ": isometry residual " + std::to_string(err));
        by_pair_[{e.left, e.right}].push_back(static_cast<int>(k));
        by_target_[e.target].push_back(static_cast<int>(k));
    }
    if (static_cast<int>(antipode.size()) != n) throw StructuralError("antipode must list every block once");
    antipode_inverse_.assign(n, Mat());
    for (int b = 0; b < n; ++b) {
        const AntipodeBlock& a = antipode[b];
        if (a.image < 0 || a.image >= n) throw StructuralError("antipode image of '" + label(b) + "' is unknown");
        if (dim(a.image) != dim(b)) throw StructuralError("antipode pairs blocks of different size at '" + label(b) + "'");
        if (antipode[a.image].image != b) throw StructuralError("antipode pairing is not an involution at '" + label(b) + "'");
        const int m = dim(b) * dim(b);
        if (a.map.rows() != m || a.map.cols() != m) throw StructuralError("antipode map shape mismatch at '" + label(b) + "'");
    }
    for (int b = 0; b < n; ++b) {
        const BlockId p = antipode[b].image;
        Eigen::FullPivLU<Mat> lu(antipode[p].map);
        if (!lu.isInvertible()) throw StructuralError("antipode block map at '" + label(p) + "' is not invertible");
        antipode_inverse_[b] = lu.inverse();
    }
    layout.check(counit.densities);
    if (haar) {
        if (static_cast<int>(haar->K.size()) != n || static_cast<int>(haar->c_alpha.size()) != n)
            throw StructuralError("haar section must list K and c_alpha for every block");
        for (int b = 0; b < n; ++b)
            if (haar->K[b].rows() != dim(b) || haar->K[b].cols() != dim(b))
                throw StructuralError("haar K shape mismatch at '" + label(b) + "'");
    }
    for (const auto& [a, b] : complete_pairs)
        if (a < 0 || a >= n || b < 0 || b >= n) throw StructuralError("window_complete references an unknown block");
}

bool DqgSpec::pair_complete(BlockId a, BlockId b) const
{
    return all_pairs_complete || complete_pairs.count({a, b}) != 0;
}

void DqgSpec::require_pair(BlockId a, BlockId b, const std::string& context) const
{
    if (!pair_complete(a, b))
        throw WindowOverflow({a, b}, context + ": pair " + pair_label(a, b) + " is not certified complete");
}

bool DqgSpec::is_finite() const
{
    if (all_pairs_complete) return true;
    for (int a = 0; a < size(); ++a)
        for (int b = 0; b < size(); ++b)
            if (!complete_pairs.count({a, b})) return false;
    return true;
}

const std::vector<int>& DqgSpec::entries_into(BlockId left, BlockId right) const
{
    auto it = by_pair_.find({left, right});
    return it == by_pair_.end() ? kNoEntries : it->second;
}

const std::vector<int>& DqgSpec::entries_from(BlockId target) const
{
    auto it = by_target_.find(target);
    return it == by_target_.end() ? kNoEntries : it->second;
}

std::string DqgSpec::pair_label(BlockId a, BlockId b) const
{
    return "(" + label(a) + "," + label(b) + ")";
}

void require_t1(const DqgSpec& s, BlockId gamma, BlockId beta)
{
    s.require_pair(gamma, s.pair(beta), "Delta(a)(1 x b)");
}

void require_t2(const DqgSpec& s, BlockId alpha, BlockId gamma)
{
    s.require_pair(s.pair(alpha), gamma, "(a x 1)Delta(b)");
}

std::string Window::describe(const DqgSpec& s) const
{
    std::ostringstream os;
    os << "{";
    for (std::size_t i = 0; i < J.size(); ++i) os << (i ? "," : "") << s.label(J[i]);
    os << "}";
    return os.str();
}

Window make_window(const DqgSpec& s, int grow)
{
    int core = 0;
    while (core < s.size()) {
        bool ok = true;
        for (int a = 0; a <= core && ok; ++a)
            ok = s.pair_complete(a, core) && s.pair_complete(core, a);
        if (!ok) break;
        ++core;
    }
    Window w;
    const int n = std::min(s.size(), core + std::max(grow, 0));
    for (int b = 0; b < n; ++b) w.J.push_back(b);
    return w;
}

Mat delta_component(const HomEntry& e, const Mat& x)
{
    return e.isometry * kron(x, identity(e.mult)) * e.isometry.adjoint();
}

Mat delta_block(const DqgSpec& s, const Element& a, BlockId alpha, BlockId beta)
{
    Mat out = Mat::Zero(s.dim(alpha) * s.dim(beta), s.dim(alpha) * s.dim(beta));
    for (int k : s.entries_into(alpha, beta)) {
        const HomEntry& e = s.delta[k];
        if (const Mat* x = a.find(e.target)) out += delta_component(e, *x);
    }
    return out;
}

TensorElement galois_t1(const DqgSpec& s, const Element& a, const Element& b)
{
    TensorElement out;
    for (const auto& [g, ag] : a)
        for (const auto& [be, bb] : b) {
            require_t1(s, g, be);
            for (int k : s.entries_from(g)) {
                const HomEntry& e = s.delta[k];
                if (e.right != be) continue;
                out.add({e.left, be}, delta_component(e, ag) * kron(identity(s.dim(e.left)), bb));
            }
        }
    return out.prune();
}

TensorElement galois_t2(const DqgSpec& s, const Element& a, const Element& b)
{
    TensorElement out;
    for (const auto& [al, aa] : a)
        for (const auto& [g, bg] : b) {
            require_t2(s, al, g);
            for (int k : s.entries_from(g)) {
                const HomEntry& e = s.delta[k];
                if (e.left != al) continue;
                out.add({al, e.right}, kron(aa, identity(s.dim(e.right))) * delta_component(e, bg));
            }
        }
    return out.prune();
}

TensorElement galois_t1(const DqgSpec& s, const TensorElement& x)
{
    TensorElement out;
    for (const auto& [p, X] : x) {
        const auto [g, be] = p;
        require_t1(s, g, be);
        const int ng = s.dim(g), nb = s.dim(be);
        for (int k : s.entries_from(g)) {
            const HomEntry& e = s.delta[k];
            if (e.right != be) continue;
            const int na = s.dim(e.left);
            Mat acc = Mat::Zero(na * nb, na * nb);
            for (int i = 0; i < nb; ++i)
                for (int j = 0; j < nb; ++j) {
                    const Mat part = slice_leg(X, {ng, nb}, 1, unit_matrix(nb, j, i));
                    if (part.norm() == 0.0) continue;
                    acc += delta_component(e, part) * kron(identity(na), unit_matrix(nb, i, j));
                }
            out.add({e.left, be}, acc);
        }
    }
    return out.prune();
}

TensorElement galois_t2(const DqgSpec& s, const TensorElement& x)
{
    TensorElement out;
    for (const auto& [p, X] : x) {
        const auto [al, g] = p;
        require_t2(s, al, g);
        const int na = s.dim(al), ng = s.dim(g);
        for (int k : s.entries_from(g)) {
            const HomEntry& e = s.delta[k];
            if (e.left != al) continue;
            const int nb = s.dim(e.right);
            Mat acc = Mat::Zero(na * nb, na * nb);
            for (int i = 0; i < na; ++i)
                for (int j = 0; j < na; ++j) {
                    const Mat part = slice_leg(X, {na, ng}, 0, unit_matrix(na, j, i));
                    if (part.norm() == 0.0) continue;
                    acc += kron(unit_matrix(na, i, j), identity(nb)) * delta_component(e, part);
                }
            out.add({al, e.right}, acc);
        }
    }
    return out.prune();
}

GaloisSolution galois_solve(const DqgSpec& s, GaloisKind kind, const TensorElement& y)
{
    const bool t1 = kind == GaloisKind::T1;
    // The fixed leg is the second one for T1 and the first one for T2.
    std::map<BlockId, std::set<BlockId>> outputs;
    for (const auto& [p, m] : y) {
        if (t1)
            outputs[p.second].insert(p.first);
        else
            outputs[p.first].insert(p.second);
    }
    GaloisSolution sol;
    sol.bijective = true;
    for (auto& [fixed, out_set] : outputs) {
        std::set<BlockId> in_set;
        bool changed = true;
        while (changed) {
            changed = false;
            for (const HomEntry& e : s.delta) {
                const BlockId fixed_leg = t1 ? e.right : e.left;
                const BlockId free_leg = t1 ? e.left : e.right;
                if (fixed_leg != fixed || !out_set.count(free_leg) || in_set.count(e.target)) continue;
                if (t1)
                    require_t1(s, e.target, fixed);
                else
                    require_t2(s, fixed, e.target);
                in_set.insert(e.target);
                changed = true;
            }
            for (const HomEntry& e : s.delta) {
                const BlockId fixed_leg = t1 ? e.right : e.left;
                const BlockId free_leg = t1 ? e.left : e.right;
                if (fixed_leg == fixed && in_set.count(e.target) && !out_set.count(free_leg)) {
                    out_set.insert(free_leg);
                    changed = true;
                }
            }
        }
        const int nf = s.dim(fixed);
        auto key = [&](BlockId free) { return t1 ? BlockPair{free, fixed} : BlockPair{fixed, free}; };
        std::map<BlockId, int> row_offset;
        int rows = 0;
        for (BlockId o : out_set) {
            row_offset[o] = rows;
            rows += s.dim(o) * s.dim(o) * nf * nf;
        }
        int cols = 0;
        for (BlockId g : in_set) cols += s.dim(g) * s.dim(g) * nf * nf;
        Mat A = Mat::Zero(rows, cols);
        Vec rhs = Vec::Zero(rows);
        for (BlockId o : out_set)
            if (const Mat* m = y.find(key(o))) rhs.segment(row_offset[o], m->size()) = vec_rm(*m);
        int col = 0;
        std::vector<std::pair<BlockId, int>> col_map;
        for (BlockId g : in_set) {
            const int n = s.dim(g) * nf;
            for (int u = 0; u < n * n; ++u, ++col) {
                Mat unit = Mat::Zero(n, n);
                unit(u / n, u % n) = 1.0;
                TensorElement x;
                x.set(key(g), unit);
                const TensorElement img = t1 ? galois_t1(s, x) : galois_t2(s, x);
                for (const auto& [p, m] : img) {
                    const BlockId o = t1 ? p.first : p.second;
                    A.col(col).segment(row_offset.at(o), m.size()) = vec_rm(m);
                }
            }
            col_map.emplace_back(g, n);
        }
        Eigen::CompleteOrthogonalDecomposition<Mat> cod(A);
        cod.setThreshold(1e-10);
        const Vec x = cols ? Vec(cod.solve(rhs)) : Vec();
        const int rank = cols ? static_cast<int>(cod.rank()) : 0;
        sol.unknowns += cols;
        sol.equations += rows;
        sol.rank += rank;
        // On a truncated window the closure need not be square; only
        // injectivity and solvability of y are then meaningful.
        if (rank != cols || (s.is_finite() && rank != rows)) sol.bijective = false;
        const double res = rows ? (cols ? (A * x - rhs).cwiseAbs().maxCoeff() : rhs.cwiseAbs().maxCoeff()) : 0.0;
        sol.residual = std::max(sol.residual, res);
        int off = 0;
        for (const auto& [g, n] : col_map) {
            sol.x.set(key(g), unvec_rm(x.segment(off, n * n), n, n));
            off += n * n;
        }
    }
    sol.x.prune();
    return sol;
}

Mat antipode_block(const DqgSpec& s, const Mat& x, BlockId b, bool inverse)
{
    const Mat& map = inverse ? s.antipode_inverse_map(b) : s.antipode.at(b).map;
    const int n = s.dim(b);
    return unvec_rm(map * vec_rm(x), n, n);
}

Element antipode(const DqgSpec& s, const Element& a, bool inverse)
{
    Element out;
    for (const auto& [b, m] : a) out.set(s.pair(b), antipode_block(s, m, b, inverse));
    return out;
}

cplx counit(const DqgSpec& s, const Element& a) { return s.counit(a); }

TensorElement antipode_leg(const DqgSpec& s, const TensorElement& t, int leg, bool inverse)
{
    TensorElement out;
    for (const auto& [p, m] : t) {
        const BlockId b = leg == 0 ? p.first : p.second;
        const Mat& map = inverse ? s.antipode_inverse_map(b) : s.antipode.at(b).map;
        const Mat img = map_leg(m, {s.dim(p.first), s.dim(p.second)}, leg, map, s.dim(b));
        out.add(leg == 0 ? BlockPair{s.pair(b), p.second} : BlockPair{p.first, s.pair(b)}, img);
    }
    return out;
}

Multiplier::Multiplier(Rule rule) : rule_(std::move(rule)), cache_(std::make_shared<Cache>()) {}

Multiplier Multiplier::identity(const BlockLayout& layout)
{
    return Multiplier([layout](BlockId b) { return dqg::identity(layout.dim(b)); });
}

Multiplier Multiplier::central(const BlockLayout& layout, std::vector<BlockId> J)
{
    std::set<BlockId> members(J.begin(), J.end());
    return Multiplier([layout, members](BlockId b) {
        return members.count(b) ? dqg::identity(layout.dim(b)) : Mat(Mat::Zero(layout.dim(b), layout.dim(b)));
    });
}

Multiplier Multiplier::from_blocks(std::vector<Mat> blocks)
{
    return Multiplier([blocks = std::move(blocks)](BlockId b) { return blocks.at(b); });
}

Mat Multiplier::block(BlockId b) const
{
    {
        std::lock_guard<std::mutex> lock(cache_->mutex);
        auto it = cache_->values.find(b);
        if (it != cache_->values.end()) return it->second;
    }
    Mat value = rule_(b);
    std::lock_guard<std::mutex> lock(cache_->mutex);
    return cache_->values.emplace(b, std::move(value)).first->second;
}

Mat multiplier_delta_block(const DqgSpec& s, const Multiplier& X, BlockId alpha, BlockId beta)
{
    s.require_pair(alpha, beta, "multiplier Delta block");
    Mat out = Mat::Zero(s.dim(alpha) * s.dim(beta), s.dim(alpha) * s.dim(beta));
    for (int k : s.entries_into(alpha, beta)) {
        const HomEntry& e = s.delta[k];
        out += delta_component(e, X.block(e.target));
    }
    return out;
}

Mat multiplier_antipode(const DqgSpec& s, const Multiplier& X, BlockId alpha)
{
    const BlockId p = s.pair(alpha);
    return antipode_block(s, X.block(p), p);
}

Element multiply(const Multiplier& X, const Element& a)
{
    Element out;
    for (const auto& [b, m] : a) out.set(b, X.block(b) * m);
    return out;
}

Element multiply(const Element& a, const Multiplier& X)
{
    Element out;
    for (const auto& [b, m] : a) out.set(b, m * X.block(b));
    return out;
}

std::vector<BlockId> symmetric_closure(const DqgSpec& s, std::vector<BlockId> J)
{
    std::set<BlockId> set(J.begin(), J.end());
    for (BlockId b : J) set.insert(s.pair(b));
    return {set.begin(), set.end()};
}

Report verify_structure(const DqgSpec& s, double tol)
{
    Report r;
    r.title = "structure";
    double iso = 0.0;
    for (const HomEntry& e : s.delta)
        iso = std::max(iso, (e.isometry.adjoint() * e.isometry - identity(static_cast<int>(e.isometry.cols())))
                                .cwiseAbs()
                                .maxCoeff());
    r.pass_fail("isometry V*V = 1", iso, tol);
    double unital = 0.0;
    int complete = 0;
    for (int a = 0; a < s.size(); ++a)
        for (int b = 0; b < s.size(); ++b) {
            if (!s.pair_complete(a, b)) continue;
            ++complete;
            Mat sum = Mat::Zero(s.dim(a) * s.dim(b), s.dim(a) * s.dim(b));
            for (int k : s.entries_into(a, b)) sum += s.delta[k].isometry * s.delta[k].isometry.adjoint();
            unital = std::max(unital, (sum - identity(static_cast<int>(sum.rows()))).cwiseAbs().maxCoeff());
        }
    r.pass_fail("unitality Delta(1) = 1 on certified pairs", unital, tol, std::to_string(complete) + " pairs");
    // ε is a character of ⊕ M_n only if it lives on one 1-dim block.
    int eps_blocks = 0;
    double eps_err = 0.0;
    for (const auto& [b, d] : s.counit.densities) {
        ++eps_blocks;
        if (s.dim(b) != 1) eps_err = std::max(eps_err, 1.0);
        else if (s.pair(b) != b) eps_err = std::max(eps_err, 1.0);
        else eps_err = std::max(eps_err, std::abs(d(0, 0) - 1.0));
    }
    if (eps_blocks != 1) eps_err = std::max(eps_err, 1.0);
    r.pass_fail("counit is evaluation on a self-paired 1-dim block", eps_err, tol);
    return r;
}

namespace {

double rank_deficit(const DqgSpec& s, const GaloisSolution& sol)
{
    double d = sol.unknowns - sol.rank;
    if (s.is_finite()) d += std::abs(sol.equations - sol.rank);
    return d;
}

}  // namespace

Report verify_bialgebra(const DqgSpec& s, const VerifyOptions& opt)
{
    const Window w = make_window(s, opt.window_grow);
    const std::string win = w.describe(s);
    Report r = verify_structure(s, opt.tol);
    r.title = "bialgebra";
    const auto& J = w.J;
    const BlockLayout& L = s.layout;

    Probe coassoc("coassociativity (a x 1 x 1)(Delta x id)(Delta(b)(1 x c))", opt.tol);
    Probe counit_l("counit law (eps x id)(Delta(a)(1 x b)) = ab", opt.tol);
    Probe counit_r("counit law (id x eps)((a x 1)Delta(b)) = ab", opt.tol);
    Probe eps_mult("counit multiplicative", opt.tol);
    Probe star("S(S(a)*)* = a", opt.tol);
    Probe anti("S(ab) = S(b)S(a)", opt.tol);
    Probe inv("S^-1(S(a)) = a", opt.tol);
    Probe hopf("m(S x id)(Delta(a)(1 x b)) = eps(a) b", opt.tol);
    Probe g1("Galois T1 solve round trip", opt.tol);
    Probe g2("Galois T2 solve round trip", opt.tol);
    Probe g1b("Galois T1 bijective (rank deficit)", 0.0);
    Probe g2b("Galois T2 bijective (rank deficit)", 0.0);
    Probe eJ("multiplier rule Delta(e_J)Delta(a) = Delta(e_J a)", opt.tol);

    auto coassoc_residual = [&](const Element& a, const Element& b, const Element& c) {
        Tensor3 lhs, rhs;
        const TensorElement x = galois_t1(s, b, c);
        for (const auto& [p, X] : x) {
            const auto [mu, be] = p;
            for (const auto& [al, aa] : a) {
                require_t2(s, al, mu);
                for (int k : s.entries_from(mu)) {
                    const HomEntry& e = s.delta[k];
                    if (e.left != al) continue;
                    const int nn = s.dim(e.right), nb = s.dim(be);
                    Mat z = hom_leg(X, {s.dim(mu), nb}, 0, e.isometry, e.mult, {s.dim(al), nn});
                    z = kron(kron(aa, identity(nn)), identity(nb)) * z;
                    lhs.add({al, e.right, be}, z);
                }
            }
        }
        const TensorElement y = galois_t2(s, a, b);
        for (const auto& [p, Y] : y) {
            const auto [al, mu] = p;
            for (const auto& [be, cc] : c) {
                require_t1(s, mu, be);
                for (int k : s.entries_from(mu)) {
                    const HomEntry& e = s.delta[k];
                    if (e.right != be) continue;
                    const int nn = s.dim(e.left), na = s.dim(al);
                    Mat z = hom_leg(Y, {na, s.dim(mu)}, 1, e.isometry, e.mult, {nn, s.dim(be)});
                    z = z * kron(kron(identity(na), identity(nn)), cc);
                    rhs.add({al, e.left, be}, z);
                }
            }
        }
        return distance(lhs, rhs);
    };

    for (BlockId ia : J)
        for (BlockId ib : J)
            for (BlockId ic : J)
                for (int k = 0; k < opt.samples; ++k) {
                    Rng rng = Rng::for_case(opt.seed, "coassoc", {ia, ib, ic, k});
                    const Element a = random_element(L, {ia}, rng);
                    const Element b = random_element(L, {ib}, rng);
                    const Element c = random_element(L, {ic}, rng);
                    try {
                        coassoc.observe(coassoc_residual(a, b, c));
                    } catch (const WindowOverflow& e) {
                        coassoc.skip(e.what());
                    }
                }

    for (BlockId ia : J)
        for (BlockId ib : J)
            for (int k = 0; k < opt.samples; ++k) {
                Rng rng = Rng::for_case(opt.seed, "pair", {ia, ib, k});
                const Element a = random_element(L, {ia}, rng);
                const Element b = random_element(L, {ib}, rng);
                const double scale = 1.0 + a.max_abs() * b.max_abs();
                try {
                    const TensorElement t = galois_t1(s, a, b);
                    counit_l.observe(distance(id_tensor_f(t, s.counit, 0), a * b) / scale);
                    Element lhs;
                    for (const auto& [p, m] : antipode_leg(s, t, 0)) {
                        if (p.first != p.second) continue;
                        lhs.add(p.second, multiply_legs(m, s.dim(p.second)));
                    }
                    hopf.observe(distance(lhs, counit(s, a) * b) / scale);
                    const GaloisSolution sol = galois_solve(s, GaloisKind::T1, t);
                    g1.observe(std::max(sol.residual, distance(sol.x, tensor(a, b))) / scale);
                    g1b.observe(rank_deficit(s, sol));
                } catch (const WindowOverflow& e) {
                    counit_l.skip(e.what());
                    hopf.skip(e.what());
                    g1.skip(e.what());
                    g1b.skip(e.what());
                }
                try {
                    const TensorElement t = galois_t2(s, a, b);
                    counit_r.observe(distance(id_tensor_f(t, s.counit, 1), a * b) / scale);
                    const GaloisSolution sol = galois_solve(s, GaloisKind::T2, t);
                    g2.observe(std::max(sol.residual, distance(sol.x, tensor(a, b))) / scale);
                    g2b.observe(rank_deficit(s, sol));
                } catch (const WindowOverflow& e) {
                    counit_r.skip(e.what());
                    g2.skip(e.what());
                    g2b.skip(e.what());
                }
                if (ia == ib) {
                    eps_mult.observe(std::abs(counit(s, a * b) - counit(s, a) * counit(s, b)) / scale);
                    anti.observe(distance(antipode(s, a * b), antipode(s, b) * antipode(s, a)) / scale);
                }
                // Multiplier rule on pairs of blocks.
                if (s.pair_complete(ia, ib)) {
                    const Multiplier e_J = Multiplier::central(L, J);
                    Rng r2 = Rng::for_case(opt.seed, "mult-rule", {ia, ib, k});
                    double worst = 0.0;
                    for (BlockId g : J) {
                        const Element x = random_element(L, {g}, r2);
                        const Mat lhs = multiplier_delta_block(s, e_J, ia, ib) * delta_block(s, x, ia, ib);
                        const Mat rhs = delta_block(s, multiply(e_J, x), ia, ib);
                        worst = std::max(worst, (lhs - rhs).cwiseAbs().maxCoeff());
                    }
                    eJ.observe(worst);
                }
            }

    for (BlockId ia : J)
        for (int k = 0; k < opt.samples; ++k) {
            Rng rng = Rng::for_case(opt.seed, "single", {ia, k});
            const Element a = random_element(L, {ia}, rng);
            const double scale = 1.0 + a.max_abs();
            star.observe(distance(antipode(s, antipode(s, a).adjoint()).adjoint(), a) / scale);
            inv.observe(distance(antipode(s, antipode(s, a), true), a) / scale);
        }

    if (s.is_finite()) {
        for (int k = 0; k < opt.samples; ++k) {
            Rng rng = Rng::for_case(opt.seed, "multi", {k});
            const Element a = random_element(L, J, rng);
            const Element b = random_element(L, J, rng);
            const Element c = random_element(L, J, rng);
            coassoc.observe(coassoc_residual(a, b, c) / (1.0 + a.max_abs() * b.max_abs() * c.max_abs()));
        }
    }

    for (const Probe* p : {&coassoc, &counit_l, &counit_r, &eps_mult, &star, &anti, &inv, &hopf, &g1, &g1b, &g2, &g2b, &eJ})
        r.add(p->finish(win));
    return r;
}

}  // namespace dqg
