#include "dqg/builders.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

#include "dqg/haar.hpp"
#include "dqg/rng.hpp"

namespace dqg {

GroupTable make_group_table(std::vector<std::vector<int>> mul, std::vector<std::string> labels)
{
    const int n = static_cast<int>(mul.size());
    if (n == 0) throw StructuralError("group table is empty");
    for (const auto& row : mul) {
        if (static_cast<int>(row.size()) != n) throw StructuralError("group table is not square");
        for (int x : row)
            if (x < 0 || x >= n) throw StructuralError("group table entry out of range");
    }
    GroupTable g;
    g.mul = std::move(mul);
    if (labels.empty())
        for (int i = 0; i < n; ++i) labels.push_back(std::to_string(i));
    if (static_cast<int>(labels.size()) != n) throw StructuralError("group label count mismatch");
    g.labels = std::move(labels);
    for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b)
            for (int c = 0; c < n; ++c)
                if (g.mul[g.mul[a][b]][c] != g.mul[a][g.mul[b][c]])
                    throw StructuralError("group table is not associative");
    g.identity = -1;
    for (int e = 0; e < n && g.identity < 0; ++e) {
        bool ok = true;
        for (int a = 0; a < n && ok; ++a) ok = g.mul[e][a] == a && g.mul[a][e] == a;
        if (ok) g.identity = e;
    }
    if (g.identity < 0) throw StructuralError("group table has no identity");
    g.inverse.assign(n, -1);
    for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b)
            if (g.mul[a][b] == g.identity && g.mul[b][a] == g.identity) g.inverse[a] = b;
    for (int a = 0; a < n; ++a)
        if (g.inverse[a] < 0) throw StructuralError("group element " + g.labels[a] + " has no inverse");
    return g;
}

GroupTable cyclic_group(int n)
{
    if (n < 1) throw StructuralError("cyclic group order must be positive");
    std::vector<std::vector<int>> mul(n, std::vector<int>(n));
    for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b) mul[a][b] = (a + b) % n;
    return make_group_table(std::move(mul));
}

GroupTable symmetric_group(int n)
{
    if (n < 1 || n > 5) throw StructuralError("symmetric group degree must be in 1..5");
    std::vector<std::vector<int>> perms;
    std::vector<int> p(n);
    std::iota(p.begin(), p.end(), 0);
    do perms.push_back(p);
    while (std::next_permutation(p.begin(), p.end()));
    const int m = static_cast<int>(perms.size());
    auto index_of = [&](const std::vector<int>& q) {
        return static_cast<int>(std::lower_bound(perms.begin(), perms.end(), q) - perms.begin());
    };
    std::vector<std::vector<int>> mul(m, std::vector<int>(m));
    std::vector<std::string> labels;
    for (int a = 0; a < m; ++a) {
        std::string l;
        for (int x : perms[a]) l += std::to_string(x + 1);
        labels.push_back(l);
        for (int b = 0; b < m; ++b) {
            std::vector<int> c(n);
            for (int i = 0; i < n; ++i) c[i] = perms[a][perms[b][i]];
            mul[a][b] = index_of(c);
        }
    }
    return make_group_table(std::move(mul), std::move(labels));
}

GroupTable parse_group_table(const std::string& text)
{
    std::istringstream is(text);
    std::vector<int> values;
    int x = 0;
    while (is >> x) values.push_back(x);
    if (!is.eof()) throw StructuralError("group table contains a non-integer token");
    const int n = static_cast<int>(std::lround(std::sqrt(static_cast<double>(values.size()))));
    if (n * n != static_cast<int>(values.size())) throw StructuralError("group table must be n*n integers");
    std::vector<std::vector<int>> mul(n, std::vector<int>(n));
    for (int i = 0; i < n * n; ++i) mul[i / n][i % n] = values[i];
    return make_group_table(std::move(mul));
}

DqgSpec build_commutative(const GroupTable& g, const std::string& name)
{
    DqgSpec s;
    s.name = name.empty() ? "c0-group" : name;
    std::vector<BlockIndex> blocks;
    for (const auto& l : g.labels) blocks.push_back({l, 1});
    s.layout = BlockLayout(blocks);
    const int n = g.order();
    for (int t = 0; t < n; ++t)
        for (int u = 0; u < n; ++u) s.delta.push_back({g.mul[t][u], t, u, 1, Mat::Ones(1, 1)});
    std::sort(s.delta.begin(), s.delta.end(), [](const HomEntry& a, const HomEntry& b) {
        return std::tie(a.target, a.left, a.right) < std::tie(b.target, b.left, b.right);
    });
    for (int t = 0; t < n; ++t) s.antipode.push_back({g.inverse[t], Mat::Ones(1, 1)});
    s.counit.densities.set(g.identity, Mat::Ones(1, 1));
    HaarParams hp;
    for (int t = 0; t < n; ++t) {
        hp.K.push_back(Mat::Ones(1, 1));
        hp.c_alpha.push_back(1.0);
    }
    s.haar = hp;
    s.all_pairs_complete = true;
    s.finalize();
    return s;
}

namespace {

// Orthonormal basis of each eigenspace of a Hermitian matrix.
std::vector<Mat> eigenspaces(const Mat& h, double tol)
{
    Eigen::SelfAdjointEigenSolver<Mat> es(hermitian_part(h));
    const auto& ev = es.eigenvalues();
    std::vector<Mat> out;
    Eigen::Index start = 0;
    const double scale = std::max(1.0, ev.cwiseAbs().maxCoeff());
    for (Eigen::Index i = 1; i <= ev.size(); ++i)
        if (i == ev.size() || ev(i) - ev(i - 1) > tol * scale) {
            out.push_back(es.eigenvectors().middleCols(start, i - start));
            start = i;
        }
    return out;
}

}  // namespace

std::vector<std::vector<Mat>> group_irreps(const GroupTable& g, std::uint64_t seed)
{
    const int n = g.order();
    std::vector<Mat> reg(n, Mat::Zero(n, n));
    for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b) reg[a](g.mul[a][b], b) = 1.0;

    // Conjugacy classes.
    std::vector<int> cls(n, -1);
    int nclasses = 0;
    for (int a = 0; a < n; ++a) {
        if (cls[a] >= 0) continue;
        for (int x = 0; x < n; ++x) cls[g.mul[g.mul[x][a]][g.inverse[x]]] = nclasses;
        ++nclasses;
    }
    Rng rng(seed);
    std::vector<double> r(nclasses), t(nclasses);
    for (int k = 0; k < nclasses; ++k) {
        r[k] = rng.uniform();
        t[k] = rng.uniform();
    }
    Mat Z = Mat::Zero(n, n);
    for (int a = 0; a < n; ++a) {
        Z += r[cls[a]] * (reg[a] + reg[a].adjoint());
        Z += cplx(0.0, t[cls[a]]) * (reg[a] - reg[a].adjoint());
    }
    std::vector<std::vector<Mat>> irreps;
    for (const Mat& Q : eigenspaces(Z, 1e-8)) {
        const int d2 = static_cast<int>(Q.cols());
        const int d = static_cast<int>(std::lround(std::sqrt(static_cast<double>(d2))));
        if (d * d != d2) throw StructuralError("isotypic component has non-square dimension; class sums did not separate irreps");
        std::vector<Mat> rho(n);
        for (int a = 0; a < n; ++a) rho[a] = Q.adjoint() * reg[a] * Q;
        const Mat H0 = rng.gaussian(d2, d2);
        Mat H = Mat::Zero(d2, d2);
        for (int a = 0; a < n; ++a) H += rho[a] * hermitian_part(H0) * rho[a].adjoint();
        const auto parts = eigenspaces(H / n, 1e-8);
        if (static_cast<int>(parts.size()) != d || parts.front().cols() != d)
            throw StructuralError("averaged Hermitian did not split an isotypic component into irreducibles");
        const Mat W = parts.front();
        std::vector<Mat> pi(n);
        for (int a = 0; a < n; ++a) pi[a] = W.adjoint() * rho[a] * W;
        irreps.push_back(std::move(pi));
    }
    auto is_trivial = [&](const std::vector<Mat>& pi) {
        if (pi[0].rows() != 1) return false;
        for (const Mat& m : pi)
            if (std::abs(m(0, 0) - 1.0) > 1e-9) return false;
        return true;
    };
    std::stable_sort(irreps.begin(), irreps.end(), [&](const auto& a, const auto& b) {
        const auto ka = std::make_pair(!is_trivial(a), a[0].rows());
        const auto kb = std::make_pair(!is_trivial(b), b[0].rows());
        return ka < kb;
    });
    return irreps;
}

DqgSpec build_from_hopf_reps(const HopfRepSystem& sys)
{
    const int nb = static_cast<int>(sys.dims.size());
    DqgSpec s;
    s.name = sys.name;
    std::vector<BlockIndex> blocks;
    for (int b = 0; b < nb; ++b) blocks.push_back({sys.labels[b], sys.dims[b]});
    s.layout = BlockLayout(blocks);
    bool all = true;

    for (int a = 0; a < nb; ++a)
        for (int b = 0; b < nb; ++b) {
            const bool complete = sys.pair_complete(a, b);
            all = all && complete;
            if (complete) s.complete_pairs.insert({a, b});
            const int nab = sys.dims[a] * sys.dims[b];
            int covered = 0;
            for (int c = 0; c < nb; ++c) {
                const int nc = sys.dims[c];
                Mat A(static_cast<Eigen::Index>(sys.generators) * nab * nc, nab * nc);
                for (int x = 0; x < sys.generators; ++x)
                    A.middleRows(static_cast<Eigen::Index>(x) * nab * nc, nab * nc) =
                        kron(sys.coproduct(a, b, x), identity(nc)) - kron(identity(nab), sys.rep(c, x).transpose());
                const Mat ker = nullspace(A, 1e-9);
                const int m = static_cast<int>(ker.cols());
                const int expected = sys.expected_mult ? sys.expected_mult(a, b, c) : -1;
                if (expected >= 0 && expected != m)
                    throw StructuralError("intertwiner space for (" + sys.labels[c] + " in " + sys.labels[a] + " x " +
                                          sys.labels[b] + ") has dimension " + std::to_string(m) + ", expected " +
                                          std::to_string(expected));
                if (m == 0) continue;
                std::vector<Mat> T;
                for (int k = 0; k < m; ++k) T.push_back(unvec_rm(ker.col(k), nab, nc));
                Mat G(m, m);
                for (int k = 0; k < m; ++k)
                    for (int l = 0; l < m; ++l) G(k, l) = (T[k].adjoint() * T[l]).trace() / double(nc);
                const Mat Gi = hermitian_power(G, -0.5);
                Mat V(nab, nc * m);
                for (int l = 0; l < m; ++l) {
                    Mat Tl = Mat::Zero(nab, nc);
                    for (int k = 0; k < m; ++k) Tl += T[k] * Gi(k, l);
                    for (int i = 0; i < nc; ++i) V.col(i * m + l) = Tl.col(i);
                }
                s.delta.push_back({c, a, b, m, V});
                covered += nc * m;
            }
            if (complete && covered != nab)
                throw StructuralError("certified pair (" + sys.labels[a] + "," + sys.labels[b] +
                                      ") does not decompose into listed blocks");
        }
    s.all_pairs_complete = all;
    if (all) s.complete_pairs.clear();
    std::sort(s.delta.begin(), s.delta.end(), [](const HomEntry& x, const HomEntry& y) {
        return std::tie(x.target, x.left, x.right) < std::tie(y.target, y.left, y.right);
    });

    // S on block a is x ↦ C xᵀ C⁻¹ into the block carrying ρ(S X).
    for (int a = 0; a < nb; ++a) {
        const int n = sys.dims[a];
        bool found = false;
        for (int b = 0; b < nb && !found; ++b) {
            if (sys.dims[b] != n) continue;
            Mat A(static_cast<Eigen::Index>(sys.generators) * n * n, n * n);
            for (int x = 0; x < sys.generators; ++x)
                A.middleRows(static_cast<Eigen::Index>(x) * n * n, n * n) =
                    kron(identity(n), sys.rep(a, x)) - kron(sys.antipode(b, x), identity(n));
            const Mat ker = nullspace(A, 1e-9);
            if (ker.cols() != 1) continue;
            Mat C = unvec_rm(ker.col(0), n, n);
            Eigen::FullPivLU<Mat> lu(C);
            if (!lu.isInvertible()) continue;
            C /= std::pow(std::abs(lu.determinant()), 1.0 / n);
            const Mat Ci = C.inverse();
            Mat map(n * n, n * n);
            for (int u = 0; u < n * n; ++u) {
                Mat e = Mat::Zero(n, n);
                e(u / n, u % n) = 1.0;
                map.col(u) = vec_rm(C * e.transpose() * Ci);
            }
            s.antipode.push_back({b, map});
            found = true;
        }
        if (!found) throw StructuralError("no antipode image found for block " + sys.labels[a]);
    }
    s.counit.densities.set(sys.trivial, Mat::Ones(1, 1));
    s.finalize();

    const DerivedK dk = derive_K_from_S2(s);
    for (int b = 0; b < nb; ++b)
        if (!dk.found[b]) throw StructuralError("S^2 on block " + sys.labels[b] + " has no positive intertwiner");
    s.haar = solve_haar_weights(s, dk.K);
    s.finalize();
    return s;
}

DqgSpec build_group_dual(const GroupTable& g, const std::string& name, std::uint64_t seed)
{
    const auto irreps = group_irreps(g, seed);
    const int n = g.order();
    const int k = static_cast<int>(irreps.size());
    std::vector<std::vector<cplx>> chi(k, std::vector<cplx>(n));
    for (int a = 0; a < k; ++a)
        for (int x = 0; x < n; ++x) chi[a][x] = irreps[a][x].trace();
    HopfRepSystem sys;
    sys.name = name.empty() ? "group-dual" : name;
    for (int a = 0; a < k; ++a) {
        sys.labels.push_back("irr" + std::to_string(a));
        sys.dims.push_back(static_cast<int>(irreps[a][0].rows()));
    }
    sys.generators = n;
    sys.trivial = 0;
    sys.rep = [&](int b, int x) { return irreps[b][x]; };
    sys.coproduct = [&](int a, int b, int x) { return kron(irreps[a][x], irreps[b][x]); };
    sys.antipode = [&](int b, int x) { return irreps[b][g.inverse[x]]; };
    sys.pair_complete = [](int, int) { return true; };
    sys.expected_mult = [&](int a, int b, int c) {
        cplx m = 0.0;
        for (int x = 0; x < n; ++x) m += chi[a][x] * chi[b][x] * std::conj(chi[c][x]);
        return static_cast<int>(std::lround((m / double(n)).real()));
    };
    return build_from_hopf_reps(sys);
}

namespace {

double qint(double q, double n) { return (std::pow(q, n) - std::pow(q, -n)) / (q - 1.0 / q); }

std::string spin_label(int two_l) { return two_l % 2 ? std::to_string(two_l) + "/2" : std::to_string(two_l / 2); }

}  // namespace

DqgSpec build_suq2_window(double q, double max_spin)
{
    if (!(q > 0.0) || std::abs(q - 1.0) < 1e-12) throw StructuralError("q must be positive and different from 1");
    const int top = static_cast<int>(std::lround(2.0 * max_spin));
    if (top < 1 || std::abs(2.0 * max_spin - top) > 1e-12) throw StructuralError("max spin must be a positive half-integer");
    HopfRepSystem sys;
    {
        std::ostringstream os;
        os << "suq2-q" << q << "-L" << spin_label(top);
        sys.name = os.str();
    }
    // Generators 0: k, 1: E, 2: F, on basis m = -l..l.
    std::vector<std::array<Mat, 3>> rho;
    for (int j = 0; j <= top; ++j) {
        const int n = j + 1;
        const double l = j / 2.0;
        Mat k = Mat::Zero(n, n), E = Mat::Zero(n, n);
        for (int i = 0; i < n; ++i) {
            const double m = -l + i;
            k(i, i) = std::pow(q, m);
            if (i + 1 < n) E(i + 1, i) = std::sqrt(qint(q, l - m) * qint(q, l + m + 1));
        }
        rho.push_back({k, E, Mat(E.transpose())});
        sys.labels.push_back(spin_label(j));
        sys.dims.push_back(n);
    }
    sys.generators = 3;
    sys.trivial = 0;
    sys.rep = [&](int b, int x) { return rho[b][x]; };
    sys.coproduct = [&](int a, int b, int x) -> Mat {
        const Mat& ka = rho[a][0];
        const Mat& kb = rho[b][0];
        if (x == 0) return kron(ka, kb);
        return kron(rho[a][x], kb) + kron(Mat(ka.inverse()), rho[b][x]);
    };
    sys.antipode = [&](int b, int x) -> Mat {
        if (x == 0) return rho[b][0].inverse();
        if (x == 1) return -q * rho[b][1];
        return -(1.0 / q) * rho[b][2];
    };
    sys.pair_complete = [top](int a, int b) { return a + b <= top; };
    sys.expected_mult = [](int a, int b, int c) {
        return (c >= std::abs(a - b) && c <= a + b && (a + b - c) % 2 == 0) ? 1 : 0;
    };
    return build_from_hopf_reps(sys);
}

}  // namespace dqg
