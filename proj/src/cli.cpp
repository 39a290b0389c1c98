#include "dqg/cli.hpp"

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>

#include <CLI11.hpp>

#include "dqg/builders.hpp"
#include "dqg/rng.hpp"
#include "dqg/spec_io.hpp"

namespace dqg {

namespace {

constexpr const char* kVersion = "1.0.0";
constexpr const char* kGnsConvention = "left convolution on A0 in L2(phi); positive form eps(x# * y)";

struct GlobalOptions {
    double tol = 1e-9;
    int samples = 3;
    std::optional<std::uint64_t> seed;
    int window_grow = 0;
    std::string format = "text";
};

std::uint64_t resolve_seed(const GlobalOptions& g)
{
    if (g.seed) return *g.seed;
    if (const char* env = std::getenv("DQG_SEED")) {
        try {
            return std::stoull(env);
        } catch (const std::exception&) {
            throw StructuralError("DQG_SEED is not an unsigned integer");
        }
    }
    return 1;
}

VerifyOptions verify_options(const GlobalOptions& g)
{
    VerifyOptions o;
    o.tol = g.tol;
    o.samples = g.samples;
    o.seed = resolve_seed(g);
    o.window_grow = g.window_grow;
    return o;
}

void emit(std::ostream& out, Report r, const GlobalOptions& g, const VerifyOptions& o, const std::string& spec_name)
{
    r.header.insert(r.header.begin(), {{"version", kVersion},
                                       {"spec", spec_name},
                                       {"seed", std::to_string(o.seed)},
                                       {"samples", std::to_string(o.samples)},
                                       {"window_grow", std::to_string(o.window_grow)},
                                       {"gns", kGnsConvention}});
    out << (g.format == "machine" ? format_machine(r) : format_text(r));
}

GroupTable group_from(const std::string& arg)
{
    auto colon = arg.find(':');
    if (colon != std::string::npos) {
        const std::string kind = arg.substr(0, colon);
        int n = 0;
        try {
            n = std::stoi(arg.substr(colon + 1));
        } catch (const std::exception&) {
            throw StructuralError("group order in '" + arg + "' is not an integer");
        }
        if (kind == "cyclic") return cyclic_group(n);
        if (kind == "symmetric") return symmetric_group(n);
        throw StructuralError("unknown group family '" + kind + "' (expected cyclic or symmetric)");
    }
    return parse_group_table(read_file(arg));
}

Mat random_hermitian_contraction(int d, std::uint64_t seed)
{
    Rng rng = Rng::for_case(seed, "build-cycle-F", {d});
    const Mat g = rng.gaussian(d, d);
    const Mat f = 0.5 * (g + g.adjoint());
    return f / opnorm(f);
}

// Nontrivial one-dimensional irreducible of Γ, as a function on Γ.
Element first_character(const DqgSpec& s, const GroupTable& g)
{
    for (const auto& rep : group_irreps(g)) {
        if (rep[0].rows() != 1) continue;
        bool trivial = true;
        for (const Mat& m : rep) trivial = trivial && std::abs(m(0, 0) - 1.0) < 1e-12;
        if (trivial) continue;
        Element u;
        for (int t = 0; t < g.order(); ++t) u.set(s.layout.find(g.labels[t]), rep[t]);
        return u;
    }
    throw StructuralError("group has no nontrivial one-dimensional representation");
}

void attach_cycle(SpecDocument& doc, const std::string& which, const std::optional<GroupTable>& group,
                  std::uint64_t seed)
{
    if (which.empty()) return;
    const DqgSpec& s = doc.spec;
    const HaarData h = haar_from_spec(s);
    Cycle cy;
    if (which == "regular") {
        int d = 0;
        for (BlockId b : s.layout.all()) d += s.dim(b) * s.dim(b);
        cy = regular_cycle(s, h, random_hermitian_contraction(d, seed), counit_cutoff(s, h));
    } else if (which == "character") {
        if (!group) throw StructuralError("a character cycle needs a commutative build");
        cy = character_cycle(s, h, first_character(s, *group), Mat::Zero(1, 1));
    } else if (which.rfind("trivial:", 0) == 0) {
        const int m = std::stoi(which.substr(8));
        if (m < 1) throw StructuralError("trivial cycle needs m >= 1");
        Mat F = Mat::Zero(m, m);
        for (int i = 0; i < m; ++i) F(i, i) = i % 2 == 0 ? 1.0 : -1.0;
        cy = trivial_cycle(s, h, m, F);
    } else {
        throw StructuralError("unknown cycle '" + which + "' (expected regular, character or trivial:m)");
    }
    doc.coaction = cy.coaction;
    doc.cycle = cy.rep;
    doc.cycle_kind = cy.kind;
}

int verdict_code(const Report& r) { return r.passed() ? 0 : 1; }

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err)
{
    CLI::App app{"Numerical verification kernel for discrete quantum groups", "dqg"};
    app.require_subcommand(1);
    app.fallthrough();
    GlobalOptions g;
    app.add_option("--tol", g.tol, "Residual tolerance")->check(CLI::PositiveNumber);
    app.add_option("--samples", g.samples, "Random samples per case")->check(CLI::NonNegativeNumber);
    app.add_option("--seed", g.seed, "Sampling seed (default: DQG_SEED or 1)");
    app.add_option("--window-grow", g.window_grow, "Extra blocks beyond the certified window")->check(CLI::NonNegativeNumber);
    app.add_option("--format", g.format, "Report format")->check(CLI::IsMember({"text", "machine"}));

    std::string spec_path, h2_path, h2_out, output, group_arg, cycle_arg;
    int steps = 7;
    double q = 1.5, max_spin = 1.0;

    auto* validate = app.add_subcommand("validate", "Structure and bialgebra checks");
    auto* haar = app.add_subcommand("haar", "Haar state and modular element checks");
    auto* dual = app.add_subcommand("dual", "Dual convolution algebra checks");
    auto* module = app.add_subcommand("module", "Corepresentation module checks");
    auto* assemble = app.add_subcommand("assemble", "Averaged operator and assembly-class data");
    auto* homotopy = app.add_subcommand("homotopy", "Cutoff independence along F(t)");
    for (auto* sub : {validate, haar, dual, module, assemble, homotopy})
        sub->add_option("spec", spec_path, "Spec file")->required();
    homotopy->add_option("--h2", h2_path, "Element file with the second cutoff")->required();
    homotopy->add_option("--steps", steps, "Sample points in [0, 1]")->check(CLI::PositiveNumber);

    auto* build = app.add_subcommand("build", "Write an example spec");
    build->require_subcommand(1);
    auto* b_comm = build->add_subcommand("commutative", "Functions on a finite group");
    auto* b_dual = build->add_subcommand("group-dual", "Dual of a finite group");
    auto* b_suq2 = build->add_subcommand("suq2", "Truncated dual of SU_q(2)");
    for (auto* sub : {b_comm, b_dual})
        sub->add_option("group", group_arg, "cyclic:n, symmetric:n or a table file")->required();
    b_suq2->add_option("--q", q, "Deformation parameter")->check(CLI::PositiveNumber);
    b_suq2->add_option("--L", max_spin, "Largest spin")->check(CLI::PositiveNumber);
    for (auto* sub : {b_comm, b_dual, b_suq2}) {
        sub->add_option("-o,--output", output, "Output file (default: stdout)");
        sub->add_option("--cycle", cycle_arg, "Attach a cycle: regular, character or trivial:m");
        sub->add_option("--h2-out", h2_out, "Also write the cutoff phi(1)^(-1/2) 1 as an element file");
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? 0 : 2;
    }

    try {
        const VerifyOptions opt = verify_options(g);
        if (build->parsed()) {
            SpecDocument doc;
            std::optional<GroupTable> group;
            if (b_comm->parsed()) {
                group = group_from(group_arg);
                doc.spec = build_commutative(*group);
            } else if (b_dual->parsed()) {
                doc.spec = build_group_dual(group_from(group_arg));
            } else {
                doc.spec = build_suq2_window(q, max_spin);
            }
            attach_cycle(doc, cycle_arg, group, opt.seed);
            if (!h2_out.empty()) {
                if (!doc.coaction) throw StructuralError("--h2-out needs --cycle");
                const Element h2 = unit_cutoff(doc.spec, haar_from_spec(doc.spec), *doc.coaction);
                std::ofstream f(h2_out, std::ios::binary);
                if (!f) throw StructuralError(h2_out + ": cannot write file");
                f << emit_element(h2, doc.coaction->algebra);
            }
            if (output.empty())
                out << emit_spec(doc);
            else
                save_spec(output, doc);
            return 0;
        }

        const SpecDocument doc = load_spec(spec_path);
        const DqgSpec& s = doc.spec;
        Report r;
        if (validate->parsed()) {
            r = verify_structure(s, opt.tol);
            r.title = "validate";
            r.merge(verify_bialgebra(s, opt));
        } else {
            const HaarData h = haar_from_spec(s);
            if (haar->parsed()) {
                r = verify_haar(s, h, opt);
            } else if (dual->parsed()) {
                r = verify_dual(s, h, opt);
            } else if (module->parsed()) {
                if (doc.cycle) {
                    const Cycle cy = doc.make_cycle();
                    r = verify_module(s, h, cy.rep.corep, represent(cy.rep.pi, cy.coaction.h), opt);
                } else {
                    r = verify_theta_identities(s, h, opt);
                    r.skipped("module structure", "spec has no cycle section");
                }
                r.title = "module";
            } else if (assemble->parsed()) {
                r = assembly_class(s, h, doc.make_cycle(), opt).report;
            } else if (homotopy->parsed()) {
                const Cycle cy = doc.make_cycle();
                const Element h2 = parse_element(read_file(h2_path), cy.coaction.algebra);
                r = homotopy_check(s, h, cy, cy.coaction.h, h2, steps, opt);
            }
        }
        emit(out, r, g, opt, s.name);
        return verdict_code(r);
    } catch (const WindowOverflow& e) {
        err << "dqg: window error: " << e.what() << "\n";
        return 2;
    } catch (const StructuralError& e) {
        err << "dqg: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        err << "dqg: " << e.what() << "\n";
        return 2;
    }
}

}  // namespace dqg
