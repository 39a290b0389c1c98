#include "support.hpp"

#include <sstream>

#include "dqg/cli.hpp"
#include "dqg/rng.hpp"

namespace dqg::testing {

std::string data_path(const std::string& file)
{
    return std::string(DQG_DATA_DIR) + "/" + file;
}

SpecDocument load_data(const std::string& file)
{
    return load_spec(data_path(file));
}

double worst(const Report& r, const std::string& needle)
{
    double w = -1.0;
    for (const Check& c : r.checks)
        if ((c.verdict == Verdict::Pass || c.verdict == Verdict::Fail) && c.name.find(needle) != std::string::npos)
            w = std::max(w, c.residual);
    return w;
}

double worst_certified(const Report& r)
{
    return worst(r, "");
}

DqgSpec corrupt_entry(DqgSpec s, BlockId target, BlockId left, BlockId right, double eps, std::uint64_t seed)
{
    Rng rng(seed);
    for (HomEntry& e : s.delta) {
        if (e.target != target || e.left != left || e.right != right) continue;
        const Mat v = e.isometry + eps * rng.gaussian(static_cast<int>(e.isometry.rows()), static_cast<int>(e.isometry.cols()));
        e.isometry = v * hermitian_power(v.adjoint() * v, -0.5);
        s.finalize();
        return s;
    }
    throw StructuralError("no such delta entry");
}

Mat right_translation(const GroupTable& g, int s)
{
    const int n = g.order();
    Mat r = Mat::Zero(n, n);
    for (int x = 0; x < n; ++x) r(g.mul[x][g.inverse[s]], x) = 1.0;
    return r;
}

std::map<std::string, std::string> machine_verdicts(const std::string& report)
{
    std::map<std::string, std::string> out;
    std::istringstream in(report);
    std::string line;
    while (std::getline(in, line)) {
        if (line.rfind("check\t", 0) != 0) continue;
        const auto a = line.find('\t', 6);
        const auto b = line.find('\t', a + 1);
        out[line.substr(6, a - 6)] = line.substr(a + 1, b - a - 1);
    }
    return out;
}

std::vector<std::string> flipped_to_fail(const std::string& before, const std::string& after)
{
    const auto b = machine_verdicts(before);
    const auto a = machine_verdicts(after);
    std::vector<std::string> flipped;
    for (const auto& [name, verdict] : b) {
        auto it = a.find(name);
        if (verdict == "PASS" && it != a.end() && it->second == "FAIL") flipped.push_back(name);
    }
    return flipped;
}

CliRun run_dqg(const std::vector<std::string>& args)
{
    std::vector<const char*> argv{"dqg"};
    for (const auto& a : args) argv.push_back(a.c_str());
    std::ostringstream out, err;
    CliRun r;
    r.code = run_cli(static_cast<int>(argv.size()), argv.data(), out, err);
    r.out = out.str();
    r.err = err.str();
    return r;
}

}  // namespace dqg::testing
