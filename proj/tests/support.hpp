#pragma once

#include <map>
#include <string>
#include <vector>

#include "dqg/builders.hpp"
#include "dqg/spec_io.hpp"

namespace dqg::testing {

std::string data_path(const std::string& file);
SpecDocument load_data(const std::string& file);

// Worst residual among checks whose name contains `needle`; -1 if none.
double worst(const Report& r, const std::string& needle = "");
// Worst residual among PASS/FAIL checks.
double worst_certified(const Report& r);

// Perturbs the isometry of entry (target, left, right) by `eps` and
// re-isometrizes it with the polar factor.
DqgSpec corrupt_entry(DqgSpec s, BlockId target, BlockId left, BlockId right, double eps, std::uint64_t seed);

// ρ(s) e_x = e_{x s⁻¹} on ℓ²(Γ).
Mat right_translation(const GroupTable& g, int s);

// Check name → verdict, read back from a machine-format report.
std::map<std::string, std::string> machine_verdicts(const std::string& report);

// Certified checks that pass in `before` and fail in `after`.
std::vector<std::string> flipped_to_fail(const std::string& before, const std::string& after);

// Runs the command-line front end in-process.
struct CliRun {
    int code = 0;
    std::string out;
    std::string err;
};
CliRun run_dqg(const std::vector<std::string>& args);

}  // namespace dqg::testing
