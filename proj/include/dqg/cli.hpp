#pragma once

#include <iosfwd>

namespace dqg {

// Exit codes: 0 every verdict passed, 1 a check failed, 2 structural,
// window or usage error.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace dqg
