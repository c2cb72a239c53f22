#pragma once

#include <iosfwd>

namespace topophase {

// Full command-line entry point; returns the process exit code.
// 0 success, 2 configuration/validation error, 3 infeasibility, 4 usage.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace topophase
