#pragma once

// Command-line front end. Exit codes: 0 success, 2 input error, 3 cap
// exceeded, 4 internal invariant violation.

#include <ostream>
#include <string>
#include <vector>

namespace hoi {

inline constexpr const char* kVersion = "0.1.0";

// args excludes the program name. Primary output goes to `out` (or --out),
// diagnostics and run summaries to `err`.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace hoi
