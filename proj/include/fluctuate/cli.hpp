#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace fluctuate::cli {

// Runs one CLI command. Data goes to `out` (or the --out file), diagnostics to
// `err`. Exit codes: 0 success, 2 validation error, 3 numeric error.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

} // namespace fluctuate::cli
