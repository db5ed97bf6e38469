#pragma once
#include <iosfwd>
#include <string>
#include <vector>

namespace spolight::cli {

/// Runs one CLI invocation. Returns 0 on success, 2 on usage errors
/// (unknown flags, missing or out-of-range values), 1 on runtime or
/// numerical failures. Output goes to `out` or the --out path; diagnostics
/// go to `err`.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace spolight::cli
