#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace oscfar::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitComputation = 1;
inline constexpr int kExitUsage = 2;

// Runs one invocation. `args` excludes the program name, e.g.
// {"pfa", "--N", "16", "--M", "1", "--n", "5", "--k", "1", "--tau", "2.5"}.
// Reports go to `out` (or --out), diagnostics to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace oscfar::cli
