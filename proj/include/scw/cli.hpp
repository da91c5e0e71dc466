#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace scw::cli {

// Runs one invocation. `args` excludes the program name; the model count or
// report goes to `out`, diagnostics to `err`. Returns the process exit code:
// 0 success, 2 CNF problems, 3 decomposition problems, 4 refused budgets,
// 64 usage errors, 1 failed verification.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace scw::cli
