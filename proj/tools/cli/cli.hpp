#pragma once

// Command-line front end.
//
//   mmwcov ap|cp|rate|mc|sweep|selftest [options]
//
// Output is a CSV table preceded by '#' comment lines that echo the
// normalized base scenario (after --config and every --set) and the
// evaluation settings.
//
// Exit codes: 0 success, 2 invalid command line or configuration,
// 3 numerical non-convergence, 1 anything else (including a failed selftest).

#include <ostream>
#include <string>
#include <vector>

namespace mmwcov::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitFailure = 1;
inline constexpr int kExitConfig = 2;
inline constexpr int kExitNumerical = 3;

/// `args` excludes the program name.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace mmwcov::cli
