#ifndef LAPRMT_CLI_HPP
#define LAPRMT_CLI_HPP

#include <iosfwd>

namespace laprmt::cli {

/// Exit codes: 0 success, 1 runtime failure, 2 usage error.
inline constexpr int kExitOk = 0;
inline constexpr int kExitFailure = 1;
inline constexpr int kExitUsage = 2;

/// Entry point shared by the executable and the tests. Data goes to `out`
/// (or to files named by --out/--manifest), diagnostics to `err`.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace laprmt::cli

#endif  // LAPRMT_CLI_HPP
