#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace kecone::cli {

/// Exit codes shared by every subcommand.
enum ExitCode : int {
    kSuccess = 0,
    kNumericalFailure = 1,
    kUsageError = 2,
};

/// Default pass thresholds for `compare`: the tau = 1e4 P(1,1,4) sup errors
/// of f and c^2 with 5% headroom. The R threshold is the trivial bound,
/// since R drops to -tanh(r0) at t_max for every finite tau.
inline constexpr double kDefaultMaxErrorF = 3.8e-5;
inline constexpr double kDefaultMaxErrorCsq = 6.8e-5;
inline constexpr double kDefaultMaxErrorR = 1.0;

/// Runs `kecone <subcommand> [flags]`. args excludes the program name.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace kecone::cli
