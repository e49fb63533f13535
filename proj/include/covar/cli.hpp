#pragma once

#include <string>
#include <vector>

namespace covar::cli {

/// Parses argv and dispatches to the requested subcommand
/// (measure | sweep | backtest | verify | cloud).
/// Exit codes: 0 success, 1 domain/config error, 2 numerical non-convergence.
int run(const std::vector<std::string>& args);
int run(int argc, const char* const* argv);

}  // namespace covar::cli
