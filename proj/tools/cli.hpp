#pragma once

#include <iosfwd>

namespace poolmarket::cli {

enum ExitCode { kOk = 0, kInputError = 1, kSolverError = 2, kAssertionFailed = 3 };

/// Runs one command line; reports go to `out`, diagnostics to `err`.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace poolmarket::cli
