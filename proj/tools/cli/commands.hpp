#pragma once

namespace ggmlab::cli {

enum ExitCode : int {
  kExitOk = 0,
  kExitUsage = 2,           // bad arguments, config or input files
  kExitNotConverged = 3,    // outputs written but flagged non-convergent
};

/// Entry point shared by the executable and the tests.
int run(int argc, const char* const* argv);

}  // namespace ggmlab::cli
