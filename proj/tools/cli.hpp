#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace uplink::cli {

enum ExitCode : int {
  kExitOk = 0,
  kExitFailure = 1,
  kExitUsage = 2,
  kExitNumerical = 3,
  kExitSimulationConfig = 4,
};

// Entry point shared by the executable and the tests. `args` excludes the
// program name. CSV goes to --out or `out`; diagnostics and summaries to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace uplink::cli
