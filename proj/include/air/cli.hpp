#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace air {

/// Process exit codes of the `air` binary.
enum ExitCode : int {
    kExitOk = 0,
    kExitInternal = 1,
    kExitConfig = 2,
    kExitIngest = 3,
    kExitIndex = 4,
    kExitMissingQrels = 5,
    kExitPortBusy = 6,
};

/// Runs `air <command> [flags]`. `args[0]` is the program name.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace air
