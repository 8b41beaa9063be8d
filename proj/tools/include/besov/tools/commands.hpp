#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace besov::tools {

enum ExitCode : int {
    kExitSuccess = 0,
    kExitNumeric = 1,
    kExitUsage = 2,
    kExitConfig = 3,
    kExitIo = 4,
};

/// Runs `besovkit <args...>` in-process; args exclude the program name.
int run_command(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

/// Entry point used by the executable.
int run_cli(int argc, char** argv);

}  // namespace besov::tools
