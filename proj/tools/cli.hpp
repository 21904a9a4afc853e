#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace occ {

enum ExitCode { kExitOk = 0, kExitConfig = 1, kExitUsage = 2, kExitViolated = 3 };

// args excludes the program name.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace occ
