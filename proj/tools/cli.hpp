#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace contactlab {

// Runs the contactlab command line in-process. Returns the process exit code:
// 0 success, 1 computation error, 2 usage error.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace contactlab
