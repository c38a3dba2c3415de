#pragma once

#include <string>
#include <vector>

namespace hestonabc::cli {

/// Exit codes: 0 success, 1 run or check failure, 2 invalid arguments.
int run_cli(int argc, char** argv);
int run_cli(const std::vector<std::string>& args);

}  // namespace hestonabc::cli
