#pragma once

#include <string>
#include <vector>

namespace agewave {

/// Command-line entry point, separated from main() so tests can drive it
/// in-process. args excludes the program name. Returns the process exit
/// code: 0 success, 1 usage, 2 validation, 3 numerical check, 4 I/O.
int cli_main(const std::vector<std::string>& args);

}  // namespace agewave
