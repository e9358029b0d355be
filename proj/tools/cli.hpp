#pragma once

#include <string>
#include <vector>

namespace qsb {

// Whole CLI behind one function so tests can drive it in-process.  `args`
// excludes the program name.  Returns the process exit code:
//   0 success, 2 configuration or usage problem, 3 statistical anomaly or
//   failed verification, 4 broken internal contract.
int cli_main(std::vector<std::string> args);

} // namespace qsb
