#pragma once

#include <string>
#include <vector>

namespace statage::cli {

/// Runs the command line (args[0] is the program name). Returns 0 on success,
/// 1 on configuration or feasibility errors, 2 on usage errors.
int run(const std::vector<std::string>& args);

}  // namespace statage::cli
