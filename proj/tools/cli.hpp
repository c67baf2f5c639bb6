#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace men::cli {

/// `args` is argv as given to main, program name first. Exit codes: 0 success, 1 domain error, 2 usage error.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace men::cli
