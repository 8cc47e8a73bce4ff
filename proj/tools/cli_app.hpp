#pragma once

#include <iostream>
#include <string>
#include <vector>

namespace fairrep::cli {

/// Exit codes: 0 success or verdict true, 1 verdict false, 2 usage or input
/// error, 3 internal invariant violation.
int run(std::vector<std::string> args, std::ostream& out, std::ostream& err);

}  // namespace fairrep::cli
