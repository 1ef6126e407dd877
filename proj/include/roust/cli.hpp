#pragma once

#include <ostream>

namespace roust {

/// Exit codes: 0 success, 1 domain failure, 2 usage or I/O error.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace roust
