#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace grushin {

/// Command-line driver. Exit codes: 0 pass/converged, 1 usage or input error,
/// 2 flagged numerical non-convergence.
int run_cli(const std::vector<std::string>& args, std::ostream& out,
            std::ostream& err);

}  // namespace grushin
