#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace pegd::cli {

enum ExitCode : int {
    kOk = 0,
    kRejected = 1,
    kUsage = 2,
    kNotWellFormed = 3,
    kBudget = 4,
    kDisagree = 5,
};

/// Runs one invocation. `args` excludes the program name.
int run(const std::vector<std::string>& args, std::istream& in, std::ostream& out, std::ostream& err);

}  // namespace pegd::cli
