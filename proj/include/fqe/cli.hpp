// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace fqe::cli {

enum ExitCode : int {
  kExitConverged = 0,
  kExitMaxIters = 2,
  kExitInputError = 3,
  kExitInvariant = 4,
};

/// Runs the command line tool; args excludes the program name.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace fqe::cli
