#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace agti::cli {

// Process exit statuses.
enum ExitCode : int {
  kOk = 0,
  kUsage = 1,
  kIoError = 2,
  kParseError = 3,
  kDegenerate = 4,
  kIndependenceViolation = 5,
  kUnphysical = 6,  // only unphysical or non-fitting roots
  kAmbiguous = 7,
  kInsufficient = 8,
  kInternal = 9,
};

// Entry point behind the `agti` binary. args excludes the program name.
// "-" as an input path reads `in`; without --out, documents go to `out`.
int run(const std::vector<std::string> &args, std::istream &in, std::ostream &out,
        std::ostream &err);

}  // namespace agti::cli
