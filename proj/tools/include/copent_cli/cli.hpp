#pragma once

#include <iosfwd>
#include <stdexcept>

namespace copent::cli {

enum ExitCode : int { kOk = 0, kUsage = 1, kData = 2 };

// Bad flags or inconsistent options; maps to exit code 1.
class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Entry point behind the `copent` binary. Results go to files or `out`;
// warnings and errors go to `err`, one line each.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace copent::cli
