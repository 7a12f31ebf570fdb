#ifndef FASTJL_TOOLS_CLI_H_
#define FASTJL_TOOLS_CLI_H_

#include <iosfwd>
#include <string>
#include <vector>

namespace fastjl::cli {

inline constexpr const char* kVersion = "0.1.0";

enum ExitCode {
  kOk = 0,
  kUsage = 1,
  kPrecondition = 2,  // privacy, dimension, contract, range, singularity
  kResource = 3,      // work guards and IO
};

// args[0] is the program name. Reports go to `out` unless redirected with
// --out; diagnostics go to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace fastjl::cli

#endif  // FASTJL_TOOLS_CLI_H_
