#ifndef SURVLENS_CLI_H_
#define SURVLENS_CLI_H_

#include <ostream>
#include <string>
#include <vector>

namespace survlens {

inline constexpr char kToolVersion[] = "0.1.0";

inline constexpr int kExitOk = 0;
inline constexpr int kExitInputError = 2;
inline constexpr int kExitNumericError = 3;

// Entry point of the survival-explain command line tool. args[0] is the
// program name. Diagnostics go to `err` as single lines.
int RunCli(const std::vector<std::string>& args, std::ostream& out,
           std::ostream& err);

}  // namespace survlens

#endif  // SURVLENS_CLI_H_
