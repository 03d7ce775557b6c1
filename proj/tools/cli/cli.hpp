#ifndef SENTPW_TOOLS_CLI_HPP
#define SENTPW_TOOLS_CLI_HPP

#include <iosfwd>
#include <string>
#include <vector>

namespace sentpw::cli {

enum ExitCode : int {
    kOk = 0,
    kRuntimeError = 1,
    kConfigError = 2,
    kDataError = 3,
};

// Parses argv (argv[0] is the program name), runs one subcommand and returns
// its exit code. Results go to `out`; the resolved config, usage text and
// error messages go to `err`.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

// Same, with the arguments after the program name.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace sentpw::cli

#endif  // SENTPW_TOOLS_CLI_HPP
