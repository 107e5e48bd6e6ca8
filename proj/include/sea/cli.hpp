#ifndef SEA_CLI_HPP
#define SEA_CLI_HPP

#include <iosfwd>

namespace sea::cli {

// Full command-line surface: parses argv, runs one subcommand, writes the
// report to out and diagnostics to err.  Returns the process exit code:
// 0 success, 2 usage error, 3 data not found, 4 resource budget exceeded,
// 5 bad reduction, 1 anything else.  Output bytes depend only on the
// arguments, never on --threads or completion order.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

} // namespace sea::cli

#endif
