// Command-line front end, exposed as a function so tests can drive it
// in-process.

#ifndef VEMCIP_CLI_HPP
#define VEMCIP_CLI_HPP

#include <iosfwd>

namespace vemcip::cli {

/// Exit codes: 0 success, 2 configuration/usage error, 3 runtime failure
/// (solver, I/O).
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

} // namespace vemcip::cli

#endif
