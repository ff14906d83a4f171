#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace lpfl::cli {

/// Runs the command line given the arguments after the program name.
/// Returns 0 on success/consistent, 1 on clash/inconsistent/not
/// linearizable, 2 on usage or parse errors, 3 when the oracle budget is
/// exceeded.
int run(const std::vector<std::string>& args, std::ostream& out,
        std::ostream& err);

}  // namespace lpfl::cli
