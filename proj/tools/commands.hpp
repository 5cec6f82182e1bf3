// commands.hpp: the qsot command surface

#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace qsot::cli {

enum ExitCode : int { kPass = 0, kCheckFailed = 1, kInputError = 2 };

/// Run one command line (without the program name). Reports go to out,
/// diagnostics to err.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace qsot::cli
