#pragma once

#include <ostream>
#include <string>
#include <vector>

#include "nfcf/error.hpp"

namespace nfcf {

enum ExitCode : int { kExitOk = 0, kExitAssertion = 1, kExitInput = 2, kExitExhausted = 3 };

/// Exit code for a library error: SearchExhausted → 3, certification and
/// floor failures → 1, everything else (bad input) → 2.
int exit_code_for(Errc code);

/// Runs the command line `args` (args[0] is the program name). Reports go
/// to out, diagnostics to err.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace nfcf
