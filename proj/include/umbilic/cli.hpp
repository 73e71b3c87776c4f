#pragma once

#include <iosfwd>

namespace umbilic {

/// Exit codes of the command-line tool.
enum ExitCode : int { kExitOk = 0, kExitVerificationFailed = 1, kExitError = 2 };

/// Entry point of the umbilic command-line tool; returns the process exit code.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace umbilic
