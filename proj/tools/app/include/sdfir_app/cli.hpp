#pragma once

#include <sdfir/errors.hpp>

#include <iosfwd>

namespace sdfir::app {

enum ExitCode : int {
  kExitOk = 0,
  kExitConfig = 2,
  kExitValidation = 3,
  kExitSolver = 4,
};

ExitCode exit_code_for(ErrorCode code);

/// Entry point of the `sdfir` tool; returns the process exit code. Errors are
/// reported on `err` as one line:
///   error code=<ErrorName> subject=<name or -> message=<text>
int run_cli(int argc, char** argv, std::ostream& out, std::ostream& err);

}  // namespace sdfir::app
