#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace aqem {

const char* version();

/// Runs one subcommand (train, evaluate, oracle, scaling, simulate-walk).
/// Returns 0 on success, 1 on a validation error, 2 on a runtime error.
int cli_dispatch(int argc, char** argv);
int cli_dispatch(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace aqem
