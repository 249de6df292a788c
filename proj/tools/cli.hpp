#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace pdmpq::cli {

/// Runs one command-line invocation; args exclude the program name. Returns
/// the process exit code: 0 success, 2 configuration error, 3 model/grid
/// mismatch, 4 numeric failure.
int run_command(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace pdmpq::cli
