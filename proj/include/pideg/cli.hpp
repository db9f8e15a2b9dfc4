#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace pideg {

/// Full command-line driver. Returns the process exit code: 0 on success,
/// 1 on runtime failures (numeric blow-up, unwritable output), 2 on flag or
/// input validation errors.
int run_cli(std::vector<std::string> args, std::ostream& out, std::ostream& err);

}  // namespace pideg
