#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace rdeval {

/// Exit codes shared by every subcommand:
///   0  success / consistent verdict
///   1  methodology conflict (sign_conflict or magnitude_divergence)
///   2  input or flag error
///   3  curves do not overlap
int run_cli(std::vector<std::string> args, std::ostream& out, std::ostream& err);

}  // namespace rdeval
