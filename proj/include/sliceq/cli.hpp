#pragma once

#include <iostream>
#include <string>
#include <vector>

namespace sliceq {

/// Runs the command-line front end. `args` excludes the program name.
/// Prints one machine-readable result line to `out`; human detail and error
/// messages go to `err`. Exit codes: 0 positive verdict, 1 negative verdict,
/// 2 usage error, 3 input (file/parse) error.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace sliceq
