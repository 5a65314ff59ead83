#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace hfsign {

// Runs one subcommand. Exit codes: 0 success, 1 verification or acceptance
// failure, 2 usage or input error.
int run_cli(const std::vector<std::string>& args, std::ostream& out,
            std::ostream& err);

}  // namespace hfsign
