#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace grasslin {

// Runs one grasslin command. Returns 0 on success, 2 on usage or input
// parse errors, 3 on numerical errors (the error name goes to `err`).
int run_cli(const std::vector<std::string>& args, std::ostream& out,
            std::ostream& err);

}  // namespace grasslin
