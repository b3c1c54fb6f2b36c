#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace pilgrim::cli {

// Runs one command line. Output goes to --out (relative paths resolve against
// PILGRIM_OUTPUT_DIR when set) or to `out`. Returns 0, 2 on bad input, 1 otherwise.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);
int run(int argc, char** argv);

}  // namespace pilgrim::cli
