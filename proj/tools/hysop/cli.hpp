#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace hysop::cli {

// Runs one command line (args excludes the program name). Returns the
// process exit code: 0 on success, 1 for a library error, 2 for a usage
// error. Failures are reported as a single "error: <code>: <message>" line
// on `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace hysop::cli
