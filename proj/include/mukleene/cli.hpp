#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace mukleene::cli {

// Runs one command line against the given streams. Exit codes: 0 success,
// 1 domain error (an Errc is printed on err), 2 usage error.
int dispatch(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);
int dispatch(int argc, char** argv, std::ostream& out, std::ostream& err);

}  // namespace mukleene::cli
