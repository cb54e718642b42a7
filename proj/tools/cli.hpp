#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace kinscape::cli {

enum ExitCode { kOk = 0, kPropertyFailure = 1, kUsage = 2 };

// args excludes the program name.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);
int run(int argc, char** argv);

}  // namespace kinscape::cli
