// cli.hpp — command-line front end

#pragma once

#include <string>
#include <vector>

namespace qdb::cli {

// Exit codes: 0 all requested checks pass, 1 a check fails (report still
// emitted), 2 input/configuration error.
int run(int argc, const char* const* argv);
int run(const std::vector<std::string>& args); // without program name

} // namespace qdb::cli
