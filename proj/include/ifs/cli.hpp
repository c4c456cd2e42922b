// cli.hpp — command dispatch for the ifstool binary, separated so tests can
// drive commands in-process.
#pragma once

#include <string>
#include <vector>

namespace ifs::cli {

inline constexpr const char* kToolVersion = "0.1.0";

// Exit codes: 0 ok, 2 config error, 3 empty shift, 4 unconverged attractor,
// 5 cycle, 6 probe, 7 separation, 8 factor failures.
int run(const std::vector<std::string>& args);
int run(int argc, char** argv);

}  // namespace ifs::cli
