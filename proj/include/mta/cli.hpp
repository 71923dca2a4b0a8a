#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace mta {

inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 1;
inline constexpr int kExitData = 2;
inline constexpr int kExitGeneration = 3;

// Entry point of the `mta` tool: generate, solve, eval, bench.
int run_cli(int argc, char** argv, std::ostream& out, std::ostream& err);
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace mta
