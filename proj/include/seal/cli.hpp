#pragma once

#include <string>
#include <vector>

namespace seal {

inline constexpr int kExitOk = 0;
inline constexpr int kExitValidation = 1;
inline constexpr int kExitRuntime = 2;

// Entry point of the seal command line. Returns 0 on success, 1 on validation errors
// (bad flags, bad config, bad data), 2 when a run fails.
int run_cli(int argc, const char* const* argv);
int run_cli(const std::vector<std::string>& args);  // args exclude the program name

}  // namespace seal
