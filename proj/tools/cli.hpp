#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace relaylab::cli {

// Exit codes: 0 success, 1 validation gate failure, 2 config/usage error,
// 3 numeric failure.
inline constexpr int kExitOk = 0;
inline constexpr int kExitGateFailure = 1;
inline constexpr int kExitConfigError = 2;
inline constexpr int kExitNumericError = 3;

/// Runs the command line given as argv-style arguments (without argv[0]).
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

int main_entry(int argc, char** argv);

}  // namespace relaylab::cli
