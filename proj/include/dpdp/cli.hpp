#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace dpdp::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitValidation = 1;
inline constexpr int kExitRuntime = 2;

/// Runs one command line (without the program name). Normal output goes to
/// `out`, diagnostics to `err`.
int main(std::vector<std::string> args, std::ostream& out, std::ostream& err);

}  // namespace dpdp::cli
