#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace heisenlab::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitFailure = 1;
inline constexpr int kExitValidation = 2;
inline constexpr int kExitCap = 3;

/// Parses argv (program name first) and runs one subcommand. Artifacts go to
/// `out` unless --out names a file; diagnostics and usage go to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace heisenlab::cli
