#pragma once

#include <iosfwd>

namespace mfa::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitConfig = 2;
inline constexpr int kExitConvergence = 3;
inline constexpr int kExitVerify = 4;

/// Parses argv and runs one subcommand. Results go to --out (written only
/// once the computation has finished) or to `out`; diagnostics go to `err`.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace mfa::cli
