#pragma once

namespace ahvol::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 1;
inline constexpr int kExitVerification = 2;

/// Parses argv, runs one subcommand and writes its artifacts to the output
/// directory (--out-dir, else $AHVOL_OUTPUT_DIR, else ./ahvol_out).
int run(int argc, const char* const* argv);

}  // namespace ahvol::cli
