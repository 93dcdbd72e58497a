#pragma once

#include <memory>
#include <ostream>

namespace CLI {
class App;
}

namespace head::cli {

/// Exit codes shared by every subcommand.
inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 2;
inline constexpr int kExitData = 3;

/// Environment variable that supplies the master seed when --rng-seed is
/// neither passed nor set in a config file.
inline constexpr const char* kSeedEnv = "HEAD_RNG_SEED";

/// Builds the full option tree without running anything (used by --help
/// coverage tests).
std::unique_ptr<CLI::App> make_app();

/// Parses argv and dispatches. Reports go to files named by flags; summary
/// tables go to `out`, diagnostics to `err`.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace head::cli
