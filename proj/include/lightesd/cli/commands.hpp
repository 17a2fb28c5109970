#pragma once

#include <cstdint>
#include <ostream>

namespace lightesd::cli {

enum ExitCode : int {
    kExitOk = 0,
    kExitInternal = 1,
    kExitParse = 2,
    kExitInvalid = 3,
};

/// Detector seed used when --seed is absent: LIGHTESD_SEED if set, else 42.
std::uint64_t default_seed();

/// Entry point of the `lightesd` tool with subcommands detect, gen and bench.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

} // namespace lightesd::cli
