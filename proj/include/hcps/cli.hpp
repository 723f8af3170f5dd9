#pragma once

#include <iosfwd>

namespace hcps {

// Exit codes shared by every subcommand.
inline constexpr int kExitOk = 0;
inline constexpr int kExitConfig = 1;
inline constexpr int kExitNumerical = 2;

// hcps gate|validate|coeffs|sweep|lindblad --config <path> [--out <dir>]
//      [--fock N] [--eta <value>|auto]
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace hcps
