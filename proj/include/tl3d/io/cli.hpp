#pragma once

#include <ostream>

namespace tl3d::io {

inline constexpr int kExitOk = 0;
inline constexpr int kExitValidation = 1;
inline constexpr int kExitIo = 2;

/// Subcommands gen, layout, validate, score and serve. Returns the process
/// exit code: 0 success, 1 validation or domain failure, 2 I/O or parse error.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace tl3d::io
