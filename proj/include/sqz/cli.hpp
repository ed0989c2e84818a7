#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace sqz::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitDomain = 2;
inline constexpr int kExitIo = 3;

/// Runs the `sqzsim` command line (args exclude the program name).
/// Returns 0 on success, 2 on validation/domain errors, 3 on I/O errors.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace sqz::cli
