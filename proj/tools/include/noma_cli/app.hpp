// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <iosfwd>

namespace noma::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitValidationFailed = 1;
inline constexpr int kExitConfigError = 2;
inline constexpr int kExitNumericalError = 3;

/// Entry point of noma-bench. Messages go to `out`, errors to `err`.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace noma::cli
