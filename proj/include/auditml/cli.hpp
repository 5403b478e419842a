#pragma once

namespace auditml::cli {

inline constexpr const char* kVersion = "1.0.0";

// Entry point shared by the binary and the integration tests. Returns the
// process exit code: 0 success, 2 usage/config error, 3 data error,
// 4 training/convergence error.
int run(int argc, const char* const* argv);

}  // namespace auditml::cli
