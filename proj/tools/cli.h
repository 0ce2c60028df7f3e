// SPDX-License-Identifier: GPL-2.0-only

#ifndef RACHSIM_TOOLS_CLI_H
#define RACHSIM_TOOLS_CLI_H

#include <ostream>

namespace rachsim::cli
{

inline constexpr int kExitOk = 0;
inline constexpr int kExitRuntimeError = 1;
inline constexpr int kExitConfigError = 2;

/// Entry point of the `rachsim` command; `out` receives regular output, `err` diagnostics.
int Run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

} // namespace rachsim::cli

#endif // RACHSIM_TOOLS_CLI_H
