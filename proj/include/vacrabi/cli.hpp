// cli.hpp - the `vacrabi` command line.

#pragma once

#include <iosfwd>

namespace vacrabi::cli {

enum ExitCode : int { ok = 0, validation_error = 1, tolerance_failure = 2 };

// Parses argv and runs one subcommand. Results go to `out` unless --out is
// given, diagnostics and usage text to `err`.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace vacrabi::cli
