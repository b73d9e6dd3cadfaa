#pragma once

#include <iosfwd>

namespace pascomb {

/// CLI entry point. Exit codes: 0 success, 2 config error, 3 runtime failure.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace pascomb
