#pragma once

#include <iosfwd>

namespace bornsim::cli {

/// Exit codes: 0 success, 1 usage/config/input error, 2 a statistical bound
/// failed under --assert (or the projector set cannot drive a cascade).
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace bornsim::cli
