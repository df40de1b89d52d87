#pragma once

#include <iosfwd>

namespace holo {

// Exit codes: 0 ok, 2 parse error (expression or command line), 3 numeric
// failure, 4 I/O failure.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace holo
