#pragma once

// Batch front end.  Every command prints one JSON report on `out`; errors go
// to `err`.  Exit codes: 0 positive decision or success, 1 negative
// decision, 2 input error.

#include <iosfwd>

namespace luka {

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace luka
