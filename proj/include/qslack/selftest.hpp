#pragma once

#include <ostream>

namespace qslack {

/// Fast consistency checks; prints one line per check and returns true when all pass.
bool run_selftest(std::ostream &out);

} // namespace qslack
