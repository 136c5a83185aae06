#pragma once

#include <ostream>

namespace stablemc::selftest {

/// Property checks over the numeric kernels (special functions, samplers,
/// exit geometry), one [ ok ]/[FAIL] line per check.  Returns true when all
/// checks pass.
bool run(std::ostream& out);

}  // namespace stablemc::selftest
