#pragma once

namespace epinet {

// Principal branch W0 of the Lambert W function, defined for z >= -1/e.
// Halley iteration from a branch-aware initial guess; absolute accuracy
// better than 1e-13 over the branch.  W0(-1/e) = -1 exactly.
double lambert_w0(double z);

} // namespace epinet
