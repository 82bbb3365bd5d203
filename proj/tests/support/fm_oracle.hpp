#pragma once

// Independent feasibility oracle used to cross-check the simplex-based
// solver: Fourier-Motzkin elimination over exact rationals, with strictness
// tracked through combinations, plus plain recursive grid enumeration for
// integer variables. Deliberately shares no code with the solver.

#include "pta/lp.hpp"

#include <vector>

namespace pta::testing {

struct FmRow {
  std::vector<Rat> coefs;  // one per variable
  bool strict = false;     // sum < rhs instead of sum <= rhs
  Rat rhs;
};

bool fm_feasible(int nvars, std::vector<FmRow> rows);

// Continuous-only system; the implicit x >= 0 bounds are included.
bool fm_feasible_system(const FeasibilitySystem& system);

// Mixed system: enumerates every integer assignment recursively and checks
// each substituted continuous system with fm_feasible_system.
bool fm_feasible_mixed(const FeasibilitySystem& system);

}  // namespace pta::testing
