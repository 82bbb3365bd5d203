#pragma once

#include "pta/lp.hpp"
#include "pta/model.hpp"
#include "pta/semantics.hpp"
#include "pta/tree.hpp"

namespace pta {

// Index of the last transition before position i (1-based) that resets x,
// or 0 when x was never reset; x0 always yields 0. The clock's value on
// transition i equals the sum of the delay variables d_k..d_{i-1}.
int last_reset_index(const PTA& pta, const Path& path, int i, const ClockId& x);

// Linear feasibility system whose solutions are exactly the (gamma, delay)
// pairs realizing the path within the deadline: one integer variable g@<p>
// per parameter, one continuous variable d@<i> per path position, one
// constraint per guard atom of every transition, and the deadline over all
// delays. An empty path yields an empty system.
FeasibilitySystem encode_path(const PTA& pta, const Path& path, const Spec& spec);

// Tree analogue: one continuous variable d@n<id> per internal node, shared
// along common prefixes; per internal node one constraint per atom of its
// committed input's guard; per leaf a deadline over the internal nodes of
// its root path. Throws SemanticError when the sub-tree violates the
// proper-sub-tree conditions.
FeasibilitySystem encode_tree(const PTA& pta, const ProperSubTree& sub, const Spec& spec);

}  // namespace pta
