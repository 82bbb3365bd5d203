#pragma once

#include "pta/model.hpp"
#include "pta/semantics.hpp"
#include "pta/synthesis.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace pta {

// Exhaustive closed-loop replay: every nondeterministic branch of the
// instantiated automaton is followed, so a passing report is a proof that
// all runs under the strategy satisfy the specification. Replay uses only
// the concrete semantics, never the solver.

struct Violation {
  enum class Reason { AvoidHit, DeadlineExceeded, OffTree, Stuck };
  Reason reason;
  Run run;
};

const char* violation_reason_name(Violation::Reason r);

struct ValidationReport {
  std::uint64_t runs_checked = 0;  // maximal runs replayed (success or violation)
  std::vector<Violation> violations;
  bool ok = false;  // iff violations is empty

  // Machine-readable summary: VALIDATION ok=<bool> runs=<n> violations=<n>
  std::string summary() const;
};

// Throws SemanticError when the strategy's valuation is missing a parameter
// or out of domain.
ValidationReport validate(const PTA& pta, const Spec& spec, const Strategy& strategy,
                          int threads = 1);

// Serial reference (identical report).
ValidationReport validate_serial(const PTA& pta, const Spec& spec, const Strategy& strategy);

}  // namespace pta
