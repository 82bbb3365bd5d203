#pragma once

#include "pta/core.hpp"

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace pta {

using LocationId = std::string;
using Symbol = std::string;
using TransitionId = std::string;
using ClockId = std::string;

// The global clock: implicitly declared, never reset, measures total
// elapsed time since the start of a run.
inline const ClockId kGlobalClock = "x0";

struct Parameter {
  std::string name;
  std::int64_t lo = 0;  // inclusive, >= 0
  std::int64_t hi = 0;  // inclusive, >= lo
  bool operator==(const Parameter&) const = default;
};

struct ParamValuation {
  std::map<std::string, std::int64_t> values;

  std::int64_t at(const std::string& param) const;  // throws SemanticError if missing
  bool operator==(const ParamValuation&) const = default;
};

// Affine bound of a guard atom: sum of coef*param terms plus a constant,
// all naturals. Terms are kept sorted by parameter name with one entry per
// parameter.
struct AffineParamExpr {
  std::vector<std::pair<std::string, std::int64_t>> terms;
  std::int64_t constant = 0;

  static AffineParamExpr of_constant(std::int64_t c);
  void add_term(const std::string& param, std::int64_t coef);
  bool is_constant() const { return terms.empty(); }
  Rat eval(const ParamValuation& gamma) const;
  std::string to_string() const;
  bool operator==(const AffineParamExpr&) const = default;
};

struct GuardAtom {
  ClockId clock;
  Rel rel = Rel::Le;
  AffineParamExpr bound;

  std::string to_string() const;
  bool operator==(const GuardAtom&) const = default;
};

// Conjunction of atoms; the empty conjunction is `true`.
struct Guard {
  std::vector<GuardAtom> atoms;

  std::string to_string() const;
  bool operator==(const Guard&) const = default;
};

struct Transition {
  TransitionId id;
  LocationId source;
  Symbol input;
  std::vector<ClockId> resets;  // sorted, unique, never contains x0
  Guard guard;
  LocationId target;

  bool resets_clock(const ClockId& c) const;
  bool operator==(const Transition&) const = default;
};

struct PTA {
  std::vector<LocationId> locations;  // declaration order
  LocationId init;
  std::vector<Symbol> alphabet;  // first-occurrence order over transitions
  std::vector<ClockId> clocks;   // x0 first, then declaration order
  std::vector<Parameter> parameters;
  std::vector<Transition> transitions;

  // Fills in what the text format leaves implicit (x0, transition ids,
  // alphabet) and checks every structural invariant. Throws SemanticError.
  void finalize();

  bool has_location(const LocationId& l) const;
  bool has_clock(const ClockId& c) const;
  const Parameter* find_parameter(const std::string& name) const;
  std::optional<int> transition_index(const TransitionId& id) const;
  int alphabet_index(const Symbol& a) const;  // -1 if absent

  bool operator==(const PTA&) const = default;
};

struct Spec {
  std::vector<LocationId> targets;
  std::vector<LocationId> avoids;
  std::int64_t deadline = 0;

  bool is_target(const LocationId& l) const;
  bool is_avoid(const LocationId& l) const;
  void validate(const PTA& pta) const;  // throws SemanticError
  bool operator==(const Spec&) const = default;
};

struct Model {
  PTA pta;
  Spec spec;
  bool operator==(const Model&) const = default;
};

// Replaces every parameter with its value from gamma; the result has no
// parameters and every guard bound is a plain constant.
PTA instantiate(const PTA& pta, const ParamValuation& gamma);

// Input symbols with at least one transition from l, in alphabet order.
std::vector<Symbol> enabled_inputs(const PTA& pta, const LocationId& l);

// Indices of all transitions with the given source and input, in
// declaration order.
std::vector<int> post(const PTA& pta, const LocationId& l, const Symbol& a);

struct NormalizeReport {
  struct Group {
    LocationId source;
    Symbol input;
    Guard merged;
  };
  std::vector<Group> rewritten;
};

struct NormalizeResult {
  PTA pta;
  NormalizeReport report;
};

// Rewrites every (source, input) group whose members carry different guards
// so that each member gets the conjunction of all atoms seen in the group.
// Afterwards all transitions sharing (source, input) have identical guards.
NormalizeResult normalize_guards(const PTA& pta);

// The guard shared by all (l, a) transitions of a normalized PTA.
// Throws SemanticError if the group guards differ.
const Guard& group_guard(const PTA& pta, const LocationId& l, const Symbol& a);

}  // namespace pta
