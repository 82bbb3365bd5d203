#pragma once

#include "pta/model.hpp"

#include <map>
#include <string>
#include <vector>

namespace pta {

struct ClockValuation {
  std::map<ClockId, Rat> values;  // total on the PTA's clock set, all >= 0

  static ClockValuation zero(const PTA& pta);
  const Rat& at(const ClockId& c) const;
  bool operator==(const ClockValuation&) const = default;
};

struct State {
  LocationId location;
  ClockValuation valuation;
  bool operator==(const State&) const = default;
};

struct RunStep {
  Rat delay;
  TransitionId transition;
  bool operator==(const RunStep&) const = default;
};

// A run is stored as its (delay, transition) steps from (l0, 0); the state
// sequence is recomputed on demand.
struct Run {
  std::vector<RunStep> steps;
  State final_state;
  bool operator==(const Run&) const = default;
};

// Interleaved location/transition sequence l0, e1, l1, ..., en, ln.
// Transitions are stored as indices into pta.transitions.
struct Path {
  std::vector<LocationId> locations;
  std::vector<int> transitions;

  int length() const { return static_cast<int>(transitions.size()); }
};

// Builds a path starting at the initial location from transition ids,
// checking that consecutive elements agree with the transition relation.
Path make_path(const PTA& pta, const std::vector<TransitionId>& transition_ids);
// Same, from the interleaved form "l0 e1 l1 e2 l2 ..." already split into
// tokens. The explicit locations are checked against the transitions.
Path make_path_interleaved(const PTA& pta, const std::vector<std::string>& tokens);
std::string path_to_string(const PTA& pta, const Path& path);

ClockValuation delay(const ClockValuation& v, const Rat& d);
ClockValuation reset(const ClockValuation& v, const std::vector<ClockId>& lambda);

bool eval_guard(const ClockValuation& v, const Guard& g, const ParamValuation& gamma);

// Delay d, then fire any enabled a-transition. Returns (transition index,
// successor state) pairs in transition declaration order.
std::vector<std::pair<int, State>> step_transitions(const PTA& pta, const ParamValuation& gamma,
                                                    const State& s, const Rat& d, const Symbol& a);
// Successor-state projection of step_transitions with duplicates removed.
std::vector<State> step(const PTA& pta, const ParamValuation& gamma, const State& s, const Rat& d,
                        const Symbol& a);

// True iff firing the path's transitions with the given delays satisfies
// every guard along the way.
bool realize_path(const PTA& pta, const ParamValuation& gamma, const Path& path,
                  const std::vector<Rat>& delays);

// True iff some prefix of the run enters a target location with x0 <= D
// without visiting an avoid location first.
bool check_satisfaction(const PTA& pta, const Run& run, const Spec& spec);

// Replays a run from (l0, 0) and returns the visited states (one per step,
// excluding the initial state). Throws SemanticError if a step is invalid.
std::vector<State> replay_run(const PTA& pta, const ParamValuation& gamma, const Run& run);

// Textual trace: one step per line,
//   delay=<q> fire=<transition> -> <location> [x0=<q> x=<q> ...]
std::string format_run(const PTA& pta, const ParamValuation& gamma, const Run& run);

}  // namespace pta
