#include "pta/semantics.hpp"

#include <algorithm>
#include <sstream>

namespace pta {

ClockValuation ClockValuation::zero(const PTA& pta) {
  ClockValuation v;
  for (const auto& c : pta.clocks) v.values[c] = 0;
  return v;
}

const Rat& ClockValuation::at(const ClockId& c) const {
  auto it = values.find(c);
  if (it == values.end()) throw SemanticError("clock '" + c + "': not in valuation");
  return it->second;
}

Path make_path(const PTA& pta, const std::vector<TransitionId>& transition_ids) {
  Path path;
  path.locations.push_back(pta.init);
  for (const auto& id : transition_ids) {
    auto idx = pta.transition_index(id);
    if (!idx) throw SemanticError("transition '" + id + "': unknown transition");
    const Transition& t = pta.transitions[*idx];
    if (t.source != path.locations.back())
      throw SemanticError("transition '" + id + "': source '" + t.source +
                          "' does not match current location '" + path.locations.back() + "'");
    path.transitions.push_back(*idx);
    path.locations.push_back(t.target);
  }
  return path;
}

Path make_path_interleaved(const PTA& pta, const std::vector<std::string>& tokens) {
  if (tokens.empty()) throw SemanticError("empty path");
  if (tokens.size() % 2 == 0) throw SemanticError("path must alternate locations and transitions");
  if (tokens.front() != pta.init)
    throw SemanticError("path must start at the initial location '" + pta.init + "'");
  std::vector<TransitionId> ids;
  for (std::size_t i = 1; i + 1 < tokens.size(); i += 2) ids.push_back(tokens[i]);
  Path path = make_path(pta, ids);
  for (std::size_t i = 0; i < path.locations.size(); ++i)
    if (tokens[2 * i] != path.locations[i])
      throw SemanticError("path location '" + tokens[2 * i] + "' does not match transition target '" +
                          path.locations[i] + "'");
  return path;
}

std::string path_to_string(const PTA& pta, const Path& path) {
  std::string out = path.locations.front();
  for (int i = 0; i < path.length(); ++i) {
    out += "," + pta.transitions[path.transitions[i]].id;
    out += "," + path.locations[i + 1];
  }
  return out;
}

ClockValuation delay(const ClockValuation& v, const Rat& d) {
  if (d < 0) throw SemanticError("negative delay " + rat_to_string(d));
  ClockValuation out = v;
  for (auto& [clock, value] : out.values) value += d;
  return out;
}

ClockValuation reset(const ClockValuation& v, const std::vector<ClockId>& lambda) {
  ClockValuation out = v;
  for (const auto& c : lambda) {
    if (c == kGlobalClock) throw SemanticError("x0 reset forbidden");
    auto it = out.values.find(c);
    if (it == out.values.end()) throw SemanticError("clock '" + c + "': not in valuation");
    it->second = 0;
  }
  return out;
}

bool eval_guard(const ClockValuation& v, const Guard& g, const ParamValuation& gamma) {
  for (const auto& atom : g.atoms)
    if (!rel_holds(v.at(atom.clock), atom.rel, atom.bound.eval(gamma))) return false;
  return true;
}

std::vector<std::pair<int, State>> step_transitions(const PTA& pta, const ParamValuation& gamma,
                                                    const State& s, const Rat& d, const Symbol& a) {
  ClockValuation delayed = delay(s.valuation, d);
  std::vector<std::pair<int, State>> out;
  for (int idx : post(pta, s.location, a)) {
    const Transition& t = pta.transitions[idx];
    if (eval_guard(delayed, t.guard, gamma))
      out.emplace_back(idx, State{t.target, reset(delayed, t.resets)});
  }
  return out;
}

std::vector<State> step(const PTA& pta, const ParamValuation& gamma, const State& s, const Rat& d,
                        const Symbol& a) {
  std::vector<State> out;
  for (auto& [idx, state] : step_transitions(pta, gamma, s, d, a))
    if (std::find(out.begin(), out.end(), state) == out.end()) out.push_back(state);
  return out;
}

bool realize_path(const PTA& pta, const ParamValuation& gamma, const Path& path,
                  const std::vector<Rat>& delays) {
  if (static_cast<int>(delays.size()) != path.length())
    throw SemanticError("delay count " + std::to_string(delays.size()) +
                        " does not match path length " + std::to_string(path.length()));
  ClockValuation v = ClockValuation::zero(pta);
  for (int i = 0; i < path.length(); ++i) {
    const Transition& t = pta.transitions[path.transitions[i]];
    v = delay(v, delays[i]);
    if (!eval_guard(v, t.guard, gamma)) return false;
    v = reset(v, t.resets);
  }
  return true;
}

std::vector<State> replay_run(const PTA& pta, const ParamValuation& gamma, const Run& run) {
  std::vector<State> states;
  State cur{pta.init, ClockValuation::zero(pta)};
  for (const auto& step : run.steps) {
    auto idx = pta.transition_index(step.transition);
    if (!idx) throw SemanticError("transition '" + step.transition + "': unknown transition");
    const Transition& t = pta.transitions[*idx];
    if (t.source != cur.location)
      throw SemanticError("transition '" + step.transition + "' not applicable in location '" +
                          cur.location + "'");
    ClockValuation delayed = delay(cur.valuation, step.delay);
    if (!eval_guard(delayed, t.guard, gamma))
      throw SemanticError("transition '" + step.transition + "': guard not satisfied");
    cur = State{t.target, reset(delayed, t.resets)};
    states.push_back(cur);
  }
  return states;
}

bool check_satisfaction(const PTA& pta, const Run& run, const Spec& spec) {
  // x0 at position i is the sum of the delays so far; locations follow from
  // the transition skeleton alone.
  LocationId loc = pta.init;
  Rat elapsed = 0;
  std::size_t step_index = 0;
  while (true) {
    if (spec.is_target(loc)) return elapsed <= Rat(spec.deadline);
    if (spec.is_avoid(loc)) return false;
    if (step_index == run.steps.size()) return false;
    const RunStep& s = run.steps[step_index++];
    auto idx = pta.transition_index(s.transition);
    if (!idx) throw SemanticError("transition '" + s.transition + "': unknown transition");
    elapsed += s.delay;
    loc = pta.transitions[*idx].target;
  }
}

std::string format_run(const PTA& pta, const ParamValuation& gamma, const Run& run) {
  std::ostringstream out;
  std::vector<State> states = replay_run(pta, gamma, run);
  for (std::size_t i = 0; i < run.steps.size(); ++i) {
    out << "delay=" << rat_to_string(run.steps[i].delay) << " fire=" << run.steps[i].transition
        << " -> " << states[i].location << " [";
    bool first = true;
    for (const auto& c : pta.clocks) {
      if (!first) out << " ";
      out << c << "=" << rat_to_string(states[i].valuation.at(c));
      first = false;
    }
    out << "]\n";
  }
  return out.str();
}

}  // namespace pta
