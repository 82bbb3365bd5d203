#include "pta/validate.hpp"

#include <exception>
#include <map>
#include <sstream>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace pta {

const char* violation_reason_name(Violation::Reason r) {
  switch (r) {
    case Violation::Reason::AvoidHit: return "avoid-hit";
    case Violation::Reason::DeadlineExceeded: return "deadline-exceeded";
    case Violation::Reason::OffTree: return "off-tree path";
    case Violation::Reason::Stuck: return "stuck";
  }
  return "?";
}

std::string ValidationReport::summary() const {
  std::ostringstream out;
  out << "VALIDATION ok=" << (ok ? "true" : "false") << " runs=" << runs_checked
      << " violations=" << violations.size();
  return out.str();
}

namespace {

// Strategy entries keyed by transition sequence, unfolded into a trie so a
// replay step is one map lookup instead of a whole-path comparison.
struct TrieNode {
  std::map<TransitionId, int> children;
  const Strategy::Entry* entry = nullptr;
};

std::vector<TrieNode> build_trie(const Strategy& strategy) {
  std::vector<TrieNode> trie(1);
  auto walk = [&](const std::vector<TransitionId>& path) {
    int cur = 0;
    for (const auto& id : path) {
      auto [it, inserted] = trie[static_cast<std::size_t>(cur)].children.try_emplace(
          id, static_cast<int>(trie.size()));
      if (inserted) trie.emplace_back();
      cur = it->second;
    }
    return cur;
  };
  for (const auto& e : strategy.entries) trie[static_cast<std::size_t>(walk(e.path))].entry = &e;
  for (const auto& l : strategy.leaves) walk(l.path);
  return trie;
}

// Branch history kept as parent pointers; full runs are only materialized
// for violations.
struct HistStep {
  int parent;
  Rat delay;
  int transition;  // index into the instantiated automaton
};

struct Item {
  State state;
  int trie = 0;
  int hist = -1;
};

struct StepOutcome {
  bool terminal = false;
  std::optional<Violation::Reason> reason;
  // (transition index, delay, successor) triples for non-terminal items.
  std::vector<std::pair<int, State>> children;
  Rat delay;
};

struct Replayer {
  const PTA& ta;  // instantiated, parameter-free
  const Spec& spec;
  std::vector<TrieNode> trie;
  ParamValuation no_params;

  Replayer(const PTA& ta_, const Spec& spec_, const Strategy& strategy)
      : ta(ta_), spec(spec_), trie(build_trie(strategy)) {}

  StepOutcome process(const Item& item) const {
    StepOutcome out;
    const LocationId& l = item.state.location;
    if (spec.is_avoid(l)) {
      out.terminal = true;
      out.reason = Violation::Reason::AvoidHit;
      return out;
    }
    if (spec.is_target(l)) {
      out.terminal = true;
      if (item.state.valuation.at(kGlobalClock) > Rat(spec.deadline))
        out.reason = Violation::Reason::DeadlineExceeded;
      return out;
    }
    const Strategy::Entry* entry =
        item.trie >= 0 ? trie[static_cast<std::size_t>(item.trie)].entry : nullptr;
    if (!entry) {
      out.terminal = true;
      out.reason = Violation::Reason::OffTree;
      return out;
    }
    out.children = step_transitions(ta, no_params, item.state, entry->delay, entry->input);
    if (out.children.empty()) {
      out.terminal = true;
      out.reason = Violation::Reason::Stuck;
    }
    out.delay = entry->delay;
    return out;
  }

  int trie_child(int trie_idx, int transition) const {
    if (trie_idx < 0) return -1;
    auto it = trie[static_cast<std::size_t>(trie_idx)].children.find(
        ta.transitions[static_cast<std::size_t>(transition)].id);
    return it == trie[static_cast<std::size_t>(trie_idx)].children.end() ? -1 : it->second;
  }

  Run materialize(const Item& item, const std::vector<HistStep>& history) const {
    Run run;
    run.final_state = item.state;
    for (int cur = item.hist; cur != -1; cur = history[static_cast<std::size_t>(cur)].parent) {
      const HistStep& h = history[static_cast<std::size_t>(cur)];
      run.steps.push_back({h.delay, ta.transitions[static_cast<std::size_t>(h.transition)].id});
    }
    std::reverse(run.steps.begin(), run.steps.end());
    return run;
  }
};

ValidationReport replay_all(const PTA& ta, const Spec& spec, const Strategy& strategy,
                            int threads) {
  Replayer replayer(ta, spec, strategy);
  ValidationReport report;
  std::vector<HistStep> history;

  std::vector<Item> frontier{{State{ta.init, ClockValuation::zero(ta)}, 0, -1}};
  while (!frontier.empty()) {
    std::vector<StepOutcome> outcomes(frontier.size());
    if (threads > 1) {
      std::exception_ptr error;
#ifdef _OPENMP
#pragma omp parallel for num_threads(threads) schedule(static)
#endif
      for (long long i = 0; i < static_cast<long long>(frontier.size()); ++i) {
        try {
          outcomes[static_cast<std::size_t>(i)] =
              replayer.process(frontier[static_cast<std::size_t>(i)]);
        } catch (...) {
#ifdef _OPENMP
#pragma omp critical
#endif
          if (!error) error = std::current_exception();
        }
      }
      if (error) std::rethrow_exception(error);
    } else {
      for (std::size_t i = 0; i < frontier.size(); ++i)
        outcomes[i] = replayer.process(frontier[i]);
    }

    // Merge in frontier order so reports are identical for any thread count.
    std::vector<Item> next;
    for (std::size_t i = 0; i < frontier.size(); ++i) {
      StepOutcome& outcome = outcomes[i];
      if (outcome.terminal) {
        ++report.runs_checked;
        if (outcome.reason)
          report.violations.push_back(
              {*outcome.reason, replayer.materialize(frontier[i], history)});
        continue;
      }
      for (auto& [tidx, state] : outcome.children) {
        int hist = static_cast<int>(history.size());
        history.push_back({frontier[i].hist, outcome.delay, tidx});
        next.push_back({std::move(state), replayer.trie_child(frontier[i].trie, tidx), hist});
      }
    }
    frontier = std::move(next);
  }

  report.ok = report.violations.empty();
  return report;
}

}  // namespace

ValidationReport validate(const PTA& pta, const Spec& spec, const Strategy& strategy,
                          int threads) {
  PTA ta = instantiate(pta, strategy.valuation);  // also checks the valuation
  return replay_all(ta, spec, strategy, threads);
}

ValidationReport validate_serial(const PTA& pta, const Spec& spec, const Strategy& strategy) {
  return validate(pta, spec, strategy, 1);
}

}  // namespace pta
