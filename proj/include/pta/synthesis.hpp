#pragma once

#include "pta/encoding.hpp"
#include "pta/lp.hpp"
#include "pta/model.hpp"
#include "pta/tree.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace pta {

struct SynthesisConfig {
  int max_depth = 64;          // bound on root-to-node transition count
  bool enumerate_all = false;  // solve every candidate, not just the first
  bool prune = true;           // path-feasibility pruning (off: structural only)
};

struct ForwardResult {
  ExplorationTree tree;
  std::uint64_t ps = 0;
  bool bound_hit = false;        // some branch was truncated at max_depth
  std::uint64_t path_checks = 0; // feasibility checks performed
  std::uint64_t prunes = 0;      // (node, input) pairs found path-infeasible
};

// Depth-first exploration with feasibility pruning. Expects a normalized
// PTA (all transitions sharing source and input carry the same guard).
// For each (node, input) the path extended by that input is checked once;
// infeasible extensions are not expanded, and an input whose children
// cannot all reach a target is dropped together with its sub-trees.
ForwardResult forward_analysis(const PTA& pta, const Spec& spec, const SynthesisConfig& cfg,
                               LpContext& ctx, int threads = 1);

// Feedback control strategy: per internal tree node a (delay, input) pair,
// plus the parameter valuation. Entries are keyed by the transition
// sequence of the node's root path, so lookups work on automaton paths.
struct Strategy {
  ParamValuation valuation;

  struct Entry {
    std::string node;                  // node id, e.g. "n3"
    std::vector<TransitionId> path;    // transitions from the root (may be empty)
    Rat delay;
    Symbol input;
  };
  struct Leaf {
    std::string node;
    std::vector<TransitionId> path;
  };
  std::vector<Entry> entries;  // preorder
  std::vector<Leaf> leaves;    // preorder

  const Entry* find(const std::vector<TransitionId>& path) const;
  bool is_leaf_path(const std::vector<TransitionId>& path) const;
};

// Reads the strategy off a tree-system witness: entry delay = witness value
// of d@n<id>, input = the node's committed input, valuation = the g@ values.
// Throws SemanticError if the witness does not cover the sub-tree.
Strategy extract_strategy(const ProperSubTree& sub, const Witness& witness);

enum class Outcome { Solution, NoSolution, BoundHit };
const char* outcome_name(Outcome o);

struct SynthesisResult {
  Outcome outcome = Outcome::NoSolution;
  std::optional<Strategy> strategy;
  std::vector<Strategy> all;  // every feasible candidate (enumerate_all)
  std::uint64_t ps = 0;
  std::uint64_t candidates_solved = 0;
  std::uint64_t prunes = 0;
  std::uint64_t path_checks = 0;
  bool bound_hit = false;
};

// Full pipeline: normalize, explore with pruning, then solve the tree
// system of each candidate in index order until one is feasible. The first
// feasible candidate is returned regardless of thread count.
SynthesisResult synthesize(const PTA& pta, const Spec& spec, const SynthesisConfig& cfg,
                           LpContext& ctx, int threads = 1);

// Strategy file format:
//   gamma <param>=<nat> ...
//   node <id> path=<l0,e..,l..> delay=<rational> input=<symbol>
//   leaf <id> path=<...>
std::string strategy_to_text(const PTA& pta, const Strategy& strategy);
Strategy strategy_from_text(const PTA& pta, const std::string& text);  // throws FormatError

}  // namespace pta
