#pragma once

#include "pta/model.hpp"
#include "pta/semantics.hpp"

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace pta {

// Exploration-tree node. Children are grouped per input symbol; a group is
// only retained while every child still admits at least one candidate
// solution (ps > 0). ps is the number of proper sub-trees through this
// node: 1 at target leaves, 0 at avoid nodes, otherwise the sum over
// retained inputs of the product over that input's children.
struct TreeNode {
  int id = -1;
  LocationId label;
  int parent = -1;
  int incoming = -1;  // transition index into the PTA, -1 at the root
  int depth = 0;      // transitions from the root

  struct InputGroup {
    Symbol input;
    std::vector<int> children;
    std::uint64_t count = 0;  // product of the children's ps
  };
  std::vector<InputGroup> inputs;  // alphabet order
  std::uint64_t ps = 0;
};

struct ExplorationTree {
  PTA pta;  // the (normalized) automaton the tree was unfolded from
  std::vector<TreeNode> nodes;  // arena; nodes[0] is the root

  const TreeNode& node(int id) const { return nodes.at(static_cast<std::size_t>(id)); }
  // Transition indices of the automaton path from the root to `id`.
  std::vector<int> path_transitions(int id) const;
  Path automaton_path(int id) const;
};

// A candidate solution: a connected, avoid-free sub-tree in which every
// internal node commits to exactly one input and keeps all of that input's
// children, and every leaf is target-labelled.
struct ProperSubTree {
  const ExplorationTree* tree = nullptr;
  std::vector<int> nodes;           // preorder, nodes.front() is the root
  std::map<int, Symbol> chosen;     // internal node -> committed input

  bool contains(int id) const;
  bool is_internal(int id) const { return chosen.count(id) != 0; }
  std::vector<int> internal_nodes() const;  // preorder
  std::vector<int> leaves() const;          // preorder
  // Children of an internal node under its chosen input.
  const std::vector<int>& children_of(int id) const;
};

// Checks the proper-sub-tree conditions against the PTA and spec; returns
// a description of the first violated clause, or nullopt when well-formed.
std::optional<std::string> check_proper(const ProperSubTree& sub, const Spec& spec);

// Deterministic bijection between {1..root ps} and the proper sub-trees
// surviving pruning: the index first selects among retained inputs (each
// contributing the product of its children's counts), then the residue is
// distributed across the children in order. Throws std::out_of_range for
// i outside {1..ps}.
ProperSubTree get_solution_tree(const ExplorationTree& tree, std::uint64_t index);

}  // namespace pta
