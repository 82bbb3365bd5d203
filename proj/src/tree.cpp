#include "pta/tree.hpp"

#include <algorithm>

namespace pta {

std::vector<int> ExplorationTree::path_transitions(int id) const {
  std::vector<int> out;
  for (int cur = id; cur != 0; cur = node(cur).parent) out.push_back(node(cur).incoming);
  std::reverse(out.begin(), out.end());
  return out;
}

Path ExplorationTree::automaton_path(int id) const {
  Path path;
  path.locations.push_back(nodes[0].label);
  for (int t : path_transitions(id)) {
    path.transitions.push_back(t);
    path.locations.push_back(pta.transitions[t].target);
  }
  return path;
}

bool ProperSubTree::contains(int id) const {
  return std::find(nodes.begin(), nodes.end(), id) != nodes.end();
}

std::vector<int> ProperSubTree::internal_nodes() const {
  std::vector<int> out;
  for (int id : nodes)
    if (is_internal(id)) out.push_back(id);
  return out;
}

std::vector<int> ProperSubTree::leaves() const {
  std::vector<int> out;
  for (int id : nodes)
    if (!is_internal(id)) out.push_back(id);
  return out;
}

const std::vector<int>& ProperSubTree::children_of(int id) const {
  const Symbol& input = chosen.at(id);
  for (const auto& group : tree->node(id).inputs)
    if (group.input == input) return group.children;
  throw SemanticError("sub-tree: node has no children under its committed input");
}

std::optional<std::string> check_proper(const ProperSubTree& sub, const Spec& spec) {
  const ExplorationTree& tree = *sub.tree;
  const PTA& pta = tree.pta;
  if (sub.nodes.empty() || sub.nodes.front() != 0)
    return "sub-tree must be rooted at the exploration-tree root";
  if (tree.node(0).label != pta.init) return "root is not labelled by the initial location";

  for (int id : sub.nodes) {
    const TreeNode& n = tree.node(id);
    if (spec.is_avoid(n.label)) return "node " + std::to_string(id) + " carries an avoid label";
    if (spec.is_target(n.label)) {
      if (sub.is_internal(id))
        return "target-labelled node " + std::to_string(id) + " has a successor";
      continue;
    }
    if (!sub.is_internal(id))
      return "non-target leaf " + std::to_string(id) + " (label '" + n.label + "')";
    const Symbol& input = sub.chosen.at(id);
    // All transitions of the committed input must be represented by children.
    std::vector<int> expected = post(pta, n.label, input);
    const std::vector<int>* children = nullptr;
    for (const auto& group : n.inputs)
      if (group.input == input) children = &group.children;
    if (!children || children->size() != expected.size())
      return "node " + std::to_string(id) + ": committed input '" + input +
             "' does not cover all its transitions";
    for (std::size_t i = 0; i < expected.size(); ++i) {
      int child = (*children)[i];
      if (tree.node(child).incoming != expected[i])
        return "node " + std::to_string(id) + ": child order diverges from the transition relation";
      if (!sub.contains(child))
        return "node " + std::to_string(id) + ": missing child under committed input";
    }
    // No children under any other input.
    for (int child : sub.nodes) {
      if (tree.node(child).parent != id) continue;
      const Transition& t = pta.transitions[tree.node(child).incoming];
      if (t.input != input)
        return "node " + std::to_string(id) + ": child under non-committed input '" + t.input + "'";
    }
  }
  // Connectivity: every non-root node's parent is included.
  for (int id : sub.nodes) {
    if (id == 0) continue;
    if (!sub.contains(tree.node(id).parent))
      return "node " + std::to_string(id) + " is disconnected from the root";
  }
  return std::nullopt;
}

namespace {

void build_solution(const ExplorationTree& tree, int node_id, std::uint64_t residue,
                    ProperSubTree& out) {
  const TreeNode& n = tree.node(node_id);
  out.nodes.push_back(node_id);
  if (n.inputs.empty()) {
    if (residue != 0) throw std::out_of_range("solution index out of range");
    return;
  }
  // Select the input group: each contributes the product of its children's
  // counts.
  for (const auto& group : n.inputs) {
    if (residue >= group.count) {
      residue -= group.count;
      continue;
    }
    out.chosen[node_id] = group.input;
    // Distribute the residue across the children, first child most
    // significant.
    std::vector<std::uint64_t> suffix(group.children.size() + 1, 1);
    for (std::size_t i = group.children.size(); i-- > 0;)
      suffix[i] = suffix[i + 1] * tree.node(group.children[i]).ps;
    for (std::size_t i = 0; i < group.children.size(); ++i) {
      std::uint64_t digit = residue / suffix[i + 1];
      residue %= suffix[i + 1];
      build_solution(tree, group.children[i], digit, out);
    }
    return;
  }
  throw std::out_of_range("solution index out of range");
}

}  // namespace

ProperSubTree get_solution_tree(const ExplorationTree& tree, std::uint64_t index) {
  if (tree.nodes.empty()) throw std::out_of_range("empty exploration tree");
  if (index < 1 || index > tree.node(0).ps)
    throw std::out_of_range("solution index out of range");
  ProperSubTree sub;
  sub.tree = &tree;
  build_solution(tree, 0, index - 1, sub);
  return sub;
}

}  // namespace pta
