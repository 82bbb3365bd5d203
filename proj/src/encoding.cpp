#include "pta/encoding.hpp"

#include <string>

namespace pta {
namespace {

// One constraint per guard atom: the clock's value on the firing transition
// is the sum of the delay variables since its last reset, compared against
// the (parametric) bound moved to the right-hand side.
LinConstraint atom_constraint(const FeasibilitySystem& sys, const GuardAtom& atom,
                              const std::vector<int>& delay_vars, int from, int to,
                              const std::string& provenance) {
  LinConstraint c;
  for (int j = from; j <= to; ++j) c.terms.push_back({delay_vars[static_cast<std::size_t>(j)], 1});
  for (const auto& [param, coef] : atom.bound.terms) {
    int v = sys.var_index("g@" + param);
    if (v < 0) throw SemanticError("parameter '" + param + "': not declared in the system");
    c.terms.push_back({v, Rat(-coef)});
  }
  c.rel = atom.rel;
  c.rhs = Rat(atom.bound.constant);
  c.provenance = provenance;
  return c;
}

void add_parameter_vars(FeasibilitySystem& sys, const PTA& pta) {
  for (const auto& p : pta.parameters) sys.add_integer("g@" + p.name, p.lo, p.hi);
}

}  // namespace

int last_reset_index(const PTA& pta, const Path& path, int i, const ClockId& x) {
  if (i < 1 || i > path.length())
    throw SemanticError("position " + std::to_string(i) + " outside path of length " +
                        std::to_string(path.length()));
  if (x == kGlobalClock) return 0;
  for (int m = i - 1; m >= 1; --m)
    if (pta.transitions[path.transitions[static_cast<std::size_t>(m - 1)]].resets_clock(x))
      return m;
  return 0;
}

FeasibilitySystem encode_path(const PTA& pta, const Path& path, const Spec& spec) {
  FeasibilitySystem sys;
  add_parameter_vars(sys, pta);
  int n = path.length();
  std::vector<int> delay_vars;
  for (int i = 0; i < n; ++i) delay_vars.push_back(sys.add_continuous("d@" + std::to_string(i)));

  for (int i = 1; i <= n; ++i) {
    const Transition& t = pta.transitions[path.transitions[static_cast<std::size_t>(i - 1)]];
    for (const auto& atom : t.guard.atoms) {
      int k = last_reset_index(pta, path, i, atom.clock);
      sys.add(atom_constraint(sys, atom, delay_vars, k, i - 1, t.id + ": " + atom.to_string()));
    }
  }
  if (n > 0) {
    LinConstraint dl;
    for (int v : delay_vars) dl.terms.push_back({v, 1});
    dl.rel = Rel::Le;
    dl.rhs = Rat(spec.deadline);
    dl.provenance = "deadline";
    sys.add(std::move(dl));
  }
  return sys;
}

FeasibilitySystem encode_tree(const PTA& pta, const ProperSubTree& sub, const Spec& spec) {
  if (auto violation = check_proper(sub, spec))
    throw SemanticError("not a proper sub-tree: " + *violation);
  const ExplorationTree& tree = *sub.tree;

  FeasibilitySystem sys;
  add_parameter_vars(sys, pta);
  std::map<int, int> delay_var;  // internal node id -> system variable
  for (int id : sub.internal_nodes())
    delay_var[id] = sys.add_continuous("d@n" + std::to_string(id));

  for (int id : sub.internal_nodes()) {
    const TreeNode& node = tree.node(id);
    const Guard& guard = group_guard(pta, node.label, sub.chosen.at(id));
    if (guard.atoms.empty()) continue;

    // Internal nodes on the root path carry the delay variables; the
    // committed transition sits one step past `node`, so its atoms range
    // over the delays since each clock's last reset up to and including
    // this node's delay.
    std::vector<int> chain;  // node ids root..id
    for (int cur = id; cur != -1; cur = tree.node(cur).parent) chain.push_back(cur);
    std::reverse(chain.begin(), chain.end());
    std::vector<int> chain_vars;
    for (int nid : chain) chain_vars.push_back(delay_var.at(nid));

    int depth = static_cast<int>(chain.size()) - 1;  // transitions on the root path
    for (const auto& atom : guard.atoms) {
      int k = 0;
      if (atom.clock != kGlobalClock) {
        for (int m = depth; m >= 1; --m) {
          if (pta.transitions[tree.node(chain[static_cast<std::size_t>(m)]).incoming].resets_clock(
                  atom.clock)) {
            k = m;
            break;
          }
        }
      }
      sys.add(atom_constraint(sys, atom, chain_vars, k, depth,
                              "n" + std::to_string(id) + ": " + atom.to_string()));
    }
  }

  for (int leaf : sub.leaves()) {
    std::vector<int> internal_on_path;
    for (int cur = tree.node(leaf).parent; cur != -1; cur = tree.node(cur).parent)
      internal_on_path.push_back(cur);
    if (internal_on_path.empty()) continue;  // root-only tree
    LinConstraint dl;
    for (int nid : internal_on_path) dl.terms.push_back({delay_var.at(nid), 1});
    dl.rel = Rel::Le;
    dl.rhs = Rat(spec.deadline);
    dl.provenance = "deadline leaf n" + std::to_string(leaf);
    sys.add(std::move(dl));
  }
  return sys;
}

}  // namespace pta
