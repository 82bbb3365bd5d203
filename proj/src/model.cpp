#include "pta/model.hpp"

#include <algorithm>
#include <set>
#include <sstream>

namespace pta {

std::int64_t ParamValuation::at(const std::string& param) const {
  auto it = values.find(param);
  if (it == values.end()) throw SemanticError("parameter '" + param + "': no value assigned");
  return it->second;
}

AffineParamExpr AffineParamExpr::of_constant(std::int64_t c) {
  AffineParamExpr e;
  e.constant = c;
  return e;
}

void AffineParamExpr::add_term(const std::string& param, std::int64_t coef) {
  if (coef <= 0) throw SemanticError("expression term for '" + param + "': coefficient must be >= 1");
  auto it = std::lower_bound(terms.begin(), terms.end(), param,
                             [](const auto& t, const std::string& p) { return t.first < p; });
  if (it != terms.end() && it->first == param)
    it->second += coef;
  else
    terms.insert(it, {param, coef});
}

Rat AffineParamExpr::eval(const ParamValuation& gamma) const {
  Rat acc = constant;
  for (const auto& [param, coef] : terms) acc += Rat(coef) * Rat(gamma.at(param));
  return acc;
}

std::string AffineParamExpr::to_string() const {
  std::ostringstream out;
  bool first = true;
  for (const auto& [param, coef] : terms) {
    if (!first) out << " + ";
    if (coef != 1) out << coef << "*";
    out << param;
    first = false;
  }
  if (first) {
    out << constant;
  } else if (constant != 0) {
    out << " + " << constant;
  }
  return out.str();
}

std::string GuardAtom::to_string() const {
  return clock + " " + rel_symbol(rel) + " " + bound.to_string();
}

std::string Guard::to_string() const {
  if (atoms.empty()) return "true";
  std::string out;
  for (std::size_t i = 0; i < atoms.size(); ++i) {
    if (i) out += " & ";
    out += atoms[i].to_string();
  }
  return out;
}

bool Transition::resets_clock(const ClockId& c) const {
  return std::binary_search(resets.begin(), resets.end(), c);
}

bool PTA::has_location(const LocationId& l) const {
  return std::find(locations.begin(), locations.end(), l) != locations.end();
}

bool PTA::has_clock(const ClockId& c) const {
  return std::find(clocks.begin(), clocks.end(), c) != clocks.end();
}

const Parameter* PTA::find_parameter(const std::string& name) const {
  for (const auto& p : parameters)
    if (p.name == name) return &p;
  return nullptr;
}

std::optional<int> PTA::transition_index(const TransitionId& id) const {
  for (std::size_t i = 0; i < transitions.size(); ++i)
    if (transitions[i].id == id) return static_cast<int>(i);
  return std::nullopt;
}

int PTA::alphabet_index(const Symbol& a) const {
  for (std::size_t i = 0; i < alphabet.size(); ++i)
    if (alphabet[i] == a) return static_cast<int>(i);
  return -1;
}

void PTA::finalize() {
  // x0 always exists and comes first.
  auto it = std::find(clocks.begin(), clocks.end(), kGlobalClock);
  if (it != clocks.end()) clocks.erase(it);
  clocks.insert(clocks.begin(), kGlobalClock);

  std::set<std::string> names;
  for (const auto& l : locations)
    if (!names.insert(l).second) throw SemanticError("location '" + l + "': duplicate name");
  for (const auto& c : clocks)
    if (!names.insert(c).second) throw SemanticError("clock '" + c + "': duplicate name");
  for (const auto& p : parameters) {
    if (!names.insert(p.name).second)
      throw SemanticError("parameter '" + p.name + "': duplicate name");
    if (p.lo < 0) throw SemanticError("parameter '" + p.name + "': domain must be nonnegative");
    if (p.lo > p.hi) throw SemanticError("parameter '" + p.name + "': empty domain");
  }

  if (locations.empty()) throw SemanticError("model declares no locations");
  if (init.empty()) throw SemanticError("no initial location declared");
  if (!has_location(init)) throw SemanticError("initial location '" + init + "' not declared");

  // Auto ids in file order, explicit ids checked for uniqueness.
  std::set<TransitionId> ids;
  for (std::size_t i = 0; i < transitions.size(); ++i) {
    Transition& t = transitions[i];
    if (t.id.empty()) t.id = "e" + std::to_string(i + 1);
    if (!ids.insert(t.id).second)
      throw SemanticError("transition '" + t.id + "': duplicate id");

    if (!has_location(t.source))
      throw SemanticError("transition '" + t.id + "': undeclared source '" + t.source + "'");
    if (!has_location(t.target))
      throw SemanticError("transition '" + t.id + "': undeclared target '" + t.target + "'");

    std::sort(t.resets.begin(), t.resets.end());
    t.resets.erase(std::unique(t.resets.begin(), t.resets.end()), t.resets.end());
    for (const auto& c : t.resets) {
      if (c == kGlobalClock)
        throw SemanticError("transition '" + t.id + "': x0 reset forbidden");
      if (!has_clock(c))
        throw SemanticError("transition '" + t.id + "': undeclared clock '" + c + "'");
    }
    for (const auto& atom : t.guard.atoms) {
      if (!has_clock(atom.clock))
        throw SemanticError("transition '" + t.id + "': undeclared clock '" + atom.clock + "'");
      if (atom.bound.constant < 0)
        throw SemanticError("transition '" + t.id + "': negative guard constant");
      for (const auto& [param, coef] : atom.bound.terms) {
        if (!find_parameter(param))
          throw SemanticError("transition '" + t.id + "': undeclared parameter '" + param + "'");
        if (coef < 1)
          throw SemanticError("transition '" + t.id + "': coefficient for '" + param +
                              "' must be >= 1");
      }
    }
  }

  alphabet.clear();
  for (const auto& t : transitions)
    if (alphabet_index(t.input) < 0) alphabet.push_back(t.input);
}

bool Spec::is_target(const LocationId& l) const {
  return std::find(targets.begin(), targets.end(), l) != targets.end();
}

bool Spec::is_avoid(const LocationId& l) const {
  return std::find(avoids.begin(), avoids.end(), l) != avoids.end();
}

void Spec::validate(const PTA& pta) const {
  if (deadline < 0) throw SemanticError("deadline must be nonnegative");
  for (const auto& l : targets)
    if (!pta.has_location(l)) throw SemanticError("target '" + l + "': undeclared location");
  for (const auto& l : avoids) {
    if (!pta.has_location(l)) throw SemanticError("avoid '" + l + "': undeclared location");
    if (is_target(l))
      throw SemanticError("location '" + l + "': marked both target and avoid");
  }
}

PTA instantiate(const PTA& pta, const ParamValuation& gamma) {
  for (const auto& p : pta.parameters) {
    std::int64_t v = gamma.at(p.name);  // throws when missing
    if (v < p.lo || v > p.hi)
      throw SemanticError("parameter '" + p.name + "': value " + std::to_string(v) +
                          " outside domain [" + std::to_string(p.lo) + ", " +
                          std::to_string(p.hi) + "]");
  }
  PTA out = pta;
  out.parameters.clear();
  for (auto& t : out.transitions) {
    for (auto& atom : t.guard.atoms) {
      Rat v = atom.bound.eval(gamma);
      // Natural coefficients and values keep the bound integral.
      atom.bound = AffineParamExpr::of_constant(static_cast<std::int64_t>(numerator(v)));
    }
  }
  return out;
}

std::vector<Symbol> enabled_inputs(const PTA& pta, const LocationId& l) {
  if (!pta.has_location(l)) throw SemanticError("location '" + l + "': unknown location");
  std::vector<Symbol> out;
  for (const auto& a : pta.alphabet) {
    for (const auto& t : pta.transitions) {
      if (t.source == l && t.input == a) {
        out.push_back(a);
        break;
      }
    }
  }
  return out;
}

std::vector<int> post(const PTA& pta, const LocationId& l, const Symbol& a) {
  if (!pta.has_location(l)) throw SemanticError("location '" + l + "': unknown location");
  std::vector<int> out;
  for (std::size_t i = 0; i < pta.transitions.size(); ++i)
    if (pta.transitions[i].source == l && pta.transitions[i].input == a)
      out.push_back(static_cast<int>(i));
  return out;
}

NormalizeResult normalize_guards(const PTA& pta) {
  NormalizeResult result{pta, {}};
  // Group transitions by (source, input) in first-occurrence order.
  std::vector<std::pair<LocationId, Symbol>> groups;
  for (const auto& t : pta.transitions) {
    std::pair<LocationId, Symbol> key{t.source, t.input};
    if (std::find(groups.begin(), groups.end(), key) == groups.end()) groups.push_back(key);
  }
  for (const auto& [source, input] : groups) {
    std::vector<int> members = post(pta, source, input);
    bool uniform = true;
    for (std::size_t i = 1; i < members.size(); ++i)
      if (!(pta.transitions[members[i]].guard == pta.transitions[members[0]].guard)) {
        uniform = false;
        break;
      }
    if (uniform) continue;

    // Conjunction of all atoms seen in the group, duplicates removed,
    // first-occurrence order.
    Guard merged;
    for (int idx : members)
      for (const auto& atom : pta.transitions[idx].guard.atoms)
        if (std::find(merged.atoms.begin(), merged.atoms.end(), atom) == merged.atoms.end())
          merged.atoms.push_back(atom);
    for (int idx : members) result.pta.transitions[idx].guard = merged;
    result.report.rewritten.push_back({source, input, merged});
  }
  return result;
}

const Guard& group_guard(const PTA& pta, const LocationId& l, const Symbol& a) {
  std::vector<int> members = post(pta, l, a);
  if (members.empty())
    throw SemanticError("no transition from '" + l + "' under input '" + a + "'");
  for (std::size_t i = 1; i < members.size(); ++i)
    if (!(pta.transitions[members[i]].guard == pta.transitions[members[0]].guard))
      throw SemanticError("transitions from '" + l + "' under '" + a +
                          "' carry different guards; normalize the model first");
  return pta.transitions[members[0]].guard;
}

}  // namespace pta
