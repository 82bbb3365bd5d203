#include "pta/synthesis.hpp"

#include <algorithm>
#include <exception>
#include <limits>
#include <sstream>

namespace pta {
namespace {

constexpr std::uint64_t kSaturated = std::numeric_limits<std::uint64_t>::max();

std::uint64_t sat_mul(std::uint64_t a, std::uint64_t b) {
  if (a == 0 || b == 0) return 0;
  if (a > kSaturated / b) return kSaturated;
  return a * b;
}

std::uint64_t sat_add(std::uint64_t a, std::uint64_t b) {
  return (a > kSaturated - b) ? kSaturated : a + b;
}

// The DFS keeps one constraint row per already-fired guard atom on the
// current path. Variable indexing convention shared by all systems built
// here: parameters first (g@p, integer), then one delay per path position
// (d@i, continuous).
class ForwardDfs {
public:
  ForwardDfs(const PTA& pta, const Spec& spec, const SynthesisConfig& cfg, LpContext& lp,
             int threads, ForwardResult& result)
      : pta_(pta), spec_(spec), cfg_(cfg), lp_(lp), threads_(threads), result_(result) {}

  void run() {
    ExplorationTree& tree = result_.tree;
    tree.pta = pta_;
    tree.nodes.push_back(TreeNode{0, pta_.init, -1, -1, 0, {}, 0});
    result_.ps = visit(0);
    tree.nodes[0].ps = result_.ps;
  }

private:
  std::uint64_t visit(int node_id) {
    ExplorationTree& tree = result_.tree;
    const LocationId label = tree.nodes[static_cast<std::size_t>(node_id)].label;
    const int depth = tree.nodes[static_cast<std::size_t>(node_id)].depth;

    if (spec_.is_target(label)) return set_ps(node_id, 1);
    if (spec_.is_avoid(label)) return set_ps(node_id, 0);
    if (depth >= cfg_.max_depth) {
      result_.bound_hit = true;
      return set_ps(node_id, 0);
    }

    std::uint64_t ps_node = 0;
    std::vector<TreeNode::InputGroup> groups;
    for (const Symbol& a : enabled_inputs(pta_, label)) {
      std::vector<int> group = post(pta_, label, a);
      std::vector<LinConstraint> ext_rows = extension_rows(group[0]);
      if (cfg_.prune && !extension_feasible(ext_rows)) {
        ++result_.prunes;
        continue;
      }

      std::size_t arena_mark = tree.nodes.size();
      std::uint64_t product = 1;
      std::vector<int> children;
      for (int t : group) {
        int child_id = static_cast<int>(tree.nodes.size());
        tree.nodes.push_back(
            TreeNode{child_id, pta_.transitions[t].target, node_id, t, depth + 1, {}, 0});
        children.push_back(child_id);

        path_.push_back(t);
        std::size_t row_mark = rows_.size();
        rows_.insert(rows_.end(), ext_rows.begin(), ext_rows.end());
        std::uint64_t child_ps = visit(child_id);
        rows_.resize(row_mark);
        path_.pop_back();

        product = sat_mul(product, child_ps);
      }
      if (product == 0) {
        tree.nodes.resize(arena_mark);  // drop every sub-tree of this input
      } else {
        groups.push_back({a, std::move(children), product});
        ps_node = sat_add(ps_node, product);
      }
    }
    tree.nodes[static_cast<std::size_t>(node_id)].inputs = std::move(groups);
    return set_ps(node_id, ps_node);
  }

  std::uint64_t set_ps(int node_id, std::uint64_t ps) {
    result_.tree.nodes[static_cast<std::size_t>(node_id)].ps = ps;
    return ps;
  }

  // Rows contributed by firing `transition` as the next step of the current
  // path. Identical for every transition of the (location, input) group
  // because the group guard is shared.
  std::vector<LinConstraint> extension_rows(int transition) {
    const Transition& t = pta_.transitions[transition];
    const int i = static_cast<int>(path_.size()) + 1;  // 1-based position
    const int nparams = static_cast<int>(pta_.parameters.size());
    std::vector<LinConstraint> rows;
    for (const auto& atom : t.guard.atoms) {
      int k = 0;
      if (atom.clock != kGlobalClock) {
        for (int m = i - 1; m >= 1; --m) {
          if (pta_.transitions[path_[static_cast<std::size_t>(m - 1)]].resets_clock(atom.clock)) {
            k = m;
            break;
          }
        }
      }
      LinConstraint c;
      for (int j = k; j <= i - 1; ++j) c.terms.push_back({nparams + j, 1});
      for (const auto& [param, coef] : atom.bound.terms)
        c.terms.push_back({param_index(param), Rat(-coef)});
      c.rel = atom.rel;
      c.rhs = Rat(atom.bound.constant);
      c.provenance = t.id + ": " + atom.to_string();
      rows.push_back(std::move(c));
    }
    return rows;
  }

  bool extension_feasible(const std::vector<LinConstraint>& ext_rows) {
    ++result_.path_checks;
    const int nparams = static_cast<int>(pta_.parameters.size());
    const int ndelays = static_cast<int>(path_.size()) + 1;
    FeasibilitySystem sys;
    for (const auto& p : pta_.parameters) sys.add_integer("g@" + p.name, p.lo, p.hi);
    for (int j = 0; j < ndelays; ++j) sys.add_continuous("d@" + std::to_string(j));
    for (const auto& row : rows_) sys.add(row);
    for (const auto& row : ext_rows) sys.add(row);
    LinConstraint dl;
    for (int j = 0; j < ndelays; ++j) dl.terms.push_back({nparams + j, 1});
    dl.rel = Rel::Le;
    dl.rhs = Rat(spec_.deadline);
    dl.provenance = "deadline";
    sys.add(std::move(dl));
    return feasible(sys, lp_, threads_).has_value();
  }

  int param_index(const std::string& name) const {
    for (std::size_t i = 0; i < pta_.parameters.size(); ++i)
      if (pta_.parameters[i].name == name) return static_cast<int>(i);
    throw SemanticError("parameter '" + name + "': not declared");
  }

  const PTA& pta_;
  const Spec& spec_;
  const SynthesisConfig& cfg_;
  LpContext& lp_;
  int threads_;
  ForwardResult& result_;
  std::vector<int> path_;
  std::vector<LinConstraint> rows_;
};

}  // namespace

ForwardResult forward_analysis(const PTA& pta, const Spec& spec, const SynthesisConfig& cfg,
                               LpContext& ctx, int threads) {
  if (cfg.max_depth < 1) throw SemanticError("max_depth must be >= 1");
  ForwardResult result;
  ForwardDfs dfs(pta, spec, cfg, ctx, threads, result);
  dfs.run();
  return result;
}

const Strategy::Entry* Strategy::find(const std::vector<TransitionId>& path) const {
  for (const auto& e : entries)
    if (e.path == path) return &e;
  return nullptr;
}

bool Strategy::is_leaf_path(const std::vector<TransitionId>& path) const {
  for (const auto& l : leaves)
    if (l.path == path) return true;
  return false;
}

Strategy extract_strategy(const ProperSubTree& sub, const Witness& witness) {
  const ExplorationTree& tree = *sub.tree;
  const PTA& pta = tree.pta;
  Strategy strategy;
  for (const auto& p : pta.parameters) {
    auto it = witness.values.find("g@" + p.name);
    if (it == witness.values.end())
      throw SemanticError("witness misses parameter '" + p.name + "'");
    if (denominator(it->second) != 1)
      throw SemanticError("witness value for '" + p.name + "' is not integral");
    strategy.valuation.values[p.name] = static_cast<std::int64_t>(numerator(it->second));
  }
  auto transition_ids = [&](int id) {
    std::vector<TransitionId> out;
    for (int t : tree.path_transitions(id)) out.push_back(pta.transitions[t].id);
    return out;
  };
  for (int id : sub.nodes) {
    std::string name = "n" + std::to_string(id);
    if (sub.is_internal(id)) {
      auto it = witness.values.find("d@" + name);
      if (it == witness.values.end())
        throw SemanticError("witness misses delay variable d@" + name);
      strategy.entries.push_back({name, transition_ids(id), it->second, sub.chosen.at(id)});
    } else {
      strategy.leaves.push_back({name, transition_ids(id)});
    }
  }
  return strategy;
}

const char* outcome_name(Outcome o) {
  switch (o) {
    case Outcome::Solution: return "solution";
    case Outcome::NoSolution: return "no-solution";
    case Outcome::BoundHit: return "bound-hit";
  }
  return "?";
}

namespace {

constexpr std::uint64_t kCandidateChunk = 16;

}  // namespace

SynthesisResult synthesize(const PTA& pta, const Spec& spec, const SynthesisConfig& cfg,
                           LpContext& ctx, int threads) {
  spec.validate(pta);
  PTA norm = normalize_guards(pta).pta;

  SynthesisResult result;
  ForwardResult fr = forward_analysis(norm, spec, cfg, ctx, threads);
  result.ps = fr.ps;
  result.prunes = fr.prunes;
  result.path_checks = fr.path_checks;
  result.bound_hit = fr.bound_hit;

  if (fr.ps == kSaturated) throw std::runtime_error("candidate count overflows 64 bits");

  auto solve_candidate = [&](std::uint64_t index, int inner_threads) -> std::optional<Strategy> {
    ProperSubTree sub = get_solution_tree(fr.tree, index);
    FeasibilitySystem sys = encode_tree(norm, sub, spec);
    std::optional<Witness> w = feasible(sys, ctx, inner_threads);
    if (!w) return std::nullopt;
    return extract_strategy(sub, *w);
  };

  if (threads <= 1 || fr.ps <= 1) {
    for (std::uint64_t i = 1; i <= fr.ps; ++i) {
      std::optional<Strategy> s = solve_candidate(i, threads);
      ++result.candidates_solved;
      if (!s) continue;
      if (!result.strategy) result.strategy = s;
      if (!cfg.enumerate_all) break;
      result.all.push_back(std::move(*s));
    }
  } else {
    std::exception_ptr error;
    std::vector<std::optional<Strategy>> slots(kCandidateChunk);
    bool done = false;
    // Single worker team; the chunk barriers keep "first feasible candidate"
    // well-defined independently of the thread count.
#ifdef _OPENMP
#pragma omp parallel num_threads(threads) default(shared)
#endif
    {
      for (std::uint64_t chunk = 1; chunk <= fr.ps && !done; chunk += kCandidateChunk) {
        std::uint64_t end = std::min(chunk + kCandidateChunk, fr.ps + 1);
#ifdef _OPENMP
#pragma omp for schedule(dynamic)
#endif
        for (long long i = static_cast<long long>(chunk); i < static_cast<long long>(end); ++i) {
          try {
            slots[static_cast<std::size_t>(i - static_cast<long long>(chunk))] =
                solve_candidate(static_cast<std::uint64_t>(i), 1);
          } catch (...) {
#ifdef _OPENMP
#pragma omp critical
#endif
            if (!error) error = std::current_exception();
          }
        }
#ifdef _OPENMP
#pragma omp single
#endif
        {
          result.candidates_solved += end - chunk;
          for (std::size_t k = 0; k < static_cast<std::size_t>(end - chunk); ++k) {
            if (!slots[k]) continue;
            if (!result.strategy) result.strategy = *slots[k];
            if (cfg.enumerate_all) result.all.push_back(std::move(*slots[k]));
          }
          for (auto& slot : slots) slot.reset();
          if (error || (result.strategy && !cfg.enumerate_all)) done = true;
        }
      }
    }
    if (error) std::rethrow_exception(error);
  }

  result.outcome = result.strategy  ? Outcome::Solution
                   : fr.bound_hit   ? Outcome::BoundHit
                                    : Outcome::NoSolution;
  return result;
}

namespace {

std::string render_path(const PTA& pta, const std::vector<TransitionId>& ids) {
  std::string out = pta.init;
  LocationId loc = pta.init;
  for (const auto& id : ids) {
    auto idx = pta.transition_index(id);
    if (!idx) throw SemanticError("transition '" + id + "': unknown transition");
    out += "," + id + "," + pta.transitions[*idx].target;
    loc = pta.transitions[*idx].target;
  }
  return out;
}

}  // namespace

std::string strategy_to_text(const PTA& pta, const Strategy& strategy) {
  std::ostringstream out;
  out << "gamma";
  for (const auto& p : pta.parameters) out << " " << p.name << "=" << strategy.valuation.at(p.name);
  out << "\n";
  for (const auto& e : strategy.entries)
    out << "node " << e.node << " path=" << render_path(pta, e.path)
        << " delay=" << rat_to_string(e.delay) << " input=" << e.input << "\n";
  for (const auto& l : strategy.leaves)
    out << "leaf " << l.node << " path=" << render_path(pta, l.path) << "\n";
  return out.str();
}

namespace {

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : s) {
    if (c == sep) {
      out.push_back(cur);
      cur.clear();
    } else {
      cur += c;
    }
  }
  out.push_back(cur);
  return out;
}

// path=<l0,e..,l..> checked against the transition relation.
std::vector<TransitionId> parse_strategy_path(const PTA& pta, const std::string& text) {
  std::vector<std::string> parts = split(text, ',');
  if (parts.empty() || parts.size() % 2 == 0)
    throw FormatError("path '" + text + "': must alternate locations and transitions");
  if (parts[0] != pta.init)
    throw FormatError("path '" + text + "': must start at '" + pta.init + "'");
  std::vector<TransitionId> ids;
  LocationId loc = pta.init;
  for (std::size_t i = 1; i < parts.size(); i += 2) {
    auto idx = pta.transition_index(parts[i]);
    if (!idx) throw FormatError("path '" + text + "': unknown transition '" + parts[i] + "'");
    const Transition& t = pta.transitions[*idx];
    if (t.source != loc || t.target != parts[i + 1])
      throw FormatError("path '" + text + "': transition '" + parts[i] +
                        "' does not connect the listed locations");
    loc = t.target;
    ids.push_back(parts[i]);
  }
  return ids;
}

std::map<std::string, std::string> parse_kv(const std::vector<std::string>& fields,
                                            std::size_t from) {
  std::map<std::string, std::string> kv;
  for (std::size_t i = from; i < fields.size(); ++i) {
    auto eq = fields[i].find('=');
    if (eq == std::string::npos) throw FormatError("expected key=value, got '" + fields[i] + "'");
    kv[fields[i].substr(0, eq)] = fields[i].substr(eq + 1);
  }
  return kv;
}

std::vector<std::string> fields_of(const std::string& line) {
  std::vector<std::string> out;
  std::istringstream in(line);
  std::string f;
  while (in >> f) out.push_back(f);
  return out;
}

}  // namespace

Strategy strategy_from_text(const PTA& pta, const std::string& text) {
  Strategy strategy;
  std::istringstream in(text);
  std::string line;
  bool saw_gamma = false;
  std::vector<std::vector<TransitionId>> seen_paths;
  while (std::getline(in, line)) {
    std::vector<std::string> fields = fields_of(line);
    if (fields.empty()) continue;
    if (fields[0] == "gamma") {
      if (saw_gamma) throw FormatError("second gamma line");
      saw_gamma = true;
      auto kv = parse_kv(fields, 1);
      for (const auto& [name, value] : kv) {
        if (!pta.find_parameter(name)) throw FormatError("unknown parameter '" + name + "'");
        try {
          strategy.valuation.values[name] = std::stoll(value);
        } catch (const std::exception&) {
          throw FormatError("bad parameter value '" + value + "'");
        }
      }
      for (const auto& p : pta.parameters)
        if (!strategy.valuation.values.count(p.name))
          throw FormatError("gamma line misses parameter '" + p.name + "'");
    } else if (fields[0] == "node" || fields[0] == "leaf") {
      if (!saw_gamma) throw FormatError("strategy must start with a gamma line");
      if (fields.size() < 2) throw FormatError("missing node id");
      auto kv = parse_kv(fields, 2);
      if (!kv.count("path")) throw FormatError("missing path field");
      std::vector<TransitionId> path = parse_strategy_path(pta, kv["path"]);
      if (std::find(seen_paths.begin(), seen_paths.end(), path) != seen_paths.end())
        throw FormatError("duplicate path '" + kv["path"] + "'");
      seen_paths.push_back(path);
      if (fields[0] == "node") {
        if (!kv.count("delay") || !kv.count("input"))
          throw FormatError("node line needs delay= and input=");
        Rat delay = rat_from_string(kv["delay"]);
        if (delay < 0) throw FormatError("negative delay '" + kv["delay"] + "'");
        if (pta.alphabet_index(kv["input"]) < 0)
          throw FormatError("unknown input '" + kv["input"] + "'");
        strategy.entries.push_back({fields[1], std::move(path), delay, kv["input"]});
      } else {
        strategy.leaves.push_back({fields[1], std::move(path)});
      }
    } else {
      throw FormatError("unknown strategy line '" + fields[0] + "'");
    }
  }
  if (!saw_gamma) throw FormatError("empty strategy file");
  return strategy;
}

}  // namespace pta
