#include "pta/lp.hpp"

#include <algorithm>
#include <exception>
#include <sstream>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace pta {

int FeasibilitySystem::add_continuous(const std::string& name) {
  if (index_.count(name)) throw SemanticError("variable '" + name + "': duplicate name");
  int idx = static_cast<int>(vars_.size());
  vars_.push_back({name, VarKind::Continuous, 0, 0});
  index_[name] = idx;
  return idx;
}

int FeasibilitySystem::add_integer(const std::string& name, std::int64_t lo, std::int64_t hi) {
  if (index_.count(name)) throw SemanticError("variable '" + name + "': duplicate name");
  if (lo > hi) throw SemanticError("variable '" + name + "': empty domain");
  int idx = static_cast<int>(vars_.size());
  vars_.push_back({name, VarKind::Integer, lo, hi});
  index_[name] = idx;
  return idx;
}

void FeasibilitySystem::add(LinConstraint c) {
  std::sort(c.terms.begin(), c.terms.end(),
            [](const LinTerm& a, const LinTerm& b) { return a.var < b.var; });
  std::vector<LinTerm> merged;
  for (const auto& t : c.terms) {
    if (t.var < 0 || t.var >= static_cast<int>(vars_.size()))
      throw SemanticError("constraint references undeclared variable");
    if (!merged.empty() && merged.back().var == t.var)
      merged.back().coef += t.coef;
    else
      merged.push_back(t);
  }
  merged.erase(std::remove_if(merged.begin(), merged.end(),
                              [](const LinTerm& t) { return t.coef == 0; }),
               merged.end());
  if (merged.empty()) throw SemanticError("constraint with no nonzero coefficient");
  c.terms = std::move(merged);
  cons_.push_back(std::move(c));
}

int FeasibilitySystem::var_index(const std::string& name) const {
  auto it = index_.find(name);
  return it == index_.end() ? -1 : it->second;
}

bool FeasibilitySystem::has_integer_vars() const {
  return std::any_of(vars_.begin(), vars_.end(),
                     [](const LinVar& v) { return v.kind == VarKind::Integer; });
}

std::size_t FeasibilitySystem::integer_grid_size() const {
  std::size_t n = 1;
  for (const auto& v : vars_) {
    if (v.kind != VarKind::Integer) continue;
    std::size_t width = static_cast<std::size_t>(v.hi - v.lo + 1);
    if (n > (std::size_t{1} << 40) / width)
      throw SemanticError("integer grid too large to enumerate");
    n *= width;
  }
  return n;
}

std::string FeasibilitySystem::dump() const {
  std::ostringstream out;
  for (const auto& c : cons_) {
    for (std::size_t i = 0; i < c.terms.size(); ++i) {
      if (i) out << " + ";
      out << rat_to_string(c.terms[i].coef) << "*" << vars_[c.terms[i].var].name;
    }
    out << " " << rel_symbol(c.rel) << " " << rat_to_string(c.rhs);
    if (!c.provenance.empty()) out << "   # " << c.provenance;
    out << "\n";
  }
  return out.str();
}

std::string FeasibilitySystem::cache_key() const {
  std::ostringstream out;
  for (const auto& v : vars_) {
    out << v.name << "|" << (v.kind == VarKind::Integer ? "i" : "c");
    if (v.kind == VarKind::Integer) out << "|" << v.lo << "|" << v.hi;
    out << ";";
  }
  out << "#";
  for (const auto& c : cons_) {
    for (const auto& t : c.terms) out << t.var << ":" << rat_to_string(t.coef) << ",";
    out << rel_symbol(c.rel) << rat_to_string(c.rhs) << ";";
  }
  return out.str();
}

bool FeasibilitySystem::satisfied_by(const std::map<std::string, Rat>& assignment) const {
  for (const auto& v : vars_)
    if (!assignment.count(v.name))
      throw SemanticError("assignment misses variable '" + v.name + "'");
  for (const auto& c : cons_) {
    Rat lhs = 0;
    for (const auto& t : c.terms) lhs += t.coef * assignment.at(vars_[t.var].name);
    if (!rel_holds(lhs, c.rel, c.rhs)) return false;
  }
  return true;
}

std::optional<std::optional<Witness>> LpContext::cache_lookup(const std::string& key) {
  std::lock_guard lock(mutex_);
  auto it = cache_.find(key);
  if (it == cache_.end()) {
    stats.cache_misses.fetch_add(1, std::memory_order_relaxed);
    return std::nullopt;
  }
  stats.cache_hits.fetch_add(1, std::memory_order_relaxed);
  return it->second;
}

void LpContext::cache_store(const std::string& key, const std::optional<Witness>& result) {
  std::lock_guard lock(mutex_);
  cache_.emplace(key, result);
}

void LpContext::clear_cache() {
  std::lock_guard lock(mutex_);
  cache_.clear();
}

namespace {

// Dense exact-rational simplex tableau, Bland's rule in both phases.
// Variables are indexed 0..n-1 and implicitly nonnegative; rows are
// equalities after slack/surplus introduction.
class Tableau {
public:
  // rows: (coefficients over structural vars, relation in {Le, Ge}, rhs)
  struct Row {
    std::vector<Rat> a;
    Rel rel;
    Rat b;
  };

  Tableau(int n_structural, std::vector<Row> rows) : n_struct_(n_structural) {
    // Make every rhs nonnegative first.
    for (auto& r : rows) {
      if (r.b < 0) {
        for (auto& x : r.a) x = -x;
        r.b = -r.b;
        r.rel = rel_flip(r.rel);
      }
    }
    int m = static_cast<int>(rows.size());
    n_slack_ = m;
    first_art_ = n_struct_ + n_slack_;
    int n_art = 0;
    for (const auto& r : rows)
      if (r.rel == Rel::Ge) ++n_art;
    int total = first_art_ + n_art;

    a_.assign(m, std::vector<Rat>(total, Rat(0)));
    b_.resize(m);
    basis_.resize(m);
    int art = first_art_;
    for (int i = 0; i < m; ++i) {
      for (int j = 0; j < n_struct_; ++j) a_[i][j] = rows[i].a[j];
      b_[i] = rows[i].b;
      if (rows[i].rel == Rel::Le) {
        a_[i][n_struct_ + i] = 1;
        basis_[i] = n_struct_ + i;
      } else {
        a_[i][n_struct_ + i] = -1;  // surplus
        a_[i][art] = 1;
        basis_[i] = art;
        ++art;
      }
    }
    n_total_ = total;
  }

  bool has_artificials() const { return n_total_ > first_art_; }

  // Minimize the artificial sum; true iff it reaches zero.
  bool phase1() {
    price_.assign(n_total_, Rat(0));
    objval_ = 0;
    // Reduced costs for maximizing -sum(artificials) with the artificials
    // basic: price out their rows.
    for (std::size_t i = 0; i < basis_.size(); ++i) {
      if (basis_[i] < first_art_) continue;
      for (int j = 0; j < n_total_; ++j) price_[j] += a_[i][j];
      objval_ -= b_[i];
    }
    for (int j = first_art_; j < n_total_; ++j) price_[j] -= 1;
    run(first_art_);
    if (objval_ != 0) return false;
    drive_out_artificials();
    return true;
  }

  // Maximize structural variable `obj_var` from the current feasible basis.
  void phase2(int obj_var) {
    price_.assign(n_total_, Rat(0));
    price_[obj_var] = 1;
    objval_ = 0;
    for (std::size_t i = 0; i < basis_.size(); ++i) {
      if (basis_[i] != obj_var) continue;
      for (int j = 0; j < n_total_; ++j) price_[j] -= a_[i][j];
      objval_ += b_[i];
    }
    run(first_art_);
  }

  const Rat& objective() const { return objval_; }

  Rat value_of(int var) const {
    for (std::size_t i = 0; i < basis_.size(); ++i)
      if (basis_[i] == var) return b_[i];
    return Rat(0);
  }

private:
  // Bland's rule loop; columns >= col_limit never enter.
  void run(int col_limit) {
    while (true) {
      int enter = -1;
      for (int j = 0; j < col_limit; ++j)
        if (price_[j] > 0) {
          enter = j;
          break;
        }
      if (enter < 0) return;
      int leave = -1;
      Rat best;
      for (std::size_t i = 0; i < basis_.size(); ++i) {
        if (a_[i][enter] <= 0) continue;
        Rat ratio = b_[i] / a_[i][enter];
        if (leave < 0 || ratio < best || (ratio == best && basis_[i] < basis_[leave]))
          best = ratio, leave = static_cast<int>(i);
      }
      if (leave < 0)
        throw std::logic_error("simplex: unbounded objective");
      pivot(leave, enter);
    }
  }

  void pivot(int r, int c) {
    Rat piv = a_[r][c];
    for (auto& x : a_[r]) x /= piv;
    b_[r] /= piv;
    for (std::size_t i = 0; i < basis_.size(); ++i) {
      if (static_cast<int>(i) == r || a_[i][c] == 0) continue;
      Rat f = a_[i][c];
      for (int j = 0; j < n_total_; ++j) a_[i][j] -= f * a_[r][j];
      b_[i] -= f * b_[r];
    }
    if (price_[c] != 0) {
      Rat f = price_[c];
      for (int j = 0; j < n_total_; ++j) price_[j] -= f * a_[r][j];
      objval_ += f * b_[r];
    }
    basis_[r] = c;
  }

  void drive_out_artificials() {
    for (std::size_t i = 0; i < basis_.size();) {
      if (basis_[i] < first_art_) {
        ++i;
        continue;
      }
      int col = -1;
      for (int j = 0; j < first_art_; ++j)
        if (a_[i][j] != 0) {
          col = j;
          break;
        }
      if (col >= 0) {
        pivot(static_cast<int>(i), col);
        ++i;
      } else {
        // Redundant row: all real coefficients vanished.
        a_.erase(a_.begin() + static_cast<long>(i));
        b_.erase(b_.begin() + static_cast<long>(i));
        basis_.erase(basis_.begin() + static_cast<long>(i));
      }
    }
  }

  int n_struct_ = 0;
  int n_slack_ = 0;
  int first_art_ = 0;
  int n_total_ = 0;
  std::vector<std::vector<Rat>> a_;
  std::vector<Rat> b_;
  std::vector<int> basis_;
  std::vector<Rat> price_;
  Rat objval_;
};

}  // namespace

std::optional<Witness> lp_feasible(const FeasibilitySystem& system, LpStats* stats) {
  if (system.has_integer_vars())
    throw SemanticError("lp_feasible requires a continuous-only system");
  if (stats) stats->lp_calls.fetch_add(1, std::memory_order_relaxed);

  int n = static_cast<int>(system.vars().size());
  int s_var = n;  // shared slack for strict relations, 0 <= s <= 1

  std::vector<Tableau::Row> rows;
  for (const auto& c : system.constraints()) {
    Tableau::Row row;
    row.a.assign(n + 1, Rat(0));
    for (const auto& t : c.terms) row.a[t.var] = t.coef;
    row.b = c.rhs;
    switch (c.rel) {
      case Rel::Le: row.rel = Rel::Le; break;
      case Rel::Ge: row.rel = Rel::Ge; break;
      case Rel::Lt:
        row.a[s_var] = 1;
        row.rel = Rel::Le;
        break;
      case Rel::Gt:
        row.a[s_var] = -1;
        row.rel = Rel::Ge;
        break;
    }
    rows.push_back(std::move(row));
  }
  {
    Tableau::Row cap;
    cap.a.assign(n + 1, Rat(0));
    cap.a[s_var] = 1;
    cap.rel = Rel::Le;
    cap.b = 1;
    rows.push_back(std::move(cap));
  }

  Tableau tab(n + 1, std::move(rows));
  // Without artificials the slack basis is already feasible.
  if (tab.has_artificials() && !tab.phase1()) return std::nullopt;
  tab.phase2(s_var);
  if (tab.objective() <= 0) return std::nullopt;

  Witness w;
  for (int j = 0; j < n; ++j) w.values[system.vars()[j].name] = tab.value_of(j);
  if (!system.satisfied_by(w.values))
    throw std::logic_error("simplex witness fails substitution check");
  return w;
}

std::optional<FeasibilitySystem> substitute_integers(const FeasibilitySystem& system,
                                                     const std::vector<std::int64_t>& values) {
  FeasibilitySystem out;
  std::vector<int> remap(system.vars().size(), -1);
  for (std::size_t i = 0; i < system.vars().size(); ++i)
    if (system.vars()[i].kind == VarKind::Continuous)
      remap[i] = out.add_continuous(system.vars()[i].name);

  for (const auto& c : system.constraints()) {
    LinConstraint nc;
    nc.rel = c.rel;
    nc.rhs = c.rhs;
    nc.provenance = c.provenance;
    for (const auto& t : c.terms) {
      if (remap[t.var] >= 0)
        nc.terms.push_back({remap[t.var], t.coef});
      else
        nc.rhs -= t.coef * Rat(values[static_cast<std::size_t>(t.var)]);
    }
    if (nc.terms.empty()) {
      if (!rel_holds(Rat(0), nc.rel, nc.rhs)) return std::nullopt;
      continue;
    }
    out.add(std::move(nc));
  }
  return out;
}

namespace {

struct GridShape {
  std::vector<int> int_vars;       // indices in declared order
  std::vector<std::size_t> width;  // domain sizes
  std::size_t total = 1;
};

GridShape grid_shape(const FeasibilitySystem& system) {
  GridShape g;
  g.total = system.integer_grid_size();
  for (std::size_t i = 0; i < system.vars().size(); ++i) {
    const auto& v = system.vars()[i];
    if (v.kind != VarKind::Integer) continue;
    g.int_vars.push_back(static_cast<int>(i));
    g.width.push_back(static_cast<std::size_t>(v.hi - v.lo + 1));
  }
  return g;
}

// Grid point `index` in lexicographic ascending order of the declared
// integer variables (first variable most significant).
std::vector<std::int64_t> grid_point(const FeasibilitySystem& system, const GridShape& g,
                                     std::size_t index) {
  std::vector<std::int64_t> values(system.vars().size(), 0);
  for (std::size_t k = g.int_vars.size(); k-- > 0;) {
    std::size_t w = g.width[k];
    const LinVar& v = system.vars()[static_cast<std::size_t>(g.int_vars[k])];
    values[static_cast<std::size_t>(g.int_vars[k])] = v.lo + static_cast<std::int64_t>(index % w);
    index /= w;
  }
  return values;
}

std::optional<Witness> try_grid_point(const FeasibilitySystem& system, const GridShape& g,
                                      std::size_t index, LpStats& stats) {
  stats.grid_points.fetch_add(1, std::memory_order_relaxed);
  std::vector<std::int64_t> values = grid_point(system, g, index);
  std::optional<FeasibilitySystem> sub = substitute_integers(system, values);
  if (!sub) return std::nullopt;
  std::optional<Witness> w = lp_feasible(*sub, &stats);
  if (!w) return std::nullopt;
  for (int vi : g.int_vars)
    w->values[system.vars()[static_cast<std::size_t>(vi)].name] =
        Rat(values[static_cast<std::size_t>(vi)]);
  return w;
}

void maybe_dump(const FeasibilitySystem& system, LpContext& ctx) {
  if (!ctx.dump_sink) return;
  static std::mutex dump_mutex;
  std::lock_guard lock(dump_mutex);
  std::string text = system.dump();
  std::fprintf(ctx.dump_sink, "system vars=%zu constraints=%zu\n%s\n", system.vars().size(),
               system.constraints().size(), text.c_str());
}

constexpr std::size_t kGridChunk = 64;

}  // namespace

std::optional<Witness> feasible_serial(const FeasibilitySystem& system, LpContext& ctx) {
  std::string key = system.cache_key();
  if (auto hit = ctx.cache_lookup(key)) return *hit;
  maybe_dump(system, ctx);

  GridShape g = grid_shape(system);
  std::optional<Witness> result;
  for (std::size_t i = 0; i < g.total; ++i) {
    result = try_grid_point(system, g, i, ctx.stats);
    if (result) break;
  }
  ctx.cache_store(key, result);
  return result;
}

std::optional<Witness> feasible(const FeasibilitySystem& system, LpContext& ctx, int threads) {
  if (threads <= 1) return feasible_serial(system, ctx);

  std::string key = system.cache_key();
  if (auto hit = ctx.cache_lookup(key)) return *hit;
  maybe_dump(system, ctx);

  GridShape g = grid_shape(system);
  std::optional<Witness> result;
  std::exception_ptr error;
  std::vector<std::optional<Witness>> slots(kGridChunk);
  bool done = false;
  // One worker team for the whole scan; chunks are separated by the
  // implicit barriers so the first feasible index wins deterministically.
#ifdef _OPENMP
#pragma omp parallel num_threads(threads) default(shared)
#endif
  {
    for (std::size_t chunk = 0; chunk < g.total && !done; chunk += kGridChunk) {
      std::size_t end = std::min(chunk + kGridChunk, g.total);
#ifdef _OPENMP
#pragma omp for schedule(dynamic)
#endif
      for (long long i = static_cast<long long>(chunk); i < static_cast<long long>(end); ++i) {
        try {
          slots[static_cast<std::size_t>(i - static_cast<long long>(chunk))] =
              try_grid_point(system, g, static_cast<std::size_t>(i), ctx.stats);
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
        for (std::size_t k = 0; k < end - chunk && !result; ++k)
          if (slots[k]) result = std::move(slots[k]);
        for (auto& slot : slots) slot.reset();
        if (error || result) done = true;
      }
    }
  }
  if (error) std::rethrow_exception(error);
  ctx.cache_store(key, result);
  return result;
}

}  // namespace pta
