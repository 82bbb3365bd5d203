#pragma once

#include "pta/core.hpp"

#include <atomic>
#include <cstdio>
#include <map>
#include <mutex>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

namespace pta {

enum class VarKind { Continuous, Integer };

struct LinVar {
  std::string name;
  VarKind kind = VarKind::Continuous;
  // Domain for integer variables (inclusive). Continuous variables carry an
  // implicit >= 0 bound.
  std::int64_t lo = 0;
  std::int64_t hi = 0;
};

struct LinTerm {
  int var;  // index into FeasibilitySystem::vars()
  Rat coef;
};

struct LinConstraint {
  std::vector<LinTerm> terms;  // sorted by var index, nonzero coefficients
  Rel rel = Rel::Le;
  Rat rhs;
  std::string provenance;  // which guard atom / deadline / domain it encodes
};

class FeasibilitySystem {
public:
  int add_continuous(const std::string& name);
  int add_integer(const std::string& name, std::int64_t lo, std::int64_t hi);
  // Terms are sorted and merged; zero coefficients dropped. Throws
  // SemanticError on an empty or out-of-range term list.
  void add(LinConstraint c);

  const std::vector<LinVar>& vars() const { return vars_; }
  const std::vector<LinConstraint>& constraints() const { return cons_; }
  int var_index(const std::string& name) const;  // -1 if absent
  bool has_integer_vars() const;
  std::size_t integer_grid_size() const;  // product of integer domains

  // One constraint per line: <coef>*<var> (+ ...) <op> <const>   # <provenance>
  std::string dump() const;
  // Canonical serialization used as the memo key; excludes provenance.
  std::string cache_key() const;

  // Exact substitution check; strict relations must hold strictly.
  // The assignment must cover every variable of the system.
  bool satisfied_by(const std::map<std::string, Rat>& assignment) const;

private:
  std::vector<LinVar> vars_;
  std::unordered_map<std::string, int> index_;
  std::vector<LinConstraint> cons_;
};

struct Witness {
  std::map<std::string, Rat> values;
};

struct LpStats {
  std::atomic<std::uint64_t> lp_calls{0};     // simplex invocations
  std::atomic<std::uint64_t> grid_points{0};  // integer assignments tried
  std::atomic<std::uint64_t> cache_hits{0};
  std::atomic<std::uint64_t> cache_misses{0};
};

// Shared solver state: memo cache keyed by the canonical system
// serialization, counters, and an optional dump sink for --dump-lp.
class LpContext {
public:
  LpStats stats;
  std::FILE* dump_sink = nullptr;

  std::optional<std::optional<Witness>> cache_lookup(const std::string& key);
  void cache_store(const std::string& key, const std::optional<Witness>& result);
  void clear_cache();

private:
  std::mutex mutex_;
  std::unordered_map<std::string, std::optional<Witness>> cache_;
};

// Decides a continuous-only system by exact two-phase simplex pivoting with
// Bland's rule. Strict atoms are handled through one shared slack s
// (lhs < c becomes lhs + s <= c) that is maximized subject to s <= 1; the
// system is feasible iff the optimum has s > 0. Every returned witness is
// re-checked by substitution before being handed out.
// Throws SemanticError if the system has integer variables.
std::optional<Witness> lp_feasible(const FeasibilitySystem& system, LpStats* stats = nullptr);

// Decides a mixed system by enumerating the integer grid in lexicographic
// ascending order of declared variable order and calling lp_feasible on
// each substituted system. Returns the witness of the first feasible grid
// point; results are memoized in ctx. `threads` > 1 scans fixed-size grid
// chunks in parallel without changing the reported result.
std::optional<Witness> feasible(const FeasibilitySystem& system, LpContext& ctx, int threads = 1);

// Serial reference implementation of the grid scan (identical results).
std::optional<Witness> feasible_serial(const FeasibilitySystem& system, LpContext& ctx);

// Folds the given integer assignment (values indexed like vars()) into the
// constants and returns the continuous-only remainder. Ground constraints
// are evaluated on the spot; if one fails, returns std::nullopt.
std::optional<FeasibilitySystem> substitute_integers(const FeasibilitySystem& system,
                                                     const std::vector<std::int64_t>& values);

}  // namespace pta
