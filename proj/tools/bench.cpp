// Compares the serial reference implementations against the OpenMP kernels
// on three synthetic workloads: the integer-grid feasibility scan, the
// candidate sub-tree scan, and exhaustive closed-loop replay.

#include "pta/lp.hpp"
#include "pta/parallel.hpp"
#include "pta/synthesis.hpp"
#include "pta/validate.hpp"

#include <chrono>
#include <cstdio>
#include <functional>

namespace {

// One unmeasured warmup, then the best of three runs, so allocator and page
// cache state do not favour whichever variant runs second.
double time_ms(const std::function<void()>& fn) {
  fn();
  double best = 0;
  for (int rep = 0; rep < 3; ++rep) {
    auto start = std::chrono::steady_clock::now();
    fn();
    auto stop = std::chrono::steady_clock::now();
    double ms = std::chrono::duration<double, std::milli>(stop - start).count();
    if (rep == 0 || ms < best) best = ms;
  }
  return best;
}

void report(const char* name, double serial_ms, double parallel_ms, int threads) {
  std::printf("%-22s serial %8.1f ms   parallel(%d) %8.1f ms   speedup %.2fx\n", name, serial_ms,
              threads, parallel_ms, parallel_ms > 0 ? serial_ms / parallel_ms : 0.0);
}

// 10 integer variables in [0,1] (1024 grid points), all infeasible, so the
// scan has to visit the whole grid.
pta::FeasibilitySystem grid_workload() {
  pta::FeasibilitySystem sys;
  std::vector<int> q;
  for (int i = 0; i < 10; ++i) q.push_back(sys.add_integer("q" + std::to_string(i), 0, 1));
  std::vector<int> d;
  for (int i = 0; i < 6; ++i) d.push_back(sys.add_continuous("d" + std::to_string(i)));

  pta::LinConstraint budget;
  for (int v : d) budget.terms.push_back({v, 1});
  budget.rel = pta::Rel::Le;
  budget.rhs = 80;
  sys.add(budget);

  // sum d >= 3*sum q + 85 can never fit under the budget.
  pta::LinConstraint lower;
  for (int v : d) lower.terms.push_back({v, 1});
  for (int v : q) lower.terms.push_back({v, pta::Rat(-3)});
  lower.rel = pta::Rel::Ge;
  lower.rhs = 85;
  sys.add(lower);

  for (std::size_t i = 0; i + 1 < d.size(); ++i) {
    pta::LinConstraint link;
    link.terms.push_back({d[i], 1});
    link.terms.push_back({d[i + 1], pta::Rat(-1)});
    link.terms.push_back({q[i], 1});
    link.rel = pta::Rel::Ge;
    link.rhs = pta::Rat(-5);
    sys.add(link);
  }
  return sys;
}

// Ladder with two inputs per rung carrying different time requirements, so
// all 2^10 candidate sub-trees produce distinct systems; with deadline 5
// every one of them is infeasible and the scan visits the whole space.
// Pruning is disabled to keep the candidates alive.
pta::Model ladder_workload(int rungs) {
  pta::PTA pta;
  for (int i = 0; i <= rungs; ++i) pta.locations.push_back("s" + std::to_string(i));
  pta.init = "s0";
  pta.clocks = {"x"};
  for (int i = 0; i < rungs; ++i) {
    int need = 1;
    for (const char* input : {"u", "w"}) {
      pta::Transition t;
      t.source = "s" + std::to_string(i);
      t.target = "s" + std::to_string(i + 1);
      t.input = input;
      t.resets = {"x"};
      pta::GuardAtom atom{"x", pta::Rel::Ge, pta::AffineParamExpr::of_constant(need++)};
      t.guard.atoms.push_back(atom);
      pta.transitions.push_back(t);
    }
  }
  pta.finalize();
  pta::Spec spec;
  spec.targets = {"s" + std::to_string(rungs)};
  spec.deadline = 5;
  return {pta, spec};
}

// Binary fan: one input, two transitions per step (distinct resets), so a
// depth-14 strategy tree has 16384 leaves to replay.
pta::Model fan_workload(int depth) {
  pta::PTA pta;
  for (int i = 0; i <= depth; ++i) pta.locations.push_back("f" + std::to_string(i));
  pta.init = "f0";
  pta.clocks = {"x", "y"};
  for (int i = 0; i < depth; ++i) {
    for (const char* clk : {"x", "y"}) {
      pta::Transition t;
      t.source = "f" + std::to_string(i);
      t.target = "f" + std::to_string(i + 1);
      t.input = "go";
      t.resets = {clk};
      pta.transitions.push_back(t);
    }
  }
  pta.finalize();
  pta::Spec spec;
  spec.targets = {"f" + std::to_string(depth)};
  spec.deadline = 1;
  return {pta, spec};
}

}  // namespace

int main() {
  int threads = pta::env_thread_count();
  if (threads < 2) threads = pta::default_thread_count();
  std::printf("thread budget: %d\n\n", threads);

  {
    pta::FeasibilitySystem sys = grid_workload();
    pta::LpContext ctx;
    double s = time_ms([&] {
      ctx.clear_cache();
      pta::feasible_serial(sys, ctx);
    });
    double p = time_ms([&] {
      ctx.clear_cache();
      pta::feasible(sys, ctx, threads);
    });
    report("grid scan (1024 pts)", s, p, threads);
  }

  {
    pta::Model model = ladder_workload(10);
    pta::SynthesisConfig cfg;
    cfg.prune = false;
    pta::LpContext ctx;
    double s = time_ms([&] {
      ctx.clear_cache();
      pta::synthesize(model.pta, model.spec, cfg, ctx, 1);
    });
    double p = time_ms([&] {
      ctx.clear_cache();
      pta::synthesize(model.pta, model.spec, cfg, ctx, threads);
    });
    report("candidate scan (1024)", s, p, threads);
  }

  {
    pta::Model model = fan_workload(14);
    pta::LpContext ctx;
    pta::SynthesisConfig cfg;
    cfg.prune = false;  // guards are all `true`, no point solving systems
    pta::ForwardResult fr = pta::forward_analysis(model.pta, model.spec, cfg, ctx, 1);
    pta::ProperSubTree sub = pta::get_solution_tree(fr.tree, 1);
    pta::Witness witness;  // zero delays satisfy every constraint here
    for (int id : sub.internal_nodes()) witness.values["d@n" + std::to_string(id)] = 0;
    pta::Strategy strategy = pta::extract_strategy(sub, witness);

    double s = time_ms([&] { pta::validate_serial(model.pta, model.spec, strategy); });
    double p = time_ms([&] { pta::validate(model.pta, model.spec, strategy, threads); });
    report("replay (16384 runs)", s, p, threads);
  }
  return 0;
}
