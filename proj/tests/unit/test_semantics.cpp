#include "pta/semantics.hpp"

#include "pta/parse.hpp"
#include "support/gen.hpp"

#include <doctest.h>

using namespace pta;
using pta::testing::Rng;

namespace {

Model fig1() { return pta::testing::load_model("fig1.pta"); }

ParamValuation gamma(std::int64_t p1, std::int64_t p2) {
  ParamValuation g;
  g.values["p1"] = p1;
  g.values["p2"] = p2;
  return g;
}

ClockValuation val(Rat x0, Rat x, Rat y) {
  ClockValuation v;
  v.values = {{"x0", x0}, {"x", x}, {"y", y}};
  return v;
}

const std::vector<TransitionId> kPi3 = {"e1", "e3", "e4", "e6", "e10"};
const std::vector<TransitionId> kPi2 = {"e12", "e13", "e14", "e6", "e10"};

}  // namespace

TEST_CASE("delay shifts every clock") {
  CHECK(delay(val(0, 0, 0), 3) == val(3, 3, 3));
  CHECK(delay(val(3, 0, 3), 0) == val(3, 0, 3));
  CHECK(delay(val(3, 3, 3), Rat(9, 2)) == val(Rat(15, 2), Rat(15, 2), Rat(15, 2)));
  CHECK_THROWS_AS(delay(val(0, 0, 0), Rat(-1)), SemanticError);
}

TEST_CASE("reset zeroes exactly the given clocks") {
  CHECK(reset(val(3, 3, 3), {"x", "y"}) == val(3, 0, 0));
  CHECK(reset(val(5, 2, 1), {}) == val(5, 2, 1));
  CHECK(reset(val(6, 3, 6), {"x"}) == val(6, 0, 6));
  CHECK_THROWS_AS(reset(val(1, 1, 1), {"x0"}), SemanticError);
}

TEST_CASE("delay is additive and reset idempotent") {
  Rng rng(11);
  for (int round = 0; round < 100; ++round) {
    ClockValuation v = val(rng.rat(0, 20), rng.rat(0, 20), rng.rat(0, 20));
    Rat d1 = rng.rat(0, 10), d2 = rng.rat(0, 10);
    CHECK(delay(delay(v, d1), d2) == delay(v, d1 + d2));
    std::vector<ClockId> lambda;
    if (rng.flip()) lambda.push_back("x");
    if (rng.flip()) lambda.push_back("y");
    CHECK(reset(reset(v, lambda), lambda) == reset(v, lambda));
  }
}

TEST_CASE("guard evaluation under a valuation") {
  Model m = fig1();
  const Guard& phi_a = m.pta.transitions[3].guard;  // x >= p2 & x <= p1
  CHECK(eval_guard(val(3, 3, 3), phi_a, gamma(3, 3)));
  CHECK_FALSE(eval_guard(val(4, 4, 4), phi_a, gamma(3, 3)));
  CHECK(eval_guard(val(7, 7, 7), Guard{}, ParamValuation{}));  // empty conjunction
  CHECK_THROWS_AS(eval_guard(val(3, 3, 3), phi_a, ParamValuation{}), SemanticError);
}

TEST_CASE("step branches over all enabled transitions") {
  Model m = fig1();
  ParamValuation g = gamma(3, 3);

  SUBCASE("two a-successors from the initial state") {
    State s{m.pta.init, ClockValuation::zero(m.pta)};
    auto next = step(m.pta, g, s, 0, "a");
    REQUIRE(next.size() == 2);
    CHECK(next[0].location == "l'_a");
    CHECK(next[0].valuation == val(0, 0, 0));
    CHECK(next[1].location == "l_a");
    CHECK(next[1].valuation == val(0, 0, 0));
  }
  SUBCASE("c is enabled at l_a when x meets phi_a") {
    State s{"l_a", val(3, 3, 3)};
    auto next = step(m.pta, g, s, 0, "c");
    REQUIRE(next.size() == 2);
    CHECK(next[0].location == "l'_c");
    CHECK(next[0].valuation == val(3, 0, 3));
    CHECK(next[1].location == "l_c");
  }
  SUBCASE("no outgoing transitions at the target") {
    State s{"l_t", val(9, 9, 9)};
    CHECK(step(m.pta, g, s, 1, "a").empty());
  }
}

TEST_CASE("path realization") {
  Model m = fig1();

  SUBCASE("the a-branch run through l'_a and l'_c") {
    Path pi3 = make_path(m.pta, kPi3);
    CHECK(realize_path(m.pta, gamma(3, 3), pi3, {0, 3, 3, 3, 6}));
  }
  SUBCASE("the b-branch to l_t admits no delays within the deadline") {
    Path pi2 = make_path(m.pta, kPi2);
    Rng rng(23);
    int tried = 0;
    while (tried < 200) {
      std::vector<Rat> delays;
      Rat sum = 0;
      for (int i = 0; i < 5; ++i) {
        delays.push_back(rng.rat(0, 16));
        sum += delays.back();
      }
      if (sum > 15) continue;
      ++tried;
      for (std::int64_t p1 = 2; p1 <= 4; ++p1)
        for (std::int64_t p2 = 2; p2 <= 4; ++p2)
          CHECK_FALSE(realize_path(m.pta, gamma(p1, p2), pi2, delays));
    }
  }
  SUBCASE("the empty path is trivially realizable") {
    Path empty = make_path(m.pta, {});
    CHECK(realize_path(m.pta, gamma(2, 2), empty, {}));
  }
  SUBCASE("delay count must match") {
    Path pi3 = make_path(m.pta, kPi3);
    CHECK_THROWS_AS(realize_path(m.pta, gamma(3, 3), pi3, {0, 3}), SemanticError);
  }
}

TEST_CASE("satisfaction of a reach-avoid run") {
  Model m = fig1();
  auto run_along = [&](const std::vector<TransitionId>& ids, const std::vector<Rat>& delays) {
    Run run;
    for (std::size_t i = 0; i < ids.size(); ++i) run.steps.push_back({delays[i], ids[i]});
    run.final_state = State{};  // unused by check_satisfaction
    return run;
  };

  CHECK(check_satisfaction(m.pta, run_along(kPi3, {0, 3, 3, 3, 6}), m.spec));
  // Entering l_d on the way is a violation even if l_t follows.
  CHECK_FALSE(check_satisfaction(m.pta, run_along({"e2", "e7", "e9"}, {0, 12, 6}), m.spec));
  // Total time 16 misses the deadline.
  CHECK_FALSE(check_satisfaction(m.pta, run_along(kPi3, {1, 3, 3, 3, 6}), m.spec));
}

TEST_CASE("x0 accumulates the delays of a run") {
  Model m = fig1();
  Rng rng(31);
  for (int round = 0; round < 100; ++round) {
    Path path = pta::testing::random_path(rng, m.pta, 5);
    std::vector<Rat> delays;
    Rat total = 0;
    for (int i = 0; i < path.length(); ++i) {
      delays.push_back(rng.rat(0, 12));
      total += delays.back();
    }
    // Use a valuation that realizes nothing in particular; replay manually.
    ClockValuation v = ClockValuation::zero(m.pta);
    for (int i = 0; i < path.length(); ++i) {
      v = delay(v, delays[i]);
      v = reset(v, m.pta.transitions[path.transitions[i]].resets);
    }
    CHECK(v.at("x0") == total);
  }
}

TEST_CASE("step agrees with post and realize_path with stepwise simulation") {
  Rng rng(47);
  for (int round = 0; round < 100; ++round) {
    Model m = pta::testing::random_model(rng);
    ParamValuation g;
    for (const auto& p : m.pta.parameters)
      g.values[p.name] = p.lo + rng.geti(0, static_cast<int>(p.hi - p.lo));

    Path path = pta::testing::random_path(rng, m.pta, 4);
    std::vector<Rat> delays;
    for (int i = 0; i < path.length(); ++i) delays.push_back(rng.rat(0, 8));

    // Independent replay: at every position the fired transition must be in
    // post(l, a) and its guard must hold.
    bool expect = true;
    ClockValuation v = ClockValuation::zero(m.pta);
    for (int i = 0; i < path.length() && expect; ++i) {
      const Transition& t = m.pta.transitions[path.transitions[i]];
      auto group = post(m.pta, t.source, t.input);
      CHECK(std::find(group.begin(), group.end(), path.transitions[i]) != group.end());
      v = delay(v, delays[i]);
      if (!eval_guard(v, t.guard, g))
        expect = false;
      else
        v = reset(v, t.resets);
    }
    CHECK(realize_path(m.pta, g, path, delays) == expect);

    // Every state step returns comes from a post() transition.
    State s{m.pta.init, ClockValuation::zero(m.pta)};
    for (const auto& a : m.pta.alphabet) {
      for (auto& [tidx, next] : step_transitions(m.pta, g, s, delays.empty() ? Rat(1) : delays[0], a)) {
        auto group = post(m.pta, s.location, a);
        CHECK(std::find(group.begin(), group.end(), tidx) != group.end());
        CHECK(next.location == m.pta.transitions[tidx].target);
      }
    }
  }
}

TEST_CASE("normalized groups are enabled all-or-nothing") {
  Rng rng(53);
  pta::testing::ModelOptions opts;
  opts.allow_guard_conflicts = true;
  for (int round = 0; round < 100; ++round) {
    Model m = pta::testing::random_model(rng, opts);
    PTA norm = normalize_guards(m.pta).pta;
    ParamValuation g;
    for (const auto& p : norm.parameters)
      g.values[p.name] = p.lo + rng.geti(0, static_cast<int>(p.hi - p.lo));
    State s{norm.init, ClockValuation::zero(norm)};
    Rat d = rng.rat(0, 8);
    for (const auto& a : norm.alphabet) {
      auto group = post(norm, s.location, a);
      if (group.empty()) continue;
      auto fired = step_transitions(norm, g, s, d, a);
      CHECK((fired.empty() || fired.size() == group.size()));
    }
  }
}

TEST_CASE("trace format lists delay, transition and resulting state") {
  Model m = fig1();
  Run run;
  run.steps = {{0, "e2"}, {3, "e5"}};
  run.final_state = State{};
  std::string text = format_run(m.pta, gamma(3, 3), run);
  CHECK(text ==
        "delay=0 fire=e2 -> l_a [x0=0 x=0 y=0]\n"
        "delay=3 fire=e5 -> l_c [x0=3 x=0 y=3]\n");
}

TEST_CASE("interleaved path parsing validates the chain") {
  Model m = fig1();
  Path p = make_path_interleaved(m.pta, {"l0", "e12", "l'_b", "e13", "l_b"});
  CHECK(p.length() == 2);
  CHECK(p.locations.back() == "l_b");
  CHECK_THROWS_AS(make_path_interleaved(m.pta, {"l0", "e12", "l_b"}), SemanticError);
  CHECK_THROWS_AS(make_path_interleaved(m.pta, {"l_a"}), SemanticError);
  CHECK_THROWS_AS(make_path_interleaved(m.pta, {"l0", "zz", "l_b"}), SemanticError);
}
