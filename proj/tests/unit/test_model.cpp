#include "pta/model.hpp"
#include "pta/parse.hpp"
#include "support/gen.hpp"

#include <doctest.h>

using namespace pta;
using pta::testing::Rng;

namespace {

ParamValuation gamma(std::int64_t p1, std::int64_t p2) {
  ParamValuation g;
  g.values["p1"] = p1;
  g.values["p2"] = p2;
  return g;
}

}  // namespace

TEST_CASE("bundled model parses with the expected shape") {
  Model m = pta::testing::load_model("fig1.pta");
  CHECK(m.pta.locations.size() == 9);
  CHECK(m.pta.alphabet.size() == 4);
  CHECK(m.pta.clocks.size() == 3);  // x0 implicit
  CHECK(m.pta.clocks.front() == "x0");
  CHECK(m.pta.parameters.size() == 2);
  CHECK(m.pta.transitions.size() == 15);
  CHECK(m.pta.init == "l0");
  CHECK(m.spec.targets == std::vector<LocationId>{"l_t"});
  CHECK(m.spec.avoids == std::vector<LocationId>{"l_d"});
  CHECK(m.spec.deadline == 15);
}

TEST_CASE("degenerate single-location model is valid") {
  Model m = parse_model("location l0 init target\ndeadline 0\n");
  CHECK(m.pta.locations.size() == 1);
  CHECK(m.pta.transitions.empty());
  CHECK(m.spec.deadline == 0);
  CHECK(m.spec.is_target("l0"));
}

TEST_CASE("x0 reset is rejected") {
  const std::string text =
      "location l0 init target\nlocation l1\ndeadline 0\n"
      "trans l0 a {x0} true l1\n";
  CHECK_THROWS_WITH_AS(parse_model(text), doctest::Contains("x0 reset forbidden"), SemanticError);
}

TEST_CASE("parser rejects broken models") {
  CHECK_THROWS_AS(parse_model("location l0 init\n"), SemanticError);  // no deadline
  CHECK_THROWS_AS(parse_model("location l0\ndeadline 1\n"), SemanticError);  // no init
  CHECK_THROWS_AS(parse_model("location l0 init\nlocation l0\ndeadline 1\n"), SemanticError);
  CHECK_THROWS_AS(parse_model("location l0 init\nlocation l1 init\ndeadline 1\n"), SemanticError);
  CHECK_THROWS_AS(parse_model("location l0 init target avoid\ndeadline 1\n"), SemanticError);
  CHECK_THROWS_AS(parse_model("location l0 init\nclock x0\ndeadline 1\n"), SemanticError);
  CHECK_THROWS_AS(parse_model("location l0 init\ndeadline 1\ntrans l0 a {} true l9\n"),
                  SemanticError);
  CHECK_THROWS_AS(parse_model("location l0 init\ndeadline 1\ntrans l0 a {} x >= p1 l0\n"),
                  SemanticError);  // undeclared clock/param
  CHECK_THROWS_AS(parse_model("location l0 init\ndeadline 1\ndeadline 2\n"), SemanticError);
  CHECK_THROWS_AS(parse_model("junk line\n"), ParseError);
  CHECK_THROWS_AS(parse_model("location l0 init\ndeadline 1\ntrans l0 a { true l0\n"), ParseError);
}

TEST_CASE("syntax errors carry line and column") {
  try {
    parse_model("location l0 init\ndeadline ?\n");
    FAIL("expected ParseError");
  } catch (const ParseError& e) {
    CHECK(e.line == 2);
    CHECK(e.column >= 10);
  }
}

TEST_CASE("instantiate evaluates parametric bounds") {
  Model m = pta::testing::load_model("fig1.pta");

  SUBCASE("phi_a under (3,3) collapses to 3 <= x <= 3") {
    PTA ta = instantiate(m.pta, gamma(3, 3));
    const Transition& e4 = ta.transitions[3];
    REQUIRE(e4.guard.atoms.size() == 2);
    CHECK(e4.guard.atoms[0].to_string() == "x >= 3");
    CHECK(e4.guard.atoms[1].to_string() == "x <= 3");
    CHECK(ta.parameters.empty());
  }
  SUBCASE("mixed guard under (3,4)") {
    Model two = parse_model(
        "location l0 init\nlocation l1 target\nclock x\nclock y\n"
        "param p1 0 9\nparam p2 0 9\ndeadline 5\n"
        "trans l0 a {} x > p1 & y <= p2 l1\n");
    PTA ta = instantiate(two.pta, gamma(3, 4));
    CHECK(ta.transitions[0].guard.to_string() == "x > 3 & y <= 4");
  }
  SUBCASE("parameter-free guards are unchanged") {
    Model free = parse_model(
        "location l0 init\nlocation l1 target\nclock x\ndeadline 20\n"
        "trans l0 a {} x >= 12 l1\n");
    PTA ta = instantiate(free.pta, ParamValuation{});
    CHECK(ta.transitions[0].guard.to_string() == "x >= 12");
  }
  SUBCASE("missing and out-of-domain values are rejected") {
    CHECK_THROWS_AS(instantiate(m.pta, ParamValuation{}), SemanticError);
    CHECK_THROWS_AS(instantiate(m.pta, gamma(1, 3)), SemanticError);
  }
}

TEST_CASE("enabled inputs per location") {
  Model m = pta::testing::load_model("fig1.pta");
  CHECK(enabled_inputs(m.pta, "l0") == std::vector<Symbol>{"a", "b"});
  CHECK(enabled_inputs(m.pta, "l_t").empty());
  CHECK(enabled_inputs(m.pta, "l_a") == std::vector<Symbol>{"c", "d"});
  CHECK_THROWS_AS(enabled_inputs(m.pta, "nowhere"), SemanticError);
}

TEST_CASE("post lists the group transitions in declaration order") {
  Model m = pta::testing::load_model("fig1.pta");
  auto targets_of = [&](const LocationId& l, const Symbol& a) {
    std::vector<LocationId> out;
    for (int idx : post(m.pta, l, a)) out.push_back(m.pta.transitions[idx].target);
    return out;
  };
  CHECK(targets_of("l_a", "c") == std::vector<LocationId>{"l'_c", "l_c"});
  for (int idx : post(m.pta, "l_a", "c"))
    CHECK(m.pta.transitions[idx].guard.to_string() == "x >= p2 & x <= p1");
  CHECK(targets_of("l_a", "d") == std::vector<LocationId>{"l_d", "l_t"});
  CHECK(post(m.pta, "l_t", "a").empty());
}

TEST_CASE("normalize_guards") {
  SUBCASE("uniform groups stay untouched") {
    Model m = parse_model(
        "location l0 init\nlocation l1 target\nclock x\nparam p1 0 3\ndeadline 9\n"
        "trans l0 a {} x >= p1 l1\ntrans l0 a {x} x >= p1 l1\n");
    NormalizeResult r = normalize_guards(m.pta);
    CHECK(r.report.rewritten.empty());
    CHECK(r.pta == m.pta);
  }
  SUBCASE("diverging groups get the conjoined guard") {
    Model m = parse_model(
        "location l0 init\nlocation l1 target\nclock x\nclock y\nparam p1 0 3\ndeadline 9\n"
        "trans l0 a {} x >= 2 l1\ntrans l0 a {} y < p1 l1\n");
    NormalizeResult r = normalize_guards(m.pta);
    REQUIRE(r.report.rewritten.size() == 1);
    CHECK(r.report.rewritten[0].merged.to_string() == "x >= 2 & y < p1");
    for (int idx : post(r.pta, "l0", "a"))
      CHECK(r.pta.transitions[idx].guard.to_string() == "x >= 2 & y < p1");
  }
  SUBCASE("the bundled model already satisfies guard uniformity") {
    Model m = pta::testing::load_model("fig1.pta");
    NormalizeResult r = normalize_guards(m.pta);
    CHECK(r.report.rewritten.empty());
    CHECK(r.pta == m.pta);
  }
}

TEST_CASE("normalize_guards is idempotent and structure-preserving") {
  Rng rng(2024);
  pta::testing::ModelOptions opts;
  opts.allow_guard_conflicts = true;
  for (int round = 0; round < 50; ++round) {
    Model m = pta::testing::random_model(rng, opts);
    NormalizeResult once = normalize_guards(m.pta);
    NormalizeResult twice = normalize_guards(once.pta);
    CHECK(twice.report.rewritten.empty());
    CHECK(once.pta == twice.pta);
    REQUIRE(once.pta.transitions.size() == m.pta.transitions.size());
    for (std::size_t i = 0; i < m.pta.transitions.size(); ++i) {
      CHECK(once.pta.transitions[i].source == m.pta.transitions[i].source);
      CHECK(once.pta.transitions[i].input == m.pta.transitions[i].input);
      CHECK(once.pta.transitions[i].resets == m.pta.transitions[i].resets);
      CHECK(once.pta.transitions[i].target == m.pta.transitions[i].target);
    }
    // All groups uniform afterwards.
    for (const auto& t : once.pta.transitions)
      CHECK_NOTHROW(group_guard(once.pta, t.source, t.input));
  }
}

TEST_CASE("parse/print round-trip is structurally stable") {
  Model fig1 = pta::testing::load_model("fig1.pta");
  CHECK(parse_model(print_model(fig1)) == fig1);

  Rng rng(7);
  pta::testing::ModelOptions opts;
  opts.allow_guard_conflicts = true;
  for (int round = 0; round < 50; ++round) {
    Model m = pta::testing::random_model(rng, opts);
    Model reparsed = parse_model(print_model(m));
    CHECK(reparsed == m);
    CHECK(parse_model(print_model(reparsed)) == reparsed);
  }
}

TEST_CASE("affine expression evaluation matches direct computation") {
  Rng rng(99);
  for (int round = 0; round < 200; ++round) {
    AffineParamExpr expr;
    int nterms = rng.geti(0, 3);
    ParamValuation g;
    std::int64_t expected = expr.constant = rng.geti(0, 20);
    for (int i = 0; i < nterms; ++i) {
      std::string p = "p" + std::to_string(i);
      std::int64_t coef = rng.geti(1, 6);
      std::int64_t value = rng.geti(0, 9);
      expr.add_term(p, coef);
      g.values[p] = value;
      expected += coef * value;
    }
    CHECK(expr.eval(g) == Rat(expected));
  }
}
