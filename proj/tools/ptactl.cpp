// Command-line front end: synthesis, validation, path feasibility checks
// and closed-loop simulation for parametric timed automata models.
//
// Exit codes: 0 solution found / validation ok, 1 no solution / validation
// failed, 2 depth bound hit, 3 input error.

#include "pta/parallel.hpp"
#include "pta/parse.hpp"
#include "pta/synthesis.hpp"
#include "pta/validate.hpp"

#include <CLI11.hpp>

#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>

namespace {

constexpr int kOk = 0;
constexpr int kNoSolution = 1;
constexpr int kBoundHit = 2;
constexpr int kInputError = 3;

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw pta::SemanticError("cannot open file '" + path + "'");
  std::ostringstream out;
  out << in.rdbuf();
  return out.str();
}

void print_stats(const pta::SynthesisResult& result, const pta::LpContext& ctx) {
  std::fprintf(stderr,
               "stats: ps=%llu candidates-solved=%llu prunes=%llu path-checks=%llu "
               "lp-calls=%llu grid-points=%llu cache-hits=%llu cache-misses=%llu bound-hit=%s\n",
               static_cast<unsigned long long>(result.ps),
               static_cast<unsigned long long>(result.candidates_solved),
               static_cast<unsigned long long>(result.prunes),
               static_cast<unsigned long long>(result.path_checks),
               static_cast<unsigned long long>(ctx.stats.lp_calls.load()),
               static_cast<unsigned long long>(ctx.stats.grid_points.load()),
               static_cast<unsigned long long>(ctx.stats.cache_hits.load()),
               static_cast<unsigned long long>(ctx.stats.cache_misses.load()),
               result.bound_hit ? "yes" : "no");
}

int cmd_synth(const std::string& model_file, int max_depth, bool all, bool dump_lp,
              const std::string& out_file) {
  pta::Model model = pta::parse_model_file(model_file);
  pta::SynthesisConfig cfg;
  cfg.max_depth = max_depth;
  cfg.enumerate_all = all;
  pta::LpContext ctx;
  if (dump_lp) ctx.dump_sink = stderr;

  pta::SynthesisResult result =
      pta::synthesize(model.pta, model.spec, cfg, ctx, pta::env_thread_count());
  print_stats(result, ctx);

  if (result.outcome == pta::Outcome::Solution) {
    std::string text = pta::strategy_to_text(model.pta, *result.strategy);
    if (!out_file.empty()) {
      std::ofstream out(out_file, std::ios::binary);
      if (!out) throw pta::SemanticError("cannot write strategy file '" + out_file + "'");
      out << text;
      // Keep stdout machine-parseable: just the valuation.
      std::cout << text.substr(0, text.find('\n')) << "\n";
    } else {
      std::cout << text;
    }
    if (all) {
      std::fprintf(stderr, "feasible candidates: %zu of %llu\n", result.all.size(),
                   static_cast<unsigned long long>(result.ps));
    }
    return kOk;
  }
  if (result.outcome == pta::Outcome::BoundHit) {
    std::cout << "bound hit: exploration truncated at depth " << max_depth << "\n";
    return kBoundHit;
  }
  std::cout << "no solution\n";
  return kNoSolution;
}

int cmd_validate(const std::string& model_file, const std::string& strategy_file) {
  pta::Model model = pta::parse_model_file(model_file);
  pta::Strategy strategy = pta::strategy_from_text(model.pta, read_file(strategy_file));
  pta::ValidationReport report =
      pta::validate(model.pta, model.spec, strategy, pta::env_thread_count());
  std::cout << report.summary() << "\n";
  for (const auto& v : report.violations) {
    std::cout << "violation: " << pta::violation_reason_name(v.reason) << "\n";
    std::cout << pta::format_run(pta::instantiate(model.pta, strategy.valuation), {}, v.run);
  }
  return report.ok ? kOk : kNoSolution;
}

int cmd_check_path(const std::string& model_file, const std::string& path_text, bool dump_lp) {
  pta::Model model = pta::parse_model_file(model_file);
  std::vector<std::string> tokens;
  {
    std::istringstream in(path_text);
    std::string tok;
    while (in >> tok) tokens.push_back(tok);
  }
  pta::Path path = pta::make_path_interleaved(model.pta, tokens);
  pta::FeasibilitySystem system = pta::encode_path(model.pta, path, model.spec);
  pta::LpContext ctx;
  if (dump_lp) ctx.dump_sink = stderr;
  std::optional<pta::Witness> witness = pta::feasible(system, ctx, pta::env_thread_count());
  if (!witness) {
    std::cout << "infeasible\n";
    return kNoSolution;
  }
  std::cout << "feasible\n";
  std::cout << "gamma";
  for (const auto& p : model.pta.parameters)
    std::cout << " " << p.name << "=" << pta::rat_to_string(witness->values.at("g@" + p.name));
  std::cout << "\n";
  std::cout << "delays";
  for (int i = 0; i < path.length(); ++i)
    std::cout << " " << pta::rat_to_string(witness->values.at("d@" + std::to_string(i)));
  std::cout << "\n";
  return kOk;
}

int cmd_simulate(const std::string& model_file, const std::string& strategy_file,
                 const std::string& resolve) {
  pta::Model model = pta::parse_model_file(model_file);
  pta::Strategy strategy = pta::strategy_from_text(model.pta, read_file(strategy_file));
  pta::PTA ta = pta::instantiate(model.pta, strategy.valuation);

  std::vector<std::size_t> picks;
  if (resolve != "first") {
    for (const auto& part : [&] {
           std::vector<std::string> parts;
           std::string cur;
           std::istringstream in(resolve);
           while (std::getline(in, cur, ',')) parts.push_back(cur);
           return parts;
         }()) {
      try {
        picks.push_back(static_cast<std::size_t>(std::stoull(part)));
      } catch (const std::exception&) {
        throw pta::FormatError("bad --resolve entry '" + part + "'");
      }
    }
  }

  pta::State state{ta.init, pta::ClockValuation::zero(ta)};
  pta::Run run;
  run.final_state = state;
  std::vector<pta::TransitionId> path;
  std::size_t step_no = 0;
  std::string failure;

  while (true) {
    if (model.spec.is_target(state.location)) {
      if (state.valuation.at(pta::kGlobalClock) > pta::Rat(model.spec.deadline))
        failure = "deadline exceeded at target entry";
      break;
    }
    if (model.spec.is_avoid(state.location)) {
      failure = "avoid location '" + state.location + "' entered";
      break;
    }
    const pta::Strategy::Entry* entry = strategy.find(path);
    if (!entry) {
      failure = "no strategy entry for the current path";
      break;
    }
    auto successors = pta::step_transitions(ta, {}, state, entry->delay, entry->input);
    if (successors.empty()) {
      failure = "strategy prescribes input '" + entry->input + "' but no transition is enabled";
      break;
    }
    std::size_t pick = step_no < picks.size() ? picks[step_no] : 0;
    if (pick >= successors.size())
      throw pta::FormatError("resolution index " + std::to_string(pick) + " out of range (" +
                             std::to_string(successors.size()) + " successors)");
    auto& [tidx, next] = successors[pick];
    run.steps.push_back({entry->delay, ta.transitions[static_cast<std::size_t>(tidx)].id});
    run.final_state = next;
    path.push_back(ta.transitions[static_cast<std::size_t>(tidx)].id);
    state = next;
    ++step_no;
  }

  std::cout << pta::format_run(ta, {}, run);
  if (!failure.empty()) {
    std::fprintf(stderr, "run failed: %s\n", failure.c_str());
    return kNoSolution;
  }
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Controller and parameter synthesis for parametric timed automata"};
  app.require_subcommand(1);

  std::string model_file, strategy_file, out_file, path_text, resolve = "first";
  int max_depth = 64;
  bool all = false, dump_lp = false;

  CLI::App* synth = app.add_subcommand("synth", "Synthesize a strategy and parameter valuation");
  synth->add_option("model", model_file, "model file")->required();
  synth->add_option("--max-depth", max_depth, "exploration depth bound")->check(CLI::PositiveNumber);
  synth->add_flag("--all", all, "solve every candidate, report all feasible ones");
  synth->add_flag("--dump-lp", dump_lp, "dump each feasibility system to stderr");
  synth->add_option("--out", out_file, "write the strategy to this file");

  CLI::App* validate = app.add_subcommand("validate", "Replay a strategy against all runs");
  validate->add_option("model", model_file, "model file")->required();
  validate->add_option("strategy", strategy_file, "strategy file")->required();

  CLI::App* check = app.add_subcommand("check-path", "Decide realizability of one path");
  check->add_option("model", model_file, "model file")->required();
  check->add_option("--path", path_text, "interleaved path 'l0 e1 l1 ...'")->required();
  check->add_flag("--dump-lp", dump_lp, "dump the feasibility system to stderr");

  CLI::App* simulate = app.add_subcommand("simulate", "Replay one closed-loop run");
  simulate->add_option("model", model_file, "model file")->required();
  simulate->add_option("strategy", strategy_file, "strategy file")->required();
  simulate->add_option("--resolve", resolve, "'first' or comma-separated successor indices");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : kInputError;
  }

  try {
    if (synth->parsed()) return cmd_synth(model_file, max_depth, all, dump_lp, out_file);
    if (validate->parsed()) return cmd_validate(model_file, strategy_file);
    if (check->parsed()) return cmd_check_path(model_file, path_text, dump_lp);
    if (simulate->parsed()) return cmd_simulate(model_file, strategy_file, resolve);
  } catch (const pta::ParseError& e) {
    std::fprintf(stderr, "%s:%d:%d: error: %s\n", model_file.c_str(), e.line, e.column, e.what());
    return kInputError;
  } catch (const pta::SemanticError& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kInputError;
  } catch (const pta::FormatError& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kInputError;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "internal error: %s\n", e.what());
    return kInputError;
  }
  return kInputError;
}
