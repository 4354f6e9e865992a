#include <CLI11.hpp>
#include <chrono>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "gpt/circuit.hpp"
#include "gpt/dsl/lower.hpp"
#include "gpt/dsl/parse.hpp"
#include "gpt/errors.hpp"
#include "checks.hpp"
#include "demos.hpp"
#include "report_io.hpp"
#include "run_config.hpp"

namespace {

using namespace gptk;

int finish(const RunConfig& cfg, const std::vector<ReportItem>& items) {
  std::cout << emit_report(cfg, items);
  for (const ReportItem& item : items) {
    if (item.verdict == "fails") return 1;
  }
  return 0;
}

RunConfig action_config(const RunConfig& base, const gpt::dsl::Action& action) {
  RunConfig cfg = base;
  for (const auto& [key, value] : action.args) {
    if (key == "seed") cfg.seed = static_cast<std::uint64_t>(value);
    else if (key == "samples") cfg.samples = static_cast<int>(value);
    else if (key == "tol") cfg.tolerance = value;
    else if (key == "max_env") cfg.max_env = static_cast<int>(value);
    else if (key == "max_partner") cfg.max_partner = static_cast<int>(value);
  }
  return cfg;
}

int run_eval(const RunConfig& cfg) {
  std::ifstream in(cfg.file);
  if (!in) {
    std::cerr << "gptk: cannot read '" << cfg.file << "'\n";
    return 2;
  }
  std::stringstream buffer;
  buffer << in.rdbuf();

  gpt::dsl::ParseResult parsed = gpt::dsl::parse(buffer.str());
  if (!parsed.ok()) {
    for (const auto& e : parsed.errors) {
      std::cerr << cfg.file << ':' << e.span.line << ':' << e.span.column << ": "
                << to_string(e.phase) << " error: " << e.message << '\n';
    }
    return 2;
  }
  gpt::dsl::LowerResult lowered = gpt::dsl::lower(parsed.program);
  if (!lowered.ok()) {
    for (const auto& e : lowered.errors) {
      std::cerr << cfg.file << ':' << e.span.line << ':' << e.span.column << ": "
                << to_string(e.phase) << " error: " << e.message << '\n';
    }
    return 2;
  }

  std::vector<ReportItem> items;
  for (const gpt::dsl::Action& action : lowered.program.actions) {
    if (action.kind == gpt::dsl::Action::Kind::Eval) {
      auto start = std::chrono::steady_clock::now();
      const gpt::Circuit& circuit = lowered.program.circuits.at(action.target);
      gpt::EvaluationResult result = gpt::evaluate(circuit);
      ReportItem item;
      item.kind = "eval";
      item.name = action.target;
      item.distribution = std::move(result.distribution);
      item.ms = elapsed_ms_since(start);
      items.push_back(std::move(item));
    } else {
      RunConfig local = action_config(cfg, action);
      ReportItem item;
      if (axiom_takes_system(action.axiom)) {
        item = run_check_on_system(action.axiom, lowered.program.systems.at(action.target),
                                   local);
      } else {
        item = run_check_on_state(action.axiom, lowered.program.states.at(action.target),
                                  local);
      }
      item.name = action.axiom + ":" + action.target;
      items.push_back(std::move(item));
    }
  }
  return finish(cfg, items);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"operational theory toolkit: circuit evaluation and axiom checks"};
  app.require_subcommand(1);

  RunConfig cfg;
  auto add_common = [&cfg](CLI::App* sub) {
    sub->add_option("--format", cfg.format, "output format")
        ->check(CLI::IsMember({"text", "json"}))
        ->capture_default_str();
    sub->add_option("--seed", cfg.seed, "sampling seed")->capture_default_str();
    sub->add_option("--samples", cfg.samples, "sample count for sampled checks")
        ->capture_default_str();
    sub->add_option("--tol", cfg.tolerance, "numeric tolerance")->capture_default_str();
    sub->add_option("--max-env", cfg.max_env, "environment search bound")
        ->capture_default_str();
    sub->add_option("--max-partner", cfg.max_partner, "partner system search bound")
        ->capture_default_str();
  };

  CLI::App* eval = app.add_subcommand("eval", "evaluate the eval/check statements of a file");
  eval->add_option("file", cfg.file, "program file")->required();
  add_common(eval);

  CLI::App* check = app.add_subcommand("check", "run one axiom check with canonical targets");
  check->add_option("axiom", cfg.axiom, "axiom name")
      ->required()
      ->check(CLI::IsMember({"causality", "purity-preservation", "purification",
                             "no-signalling", "no-cloning", "entanglement"}));
  check->add_option("--theory", cfg.theory, "theory model")
      ->required()
      ->check(CLI::IsMember({"classical", "quantum", "boxworld"}));
  check->add_option("--dim", cfg.dim, "leaf dimension")->capture_default_str();
  add_common(check);

  CLI::App* demo = app.add_subcommand("demo", "run a named demonstration");
  demo->add_option("name", cfg.demo, "demo name")
      ->required()
      ->check(CLI::IsMember({"singlet-purification", "classical-impossibility", "no-cloning",
                             "die-coarse-graining"}));
  add_common(demo);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    if (eval->parsed()) {
      cfg.command = "eval";
      return run_eval(cfg);
    }
    if (check->parsed()) {
      cfg.command = "check";
      return finish(cfg, run_check_cli(cfg));
    }
    cfg.command = "demo";
    return finish(cfg, run_demo(cfg));
  } catch (const gpt::Error& e) {
    std::cerr << "gptk: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "gptk: " << e.what() << '\n';
    return 2;
  }
}
