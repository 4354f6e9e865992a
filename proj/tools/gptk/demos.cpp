#include "demos.hpp"

#include <chrono>
#include <cmath>

#include "gpt/catalog.hpp"
#include "gpt/circuit.hpp"
#include "gpt/classical.hpp"
#include "gpt/cloning.hpp"
#include "gpt/compose.hpp"
#include "gpt/errors.hpp"
#include "gpt/purification.hpp"
#include "gpt/quantum.hpp"
#include "checks.hpp"
#include "report_io.hpp"

namespace gptk {
namespace {

using namespace gpt;

std::vector<ReportItem> singlet_purification(const RunConfig& cfg) {
  std::vector<ReportItem> items;
  auto start = std::chrono::steady_clock::now();

  SystemRef qubit = make_system(TheoryId::Quantum, Shape::leaf(2));
  State mixed = named_state(qubit, "maximally_mixed", {2});
  PurificationResult pur = purify_state(quantum_theory(), mixed, cfg.max_env);
  if (!pur.found) fail(ErrorKind::Internal, "qubit purification did not materialize");
  State marginal = marginalize(pur.pure_state, 0);

  // Computational-basis statistics of the recovered marginal: (1/2, 1/2).
  CMat p0 = CMat::Zero(2, 2), p1 = CMat::Zero(2, 2);
  p0(0, 0) = 1.0;
  p1(1, 1) = 1.0;
  OutcomeDistribution dist;
  dist.labels = {{"0"}, {"1"}};
  dist.probs = Vec(2);
  dist.probs << pairing(quantum::effect_from_operator(qubit, p0), marginal),
      pairing(quantum::effect_from_operator(qubit, p1), marginal);

  ReportItem m;
  m.kind = "demo";
  m.name = "singlet-marginal";
  m.distribution = std::move(dist);
  m.ms = elapsed_ms_since(start);
  items.push_back(std::move(m));

  auto start2 = std::chrono::steady_clock::now();
  ReportItem r;
  r.kind = "demo";
  r.name = "singlet-roundtrip";
  r.verdict = to_string(Verdict::Certified);
  r.deviation = (marginal.coords - mixed.coords).cwiseAbs().maxCoeff();
  std::vector<WitnessItem> witness;
  witness.push_back({"input", Transformation::from_state(mixed)});
  witness.push_back({"purification", Transformation::from_state(pur.pure_state)});
  r.witness = witness_program(witness);
  r.ms = elapsed_ms_since(start2);
  items.push_back(std::move(r));
  return items;
}

std::vector<ReportItem> classical_impossibility(const RunConfig& cfg) {
  std::vector<ReportItem> items;
  SystemRef bit = make_system(TheoryId::Classical, Shape::leaf(2));
  State uniform = named_state(bit, "uniform", {2});

  auto start = std::chrono::steady_clock::now();
  PurificationResult pur = purify_state(classical_theory(), uniform, cfg.max_env);
  ReportItem p;
  p.kind = "demo";
  p.name = "uniform-bit-purification";
  p.verdict = to_string(pur.found ? Verdict::Certified : Verdict::Impossible);
  p.deviation = 0.0;
  p.ms = elapsed_ms_since(start);
  items.push_back(std::move(p));

  Mat coin(2, 2);
  coin << 0.5, 0.5, 0.5, 0.5;
  Transformation flip{bit, bit, coin};

  auto start2 = std::chrono::steady_clock::now();
  items.push_back(item_from_check(classical_dilation_search(flip, cfg.max_env, false), "demo",
                                  "coin-dilation-pure-env"));
  items.back().ms = elapsed_ms_since(start2);

  auto start3 = std::chrono::steady_clock::now();
  items.push_back(item_from_check(classical_dilation_search(flip, cfg.max_env, true), "demo",
                                  "coin-dilation-mixed-env"));
  items.back().ms = elapsed_ms_since(start3);
  return items;
}

std::vector<ReportItem> no_cloning_demo(const RunConfig& cfg) {
  std::vector<ReportItem> items;

  auto start = std::chrono::steady_clock::now();
  SystemRef trit = make_system(TheoryId::Classical, Shape::leaf(3));
  CloningVerdict classical =
      no_cloning_check(classical_theory(), trit, default_cloning_probes(trit));
  items.push_back(item_from_check(classical.report, "demo", "classical-trit-cloner"));
  items.back().ms = elapsed_ms_since(start);

  auto start2 = std::chrono::steady_clock::now();
  SystemRef qubit = make_system(TheoryId::Quantum, Shape::leaf(2));
  CloningVerdict quantum_verdict =
      no_cloning_check(quantum_theory(), qubit, default_cloning_probes(qubit));
  items.push_back(item_from_check(quantum_verdict.report, "demo", "quantum-qubit-cloner"));
  items.back().ms = elapsed_ms_since(start2);
  (void)cfg;
  return items;
}

std::vector<ReportItem> die_coarse_graining(const RunConfig&) {
  auto start = std::chrono::steady_clock::now();
  SystemRef die_sys = make_system(TheoryId::Classical, Shape::leaf(6));
  State die = named_state(die_sys, "uniform", {6});
  // Faces are 1..6; "odd" collects outcome indices 0, 2, 4.
  Vec odd = Vec::Zero(6);
  odd(0) = odd(2) = odd(4) = 1.0;
  Effect odd_effect{die_sys, odd};
  Effect rest{die_sys, deterministic_effect(die_sys).coords - odd};

  Test prep;
  prep.input = classical_theory().trivial_system();
  prep.output = die_sys;
  prep.branches = {Transformation::from_state(die)};
  prep.labels = {"0"};
  Test obs;
  obs.input = die_sys;
  obs.output = classical_theory().trivial_system();
  obs.branches = {Transformation::from_effect(odd_effect), Transformation::from_effect(rest)};
  obs.labels = {"odd", "even"};

  std::vector<CircuitNode> nodes;
  nodes.push_back(CircuitNode{"die", std::move(prep)});
  nodes.push_back(CircuitNode{"odd", std::move(obs)});
  Circuit circuit = build(std::move(nodes), {{0, 0, 1, 0}});
  EvaluationResult result = evaluate(circuit);

  ReportItem item;
  item.kind = "demo";
  item.name = "die-odd-probability";
  item.distribution = result.distribution;
  item.ms = elapsed_ms_since(start);
  return {std::move(item)};
}

}  // namespace

std::vector<ReportItem> run_demo(const RunConfig& cfg) {
  if (cfg.demo == "singlet-purification") return singlet_purification(cfg);
  if (cfg.demo == "classical-impossibility") return classical_impossibility(cfg);
  if (cfg.demo == "no-cloning") return no_cloning_demo(cfg);
  if (cfg.demo == "die-coarse-graining") return die_coarse_graining(cfg);
  fail(ErrorKind::UnknownDemo, "unknown demo '" + cfg.demo + "'");
}

}  // namespace gptk
