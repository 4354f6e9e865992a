#include "checks.hpp"

#include <algorithm>
#include <cmath>

#include "gpt/boxworld.hpp"
#include "gpt/catalog.hpp"
#include "gpt/causality.hpp"
#include "gpt/cloning.hpp"
#include "gpt/compose.hpp"
#include "gpt/entanglement.hpp"
#include "gpt/errors.hpp"
#include "gpt/purification.hpp"
#include "gpt/purity.hpp"
#include "gpt/quantum.hpp"
#include "gpt/report.hpp"
#include "report_io.hpp"

namespace gptk {

using namespace gpt;

double elapsed_ms_since(const std::chrono::steady_clock::time_point& start) {
  auto end = std::chrono::steady_clock::now();
  return std::chrono::duration<double, std::milli>(end - start).count();
}

std::string underscored(std::string axiom) {
  std::replace(axiom.begin(), axiom.end(), '-', '_');
  return axiom;
}

bool axiom_takes_system(const std::string& axiom_us) {
  return axiom_us == "causality" || axiom_us == "purity_preservation" ||
         axiom_us == "no_cloning" || axiom_us == "entanglement";
}

std::vector<State> default_cloning_probes(const SystemRef& sys) {
  const TheoryModel& model = theory(sys.theory());
  std::vector<State> probes;
  switch (sys.theory()) {
    case TheoryId::Classical: {
      for (const Vec& v : model.pure_state_vertices(sys)) probes.push_back(State{sys, v});
      break;
    }
    case TheoryId::Quantum: {
      int d = quantum::hilbert_dim(sys);
      CVec zero = CVec::Zero(d);
      zero(0) = 1.0;
      probes.push_back(quantum::pure_state(sys, zero));
      if (d >= 2) {
        CVec plus = CVec::Zero(d);
        plus(0) = plus(1) = 1.0 / std::sqrt(2.0);
        probes.push_back(quantum::pure_state(sys, plus));
      }
      break;
    }
    case TheoryId::Boxworld: {
      const auto& verts = model.pure_state_vertices(sys);
      for (std::size_t k = 0; k < verts.size() && k < 3; ++k) {
        probes.push_back(State{sys, verts[k]});
      }
      break;
    }
  }
  return probes;
}

State default_bipartite_state(TheoryId id, int dim) {
  const TheoryModel& model = theory(id);
  switch (id) {
    case TheoryId::Quantum: {
      SystemRef q = make_system(id, Shape::leaf(dim));
      SystemRef qq = compose_systems(q, q);
      if (dim == 2) return named_state(qq, "singlet", {});
      CVec psi = CVec::Zero(dim * dim);
      for (int i = 0; i < dim; ++i) psi(i * dim + i) = 1.0 / std::sqrt(double(dim));
      return quantum::pure_state(qq, psi);
    }
    case TheoryId::Classical: {
      SystemRef c = make_system(id, Shape::leaf(dim));
      SystemRef cc = compose_systems(c, c);
      Vec coords = Vec::Zero(dim * dim);
      for (int i = 0; i < dim; ++i) coords(i * dim + i) = 1.0 / dim;
      return State{cc, coords};
    }
    case TheoryId::Boxworld: {
      SystemRef g = make_system(id, Shape::gbit());
      SystemRef gg = compose_systems(g, g);
      for (const Vec& v : boxworld::two_gbit_vertices()) {
        State candidate{gg, v};
        if (is_entangled_pure(model, candidate).entangled) return candidate;
      }
      fail(ErrorKind::Internal, "no entangled two-gbit vertex found");
    }
  }
  fail(ErrorKind::Internal, "unreachable theory id");
}

State default_mixed_state(TheoryId id, int dim) {
  switch (id) {
    case TheoryId::Classical: {
      SystemRef c = make_system(id, Shape::leaf(dim));
      return named_state(c, "uniform", {double(dim)});
    }
    case TheoryId::Quantum: {
      SystemRef q = make_system(id, Shape::leaf(dim));
      return named_state(q, "maximally_mixed", {double(dim)});
    }
    case TheoryId::Boxworld: {
      SystemRef g = make_system(id, Shape::gbit());
      return named_state(g, "gbit_center", {});
    }
  }
  fail(ErrorKind::Internal, "unreachable theory id");
}

namespace {

ReportItem purification_item(const TheoryModel& model, const State& state,
                             const RunConfig& cfg, const std::string& name) {
  PurificationResult result = purify_state(model, state, cfg.max_env);
  ReportItem item;
  item.kind = "check";
  item.name = name;
  if (result.found) {
    item.verdict = to_string(Verdict::Certified);
    if (result.environment.is_trivial()) {
      item.deviation = 0.0;
    } else {
      State marginal = marginalize(result.pure_state, 0);
      item.deviation = (marginal.coords - state.coords).cwiseAbs().maxCoeff();
    }
    std::vector<WitnessItem> witness;
    witness.push_back({"input", Transformation::from_state(state)});
    witness.push_back({"purification", Transformation::from_state(result.pure_state)});
    item.witness = witness_program(witness);
  } else {
    item.verdict = to_string(Verdict::Impossible);
    item.deviation = 0.0;
  }
  return item;
}

std::vector<SystemRef> bipartite_sides(const State& state) {
  const Shape& shape = state.system.shape();
  if (shape.is_leaf() || shape.parts.size() != 2) {
    fail(ErrorKind::TypeMismatch, "no-signalling needs a two-part composite state");
  }
  return {make_system(state.system.theory(), shape.parts[0]),
          make_system(state.system.theory(), shape.parts[1])};
}

}  // namespace

ReportItem run_check_on_system(const std::string& axiom_us, const SystemRef& sys,
                               const RunConfig& cfg) {
  const TheoryModel& model = theory(sys.theory());
  auto start = std::chrono::steady_clock::now();
  ReportItem item;
  if (axiom_us == "causality") {
    item = item_from_check(check_causality(model, sys, cfg.samples, cfg.seed, cfg.tolerance),
                           "check", axiom_us);
  } else if (axiom_us == "purity_preservation") {
    item = item_from_check(check_purity_preservation(model, cfg.samples, cfg.seed), "check",
                           axiom_us);
  } else if (axiom_us == "no_cloning") {
    CloningVerdict verdict = no_cloning_check(model, sys, default_cloning_probes(sys));
    item = item_from_check(verdict.report, "check", axiom_us);
  } else if (axiom_us == "entanglement") {
    item = item_from_check(entanglement_existence(model, sys, cfg.max_partner), "check",
                           axiom_us);
  } else {
    fail(ErrorKind::UnknownName, "unknown system-level axiom '" + axiom_us + "'");
  }
  item.ms = elapsed_ms_since(start);
  return item;
}

ReportItem run_check_on_state(const std::string& axiom_us, const State& state,
                              const RunConfig& cfg) {
  const TheoryModel& model = theory(state.system.theory());
  auto start = std::chrono::steady_clock::now();
  ReportItem item;
  if (axiom_us == "purification") {
    item = purification_item(model, state, cfg, axiom_us);
  } else if (axiom_us == "no_signalling") {
    std::vector<SystemRef> sides = bipartite_sides(state);
    item = item_from_check(
        check_no_signalling(model, state, model.fiducial_observation_tests(sides[0]),
                            model.fiducial_observation_tests(sides[1]), cfg.tolerance),
        "check", axiom_us);
  } else {
    fail(ErrorKind::UnknownName, "unknown state-level axiom '" + axiom_us + "'");
  }
  item.ms = elapsed_ms_since(start);
  return item;
}

std::vector<ReportItem> run_check_cli(const RunConfig& cfg) {
  std::string axiom_us = underscored(cfg.axiom);
  TheoryId id = theory_id_from_string(cfg.theory);
  std::vector<ReportItem> items;
  if (axiom_takes_system(axiom_us)) {
    Shape shape = id == TheoryId::Boxworld ? Shape::gbit() : Shape::leaf(cfg.dim);
    if (id == TheoryId::Boxworld && cfg.dim != 2) {
      fail(ErrorKind::BadShape, "boxworld systems are gbits; use --dim 2");
    }
    items.push_back(run_check_on_system(axiom_us, make_system(id, shape), cfg));
  } else if (axiom_us == "purification") {
    items.push_back(run_check_on_state(axiom_us, default_mixed_state(id, cfg.dim), cfg));
  } else if (axiom_us == "no_signalling") {
    items.push_back(run_check_on_state(axiom_us, default_bipartite_state(id, cfg.dim), cfg));
  } else {
    fail(ErrorKind::UnknownName, "unknown axiom '" + cfg.axiom + "'");
  }
  return items;
}

}  // namespace gptk
