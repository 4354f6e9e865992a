#include "gpt/cloning.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <string>
#include <utility>
#include <vector>

#include "gpt/boxworld.hpp"
#include "gpt/compose.hpp"
#include "gpt/errors.hpp"
#include "gpt/purity.hpp"
#include "gpt/quantum.hpp"

namespace gpt {

namespace {

State blank_state(const TheoryModel& model, const SystemRef& sys) {
  switch (model.id()) {
    case TheoryId::Classical: {
      Vec coords = Vec::Zero(sys.rep_dim());
      coords(0) = 1.0;
      return State{sys, coords};
    }
    case TheoryId::Quantum: {
      CVec amp = CVec::Zero(quantum::hilbert_dim(sys));
      amp(0) = 1.0;
      return quantum::pure_state(sys, amp);
    }
    case TheoryId::Boxworld:
      return State{sys, boxworld::gbit_vertices().front()};
  }
  fail(ErrorKind::Internal, "unhandled theory");
}

CVec pure_amplitudes(const State& state) {
  Eigen::SelfAdjointEigenSolver<CMat> solver(quantum::density_matrix(state));
  const Eigen::Index last = solver.eigenvalues().size() - 1;
  CVec psi = solver.eigenvectors().col(last);
  Eigen::Index pivot = 0;
  psi.cwiseAbs().maxCoeff(&pivot);
  psi *= std::polar(1.0, -std::arg(psi(pivot)));
  return psi;
}

// Measure-and-prepare channel sum_j tau_j eps_j^T; the effects must sum to
// the unit so the result is deterministic.
Transformation measure_prepare(const SystemRef& in, const SystemRef& out,
                               const std::vector<Effect>& effects,
                               const std::vector<State>& targets) {
  Mat m = Mat::Zero(out.rep_dim(), in.rep_dim());
  for (std::size_t j = 0; j < effects.size(); ++j)
    m += targets[j].coords * effects[j].coords.transpose();
  return Transformation{in, out, m};
}

double clone_residual(const Transformation& cloner, const std::vector<State>& inputs,
                      const std::vector<State>& outputs) {
  double worst = 0.0;
  for (std::size_t i = 0; i < inputs.size(); ++i)
    worst = std::max(worst,
                     (cloner.apply(inputs[i]).coords - outputs[i].coords).cwiseAbs().maxCoeff());
  return worst;
}

CloningVerdict found_cloner(CloningVerdict verdict, const Transformation& cloner,
                            const std::vector<State>& inputs, const std::vector<State>& outputs,
                            const std::string& note) {
  verdict.cloner_exists = true;
  verdict.cloner = cloner;
  verdict.report.verdict = Verdict::Certified;
  verdict.report.deviation = clone_residual(cloner, inputs, outputs);
  verdict.report.note = note;
  verdict.report.witness.push_back({"cloner", cloner});
  return verdict;
}

// Universal classical copier on the composite: input pair (j, k) maps to
// (j, j). Exact on point masses, column-stochastic by construction.
Transformation classical_copier(const SystemRef& joint, int d) {
  Mat m = Mat::Zero(static_cast<Eigen::Index>(d) * d, static_cast<Eigen::Index>(d) * d);
  for (int j = 0; j < d; ++j)
    for (int k = 0; k < d; ++k)
      m(static_cast<Eigen::Index>(j) * d + j, static_cast<Eigen::Index>(j) * d + k) = 1.0;
  return Transformation{joint, joint, m};
}

struct PositivityRows {
  std::vector<Effect> effects;  // discriminating effects on the composite
  std::vector<State> frames;    // valid composite states probing positivity
};

// Output-side discriminators (positive-part projectors of output
// differences) and input-side frames (spectral states of system
// differences, tensored with the blank). Any valid cloner must keep every
// effect value on every frame state inside [0, 1]; the LP only sees these
// necessary linear facts, which already separate non-orthogonal probes.
PositivityRows quantum_rows(const SystemRef& joint, const std::vector<State>& probes,
                            const std::vector<State>& outputs, const State& blank) {
  PositivityRows rows;
  const SystemRef& sys = probes.front().system;
  for (std::size_t i = 0; i < probes.size(); ++i)
    for (std::size_t j = i + 1; j < probes.size(); ++j) {
      const CMat out_diff =
          quantum::density_matrix(outputs[i]) - quantum::density_matrix(outputs[j]);
      Eigen::SelfAdjointEigenSolver<CMat> out_solver(out_diff);
      CMat projector = CMat::Zero(out_diff.rows(), out_diff.cols());
      for (Eigen::Index e = 0; e < out_solver.eigenvalues().size(); ++e)
        if (out_solver.eigenvalues()(e) > 1e-12)
          projector +=
              out_solver.eigenvectors().col(e) * out_solver.eigenvectors().col(e).adjoint();
      rows.effects.push_back(quantum::effect_from_operator(joint, projector));

      const CMat sys_diff =
          quantum::density_matrix(probes[i]) - quantum::density_matrix(probes[j]);
      Eigen::SelfAdjointEigenSolver<CMat> in_solver(sys_diff);
      for (Eigen::Index e = 0; e < in_solver.eigenvalues().size(); ++e) {
        if (std::abs(in_solver.eigenvalues()(e)) < 1e-12) continue;
        const CVec v = in_solver.eigenvectors().col(e);
        const State w = quantum::state_from_density(sys, v * v.adjoint());
        rows.frames.push_back(parallel_compose(w, blank));
      }
    }
  return rows;
}

// Boxworld analogue over the enumerable extreme structure: product extreme
// effects as discriminators; frames from shifted-center decompositions of
// the probe differences.
PositivityRows boxworld_rows(const SystemRef& joint, const std::vector<State>& probes,
                             const State& blank) {
  PositivityRows rows;
  const SystemRef& sys = probes.front().system;
  for (const Vec& e : boxworld::gbit_extreme_effects())
    for (const Vec& f : boxworld::gbit_extreme_effects())
      rows.effects.push_back(Effect{joint, linalg::kron(e, f)});
  const Vec center = (Vec(3) << 0.0, 0.0, 1.0).finished();
  for (std::size_t i = 0; i < probes.size(); ++i)
    for (std::size_t j = i + 1; j < probes.size(); ++j) {
      const Vec diff = probes[i].coords - probes[j].coords;
      const double scale = 4.0 * diff.cwiseAbs().maxCoeff();
      if (scale < 1e-12) continue;
      rows.frames.push_back(parallel_compose(State{sys, center + diff / scale}, blank));
      rows.frames.push_back(parallel_compose(State{sys, center - diff / scale}, blank));
    }
  return rows;
}

struct ClonerLp {
  lp::Problem problem;
  int dim = 0;  // composite representation dimension; matrix is dim x dim
};

// Variables are the cloner matrix entries T(r, c), row-major. Equalities pin
// the probe images and unit preservation; inequalities are the positivity
// rows 0 <= e . (T x) <= 1 (the upper bound via the complement effect).
ClonerLp build_cloner_lp(const SystemRef& joint, const std::vector<State>& inputs,
                         const std::vector<State>& outputs, const Vec& unit,
                         const PositivityRows& rows) {
  ClonerLp built;
  built.dim = static_cast<int>(unit.size());
  const int dim = built.dim;
  lp::Problem& problem = built.problem;
  problem = lp::Problem::feasibility(dim * dim);

  auto pairing_row = [dim](const Vec& effect, const Vec& state) {
    Vec row = Vec::Zero(static_cast<Eigen::Index>(dim) * dim);
    for (int r = 0; r < dim; ++r)
      for (int c = 0; c < dim; ++c)
        row(static_cast<Eigen::Index>(r) * dim + c) = effect(r) * state(c);
    return row;
  };

  for (std::size_t i = 0; i < inputs.size(); ++i)
    for (int r = 0; r < dim; ++r) {
      Vec row = Vec::Zero(static_cast<Eigen::Index>(dim) * dim);
      for (int c = 0; c < dim; ++c) row(static_cast<Eigen::Index>(r) * dim + c) = inputs[i].coords(c);
      problem.add_eq(row, outputs[i].coords(r));
    }
  for (int c = 0; c < dim; ++c) {
    Vec row = Vec::Zero(static_cast<Eigen::Index>(dim) * dim);
    for (int r = 0; r < dim; ++r) row(static_cast<Eigen::Index>(r) * dim + c) = unit(r);
    problem.add_eq(row, unit(c));
  }
  for (const State& x : rows.frames)
    for (const Effect& e : rows.effects) {
      problem.add_ge(pairing_row(e.coords, x.coords), 0.0);
      problem.add_ge(pairing_row(unit - e.coords, x.coords), 0.0);
    }
  return built;
}

}  // namespace

CloningVerdict no_cloning_check(const TheoryModel& model, const SystemRef& system,
                                const std::vector<State>& probes) {
  if (probes.empty()) fail(ErrorKind::TooFewProbes, "no probe states given");
  if (model.id() == TheoryId::Boxworld && system.shape() != Shape::gbit())
    fail(ErrorKind::BadShape, "boxworld cloning supports a single gbit");
  for (const State& probe : probes) {
    if (probe.system != system)
      fail(ErrorKind::TypeMismatch, "probe does not live on the cloning system");
    if (!is_pure_state(model, probe).pure)
      fail(ErrorKind::ProbeNotPure, "cloning probes must be pure");
  }

  // Distinctness is part of the problem statement; duplicates collapse.
  std::vector<State> distinct;
  for (const State& probe : probes) {
    bool known = false;
    for (const State& seen : distinct)
      known = known || (seen.coords - probe.coords).cwiseAbs().maxCoeff() <= 1e-9;
    if (!known) distinct.push_back(probe);
  }

  const SystemRef joint = compose_systems(system, system);
  const State blank = blank_state(model, system);
  std::vector<State> inputs;
  std::vector<State> outputs;
  for (const State& probe : distinct) {
    inputs.push_back(parallel_compose(probe, blank));
    outputs.push_back(parallel_compose(probe, probe));
  }

  CloningVerdict verdict;
  verdict.report.axiom = "no-cloning";
  verdict.report.theory = model.id();
  verdict.report.samples = static_cast<int>(distinct.size());
  verdict.report.tolerance = kLpTol;
  for (const State& probe : distinct)
    verdict.report.witness.push_back({"probe", Transformation::from_state(probe)});

  if (distinct.size() == 1) {
    // Single-state cloning is prepare-and-replace.
    const Transformation cloner{joint, joint,
                                outputs.front().coords * model.unit_coords(joint).transpose()};
    return found_cloner(std::move(verdict), cloner, inputs, outputs,
                        "single probe: prepare-and-replace cloner");
  }

  if (model.id() == TheoryId::Classical) {
    const Transformation cloner = classical_copier(joint, system.rep_dim());
    return found_cloner(std::move(verdict), cloner, inputs, outputs,
                        "universal classical copy of point masses");
  }

  if (model.id() == TheoryId::Quantum) {
    // Pairwise orthogonal probes are jointly distinguishable; measure and
    // re-prepare the doubled state.
    std::vector<CVec> amps;
    for (const State& probe : distinct) amps.push_back(pure_amplitudes(probe));
    bool orthogonal = true;
    for (std::size_t i = 0; i < amps.size() && orthogonal; ++i)
      for (std::size_t j = i + 1; j < amps.size(); ++j)
        orthogonal = orthogonal && std::abs(amps[i].dot(amps[j])) <= 1e-7;
    if (orthogonal) {
      const int d = quantum::hilbert_dim(system);
      std::vector<CVec> basis = amps;
      for (int k = 0; k < d && static_cast<int>(basis.size()) < d; ++k) {
        CVec cand = CVec::Zero(d);
        cand(k) = 1.0;
        for (const CVec& b : basis) cand -= b.dot(cand) * b;
        if (cand.norm() > 1e-7) basis.push_back(cand.normalized());
      }
      std::vector<Effect> effects;
      std::vector<State> targets;
      const CMat eye = CMat::Identity(d, d);
      for (std::size_t j = 0; j < basis.size(); ++j) {
        const CMat projector = basis[j] * basis[j].adjoint();
        effects.push_back(quantum::effect_from_operator(joint, linalg::kron(projector, eye)));
        const CVec target = j < distinct.size() ? linalg::kron(CMat(amps[j]), CMat(amps[j])).col(0)
                                                : linalg::kron(CMat(basis[j]), CMat(basis[j])).col(0);
        targets.push_back(quantum::pure_state(joint, target));
      }
      const Transformation cloner = measure_prepare(joint, joint, effects, targets);
      return found_cloner(std::move(verdict), cloner, inputs, outputs,
                          "orthogonal probes: measure-and-prepare cloner");
    }
  }

  if (model.id() == TheoryId::Boxworld && distinct.size() == 2) {
    // Two distinct gbit vertices are perfectly distinguishable by an
    // extreme effect; measure and re-prepare.
    const Vec unit = model.unit_coords(system);
    for (const Vec& e : boxworld::gbit_extreme_effects()) {
      const double on_first = e.dot(distinct[0].coords);
      const double on_second = e.dot(distinct[1].coords);
      if (on_first > 1.0 - 1e-9 && on_second < 1e-9) {
        std::vector<Effect> effects{
            Effect{joint, linalg::kron(e, unit)},
            Effect{joint, linalg::kron(Vec(unit - e), unit)}};
        std::vector<State> targets{outputs[0], outputs[1]};
        const Transformation cloner = measure_prepare(joint, joint, effects, targets);
        return found_cloner(std::move(verdict), cloner, inputs, outputs,
                            "distinguishable probes: measure-and-prepare cloner");
      }
    }
  }

  // LP over the cloner entries with necessary positivity rows; cut rounds
  // add violated rows when the relaxation returns an invalid map.
  const Vec unit = model.unit_coords(joint);
  PositivityRows rows = model.id() == TheoryId::Quantum
                            ? quantum_rows(joint, distinct, outputs, blank)
                            : boxworld_rows(joint, distinct, blank);
  Rng rng(1234);
  verdict.report.seed = 1234;
  for (int round = 0; round < 50; ++round) {
    ClonerLp built = build_cloner_lp(joint, inputs, outputs, unit, rows);
    const lp::Solution solution = lp::solve(built.problem);
    if (solution.status == lp::Status::Infeasible) {
      verdict.cloner_exists = false;
      verdict.certificate.problem = built.problem;
      verdict.certificate.y_eq = solution.farkas_eq;
      verdict.certificate.y_ge = solution.farkas_ge;
      verdict.certificate.margin =
          lp::farkas_margin(built.problem, solution.farkas_eq, solution.farkas_ge);
      verdict.report.verdict = Verdict::Impossible;
      verdict.report.deviation = verdict.certificate.margin;
      verdict.report.note = "cloning constraints infeasible; Farkas certificate attached";
      if (verdict.certificate.margin <= 0.0)
        fail(ErrorKind::Internal, "infeasibility certificate failed re-validation");
      return verdict;
    }
    if (solution.status != lp::Status::Optimal)
      fail(ErrorKind::Internal, "cloning LP neither solved nor separated");

    Mat m(built.dim, built.dim);
    for (int r = 0; r < built.dim; ++r)
      for (int c = 0; c < built.dim; ++c)
        m(r, c) = solution.x(static_cast<Eigen::Index>(r) * built.dim + c);
    const Transformation candidate{joint, joint, m};
    if (model.valid_transformation(candidate, 1e-7) &&
        clone_residual(candidate, inputs, outputs) <= 1e-7)
      return found_cloner(std::move(verdict), candidate, inputs, outputs,
                          "LP produced a valid cloner");

    // Separate: sample pure states and extreme-ish effects, keep violated
    // rows for the next round.
    int added = 0;
    for (int trial = 0; trial < 400 && added < 24; ++trial) {
      const State x = model.random_state(joint, rng, true);
      Effect e{joint, Vec()};
      if (model.id() == TheoryId::Quantum) {
        const CVec v = quantum::random_pure_vector(quantum::hilbert_dim(joint), rng);
        e = quantum::effect_from_operator(joint, v * v.adjoint());
      } else {
        const auto& extremes = boxworld::gbit_extreme_effects();
        const Vec& a = extremes[rng() % extremes.size()];
        const Vec& b = extremes[rng() % extremes.size()];
        e = Effect{joint, linalg::kron(a, b)};
      }
      const double low = e.coords.dot(m * x.coords);
      const double high = (unit - e.coords).dot(m * x.coords);
      if (low < -1e-10 || high < -1e-10) {
        rows.effects.push_back(e);
        rows.frames.push_back(x);
        ++added;
      }
    }
    if (added == 0) {
      verdict.cloner_exists = false;
      verdict.report.verdict = Verdict::HoldsOnSamples;
      verdict.report.note =
          "LP relaxation stayed feasible but produced no valid cloner; no separating row found";
      return verdict;
    }
  }
  verdict.cloner_exists = false;
  verdict.report.verdict = Verdict::HoldsOnSamples;
  verdict.report.note = "cut budget exhausted without a valid cloner or a certificate";
  return verdict;
}

}  // namespace gpt
