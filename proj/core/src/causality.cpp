#include "gpt/causality.hpp"

#include <algorithm>
#include <cmath>

#include "gpt/compose.hpp"
#include "gpt/errors.hpp"

namespace gpt {
namespace {

// Marginal distribution of the preparation outcome when `downstream` (any
// full test) is performed afterwards and all of its outcomes are summed.
Vec preparation_marginal(const TheoryModel& model, const Test& prep, const Test& downstream) {
  Transformation total = coarse_grain(downstream.branches);
  Vec unit = model.unit_coords(downstream.output);
  Vec marginal(static_cast<Eigen::Index>(prep.arity()));
  for (size_t i = 0; i < prep.arity(); ++i) {
    State out = prep.branches[i].as_state();
    marginal(static_cast<Eigen::Index>(i)) = unit.dot(total.matrix * out.coords);
  }
  return marginal;
}

}  // namespace

CheckReport check_causality(const TheoryModel& model, const SystemRef& sys, int n_samples,
                            std::uint64_t seed, double tol) {
  CheckReport report;
  report.axiom = "causality";
  report.theory = model.id();
  report.samples = n_samples;
  report.seed = seed;
  report.tolerance = tol;

  Rng rng(seed);
  SystemRef trivial = model.trivial_system();
  double worst = 0.0;
  for (int i = 0; i < n_samples; ++i) {
    Test prep = model.random_test(trivial, sys, 2 + static_cast<int>(rng() % 2), rng);
    Test alt_a = model.random_test(sys, sys, 2, rng);
    Test alt_b = model.random_test(sys, trivial, 3, rng);
    Vec ma = preparation_marginal(model, prep, alt_a);
    Vec mb = preparation_marginal(model, prep, alt_b);
    double dev = (ma - mb).lpNorm<Eigen::Infinity>();
    worst = std::max(worst, dev);
    if (dev > tol) {
      report.verdict = Verdict::Fails;
      report.samples = i + 1;
      report.deviation = dev;
      report.note = "preparation marginal depends on the downstream test";
      for (size_t b = 0; b < prep.arity(); ++b)
        report.witness.push_back(WitnessItem{"prep_" + prep.labels[b], prep.branches[b]});
      report.witness.push_back(
          WitnessItem{"downstream_a_total", coarse_grain(alt_a.branches)});
      report.witness.push_back(
          WitnessItem{"downstream_b_total", coarse_grain(alt_b.branches)});
      return report;
    }

    // Uniqueness of the deterministic effect: every full observation-test
    // coarse-grains to the canonical discard.
    Test obs = model.random_test(sys, trivial, 2 + static_cast<int>(rng() % 3), rng);
    Effect total = coarse_grain(obs.branches).as_effect();
    Vec unit = model.unit_coords(sys);
    double eff_dev = (total.coords - unit).lpNorm<Eigen::Infinity>();
    worst = std::max(worst, eff_dev);
    if (eff_dev > tol) {
      report.verdict = Verdict::Fails;
      report.samples = i + 1;
      report.deviation = eff_dev;
      report.note = "a second deterministic effect exists";
      report.witness.push_back(
          WitnessItem{"canonical_discard", Transformation::from_effect(Effect{sys, unit})});
      report.witness.push_back(
          WitnessItem{"other_discard", Transformation::from_effect(total)});
      return report;
    }
  }
  report.verdict = Verdict::HoldsOnSamples;
  report.deviation = worst;
  return report;
}

CheckReport check_no_signalling(const TheoryModel& model, const State& state_ab,
                                const std::vector<Test>& tests_a,
                                const std::vector<Test>& tests_b, double tol) {
  CheckReport report;
  report.axiom = "no-signalling";
  report.theory = model.id();
  report.tolerance = tol;

  const Shape& shape = state_ab.system.shape();
  if (shape.is_leaf() || shape.parts.size() != 2)
    fail(ErrorKind::TypeMismatch, "no-signalling needs a two-component state");
  if (tests_a.empty() || tests_b.empty())
    fail(ErrorKind::TypeMismatch, "need at least one test per party");
  SystemRef sys_a = model.system(shape.parts[0]);
  SystemRef sys_b = model.system(shape.parts[1]);
  for (const Test& t : tests_a)
    if (!(t.input == sys_a) || !t.output.is_trivial())
      fail(ErrorKind::TypeMismatch, "party A test does not observe " + sys_a.str());
  for (const Test& t : tests_b)
    if (!(t.input == sys_b) || !t.output.is_trivial())
      fail(ErrorKind::TypeMismatch, "party B test does not observe " + sys_b.str());

  // joint[x][y] has entries p(i, j | x, y)
  std::vector<std::vector<Mat>> joint(tests_a.size(), std::vector<Mat>(tests_b.size()));
  for (size_t x = 0; x < tests_a.size(); ++x) {
    for (size_t y = 0; y < tests_b.size(); ++y) {
      Mat p(static_cast<Eigen::Index>(tests_a[x].arity()),
            static_cast<Eigen::Index>(tests_b[y].arity()));
      for (size_t i = 0; i < tests_a[x].arity(); ++i)
        for (size_t j = 0; j < tests_b[y].arity(); ++j) {
          Effect e = parallel_compose(tests_a[x].branches[i].as_effect(),
                                      tests_b[y].branches[j].as_effect());
          p(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = pairing(e, state_ab);
        }
      joint[x][y] = p;
    }
  }

  double worst = 0.0;
  for (size_t x = 0; x < tests_a.size(); ++x) {
    Vec reference = joint[x][0].rowwise().sum();
    for (size_t y = 1; y < tests_b.size(); ++y)
      worst = std::max(worst, (joint[x][y].rowwise().sum() - reference).lpNorm<Eigen::Infinity>());
  }
  for (size_t y = 0; y < tests_b.size(); ++y) {
    Vec reference = joint[0][y].colwise().sum().transpose();
    for (size_t x = 1; x < tests_a.size(); ++x)
      worst = std::max(
          worst,
          (joint[x][y].colwise().sum().transpose() - reference).lpNorm<Eigen::Infinity>());
  }

  report.deviation = worst;
  if (worst > tol) {
    report.verdict = Verdict::Fails;
    report.note = "a marginal shifts with the remote test choice";
    report.witness.push_back(WitnessItem{"state", Transformation::from_state(state_ab)});
    return report;
  }
  report.verdict = Verdict::HoldsOnSamples;
  report.samples = static_cast<int>(tests_a.size() * tests_b.size());
  return report;
}

}  // namespace gpt
