#include "gpt/purity.hpp"

#include <cmath>

#include "gpt/boxworld.hpp"
#include "gpt/compose.hpp"
#include "gpt/errors.hpp"
#include "gpt/polytope.hpp"
#include "gpt/quantum.hpp"

namespace gpt {
namespace {

PurityResult quantum_state_purity(const State& state) {
  PurityResult r;
  CMat rho = quantum::density_matrix(state);
  Eigen::SelfAdjointEigenSolver<CMat> eig(rho);
  const Vec& lam = eig.eigenvalues();
  int d = static_cast<int>(lam.size());
  double top = lam(d - 1);
  double second = d > 1 ? lam(d - 2) : 0.0;
  r.pure = second < kRankTol * top;
  if (r.pure) return r;
  for (int i = d - 1; i >= 0; --i) {
    if (lam(i) < kRankTol * top) break;
    CVec psi = eig.eigenvectors().col(i);
    r.weights.push_back(lam(i));
    r.components.push_back(quantum::state_from_density(state.system, psi * psi.adjoint()));
  }
  return r;
}

PurityResult vertex_state_purity(const TheoryModel& model, const State& state) {
  PurityResult r;
  const std::vector<Vec> vertices = model.pure_state_vertices(state.system);
  double scale = 1.0 + state.coords.lpNorm<Eigen::Infinity>();
  for (const Vec& v : vertices) {
    if ((state.coords - v).lpNorm<Eigen::Infinity>() <= kRankTol * scale) {
      r.pure = true;
      return r;
    }
  }
  auto combo = polytope::convex_combination(vertices, state.coords, -1, kLpTol);
  if (!combo)
    fail(ErrorKind::Internal, "normalized state admits no vertex decomposition");
  for (int j = 0; j < combo->size(); ++j) {
    if ((*combo)(j) <= kLpTol) continue;
    r.weights.push_back((*combo)(j));
    r.components.push_back(State{state.system, vertices[static_cast<size_t>(j)]});
  }
  return r;
}

// Rows of the boxworld valid-map cone: one per (output product effect,
// input vertex) pair, over column-major vec(M).
Mat boxworld_map_cone(const Transformation& t) {
  Mat effects = boxworld::product_effect_rows(t.output.shape());
  const TheoryModel& model = theory(TheoryId::Boxworld);
  std::vector<Vec> vertices = model.pure_state_vertices(t.input);
  int rows_out = static_cast<int>(t.matrix.rows());
  int cols_in = static_cast<int>(t.matrix.cols());
  Mat g(effects.rows() * static_cast<Eigen::Index>(vertices.size()), rows_out * cols_in);
  Eigen::Index row = 0;
  for (Eigen::Index e = 0; e < effects.rows(); ++e) {
    for (const Vec& v : vertices) {
      for (int c = 0; c < cols_in; ++c)
        for (int r = 0; r < rows_out; ++r) g(row, c * rows_out + r) = effects(e, r) * v(c);
      ++row;
    }
  }
  return g;
}

bool extreme_by_active_rank(const Mat& cone_rows, const Vec& x) {
  Vec gx = cone_rows * x;
  double act_tol = 1e-8 * (1.0 + x.lpNorm<Eigen::Infinity>());
  std::vector<Eigen::Index> active;
  for (Eigen::Index i = 0; i < gx.size(); ++i)
    if (std::abs(gx(i)) <= act_tol) active.push_back(i);
  if (active.empty()) return false;
  Mat sub(static_cast<Eigen::Index>(active.size()), cone_rows.cols());
  for (size_t i = 0; i < active.size(); ++i)
    sub.row(static_cast<Eigen::Index>(i)) = cone_rows.row(active[i]);
  Eigen::ColPivHouseholderQR<Mat> qr(sub);
  qr.setThreshold(1e-9);
  // The face through x spans the null space of the active rows; a ray needs
  // corank exactly one.
  return static_cast<int>(qr.rank()) == static_cast<int>(cone_rows.cols()) - 1;
}

}  // namespace

PurityResult is_pure_state(const TheoryModel& model, const State& state) {
  if (!model.valid_state(state) || !state.is_normalized(1e-7))
    fail(ErrorKind::InvalidState, "purity check needs a valid normalized state");
  switch (model.id()) {
    case TheoryId::Quantum: return quantum_state_purity(state);
    case TheoryId::Classical:
    case TheoryId::Boxworld: return vertex_state_purity(model, state);
  }
  fail(ErrorKind::Internal, "unknown theory");
}

bool is_pure_transformation(const TheoryModel& model, const Transformation& t) {
  if (!model.valid_transformation(t))
    fail(ErrorKind::InvalidTransformation, "purity check needs a valid transformation");
  double scale = t.matrix.cwiseAbs().maxCoeff();
  if (scale <= 1e-12) return true;  // apex of the cone: only trivial refinements

  switch (model.id()) {
    case TheoryId::Quantum: {
      CMat choi = quantum::choi_matrix(t);
      Eigen::SelfAdjointEigenSolver<CMat> eig(choi);
      const Vec& lam = eig.eigenvalues();
      int n = static_cast<int>(lam.size());
      double top = lam(n - 1);
      double second = n > 1 ? std::abs(lam(n - 2)) : 0.0;
      return second < kRankTol * top;
    }
    case TheoryId::Classical: {
      int nonzero = 0;
      for (Eigen::Index r = 0; r < t.matrix.rows(); ++r)
        for (Eigen::Index c = 0; c < t.matrix.cols(); ++c)
          if (std::abs(t.matrix(r, c)) > kRankTol * scale) ++nonzero;
      return nonzero == 1;
    }
    case TheoryId::Boxworld: {
      Mat cone = boxworld_map_cone(t);
      Vec x = t.matrix.reshaped();
      bool by_rank = extreme_by_active_rank(cone, x);
      if (x.size() <= 9) {
        bool by_lp = polytope::is_extreme_ray(cone, x, kLpTol);
        if (by_lp != by_rank)
          fail(ErrorKind::Internal, "extremality probes disagree on a boxworld map");
        return by_lp;
      }
      return by_rank;
    }
  }
  fail(ErrorKind::Internal, "unknown theory");
}

CheckReport check_purity_preservation(const TheoryModel& model, int n_samples,
                                      std::uint64_t seed) {
  CheckReport report;
  report.axiom = "purity-preservation";
  report.theory = model.id();
  report.samples = n_samples;
  report.seed = seed;
  report.tolerance = kRankTol;

  SystemRef sys = model.id() == TheoryId::Classical ? model.system(Shape::leaf(3))
                  : model.id() == TheoryId::Quantum ? model.system(Shape::leaf(2))
                                                    : model.system(Shape::gbit());
  Rng rng(seed);
  for (int i = 0; i < n_samples; ++i) {
    Transformation first = model.sample_pure_transformation(sys, sys, rng);
    Transformation second = model.sample_pure_transformation(sys, sys, rng);
    Transformation seq = sequential_compose(first, second);
    Transformation par = parallel_compose(first, second);
    const char* failed = nullptr;
    Transformation bad = seq;
    if (!is_pure_transformation(model, seq)) {
      failed = "sequential";
    } else if (!is_pure_transformation(model, par)) {
      failed = "parallel";
      bad = par;
    }
    if (failed) {
      report.verdict = Verdict::Fails;
      report.samples = i + 1;
      report.note = std::string(failed) + " composition of pure samples is mixed";
      report.witness.push_back(WitnessItem{"first", first});
      report.witness.push_back(WitnessItem{"second", second});
      report.witness.push_back(WitnessItem{"composite", bad});
      return report;
    }
  }
  report.verdict = Verdict::HoldsOnSamples;
  return report;
}

}  // namespace gpt
