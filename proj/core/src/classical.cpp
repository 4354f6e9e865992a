#include "gpt/classical.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "gpt/compose.hpp"
#include "gpt/errors.hpp"

namespace gpt {

int ClassicalTheory::leaf_rep_dim(int leaf_dim) const {
  if (leaf_dim < 1) fail(ErrorKind::BadShape, "classical system needs d >= 1");
  return leaf_dim;
}

bool ClassicalTheory::valid_state(const State& state, double tol) const {
  if (state.coords.minCoeff() < -tol) return false;
  return state.coords.sum() <= 1.0 + tol;
}

bool ClassicalTheory::valid_effect(const Effect& effect, double tol) const {
  return effect.coords.minCoeff() >= -tol && effect.coords.maxCoeff() <= 1.0 + tol;
}

bool ClassicalTheory::valid_transformation(const Transformation& t, double tol) const {
  if (t.matrix.minCoeff() < -tol) return false;
  for (Eigen::Index j = 0; j < t.matrix.cols(); ++j)
    if (t.matrix.col(j).sum() > 1.0 + tol) return false;
  return true;
}

Vec ClassicalTheory::leaf_unit(int leaf_dim) const {
  return Vec::Ones(leaf_rep_dim(leaf_dim));
}

std::vector<Vec> ClassicalTheory::pure_state_vertices(const SystemRef& sys) const {
  std::vector<Vec> vertices;
  vertices.reserve(sys.rep_dim());
  for (int k = 0; k < sys.rep_dim(); ++k) {
    Vec v = Vec::Zero(sys.rep_dim());
    v(k) = 1.0;
    vertices.push_back(std::move(v));
  }
  return vertices;
}

bool ClassicalTheory::has_finite_reversibles(const SystemRef& sys) const {
  return sys.rep_dim() <= 6;  // d! stays enumerable
}

std::vector<Mat> ClassicalTheory::reversible_group(const SystemRef& sys) const {
  if (!has_finite_reversibles(sys))
    fail(ErrorKind::BadShape, "permutation group too large to enumerate for " + sys.str());
  const int d = sys.rep_dim();
  std::vector<int> perm(d);
  std::iota(perm.begin(), perm.end(), 0);
  std::vector<Mat> group;
  do {
    Mat p = Mat::Zero(d, d);
    for (int j = 0; j < d; ++j) p(perm[j], j) = 1.0;
    group.push_back(std::move(p));
  } while (std::next_permutation(perm.begin(), perm.end()));
  return group;
}

State ClassicalTheory::random_state(const SystemRef& sys, Rng& rng, bool pure) const {
  const int d = sys.rep_dim();
  Vec coords = Vec::Zero(d);
  if (pure) {
    std::uniform_int_distribution<int> pick(0, d - 1);
    coords(pick(rng)) = 1.0;
  } else {
    std::uniform_real_distribution<double> uniform(0.0, 1.0);
    for (int k = 0; k < d; ++k) coords(k) = -std::log(1.0 - uniform(rng));
    coords /= coords.sum();
  }
  return State{sys, coords};
}

Test ClassicalTheory::random_test(const SystemRef& in, const SystemRef& out, int n_outcomes,
                                  Rng& rng) const {
  if (n_outcomes < 1) fail(ErrorKind::BadArity, "need at least one outcome");
  std::uniform_real_distribution<double> uniform(0.0, 1.0);
  const int din = in.rep_dim();
  const int dout = out.rep_dim();
  std::vector<Mat> raw(n_outcomes);
  for (Mat& m : raw) {
    m.resize(dout, din);
    for (Eigen::Index r = 0; r < dout; ++r)
      for (Eigen::Index c = 0; c < din; ++c) m(r, c) = uniform(rng) + 1e-9;
  }
  // Normalize so the branch sum is exactly column-stochastic.
  for (int c = 0; c < din; ++c) {
    double total = 0.0;
    for (const Mat& m : raw) total += m.col(c).sum();
    for (Mat& m : raw) m.col(c) /= total;
  }
  Test test;
  test.input = in;
  test.output = out;
  for (int b = 0; b < n_outcomes; ++b) {
    test.branches.push_back(Transformation{in, out, raw[b]});
    test.labels.push_back(std::to_string(b));
  }
  return test;
}

Transformation ClassicalTheory::reversible_sample(const SystemRef& sys, Rng& rng) const {
  const int d = sys.rep_dim();
  std::vector<int> perm(d);
  std::iota(perm.begin(), perm.end(), 0);
  std::shuffle(perm.begin(), perm.end(), rng);
  Mat p = Mat::Zero(d, d);
  for (int j = 0; j < d; ++j) p(perm[j], j) = 1.0;
  return Transformation{sys, sys, p};
}

Transformation ClassicalTheory::sample_pure_transformation(const SystemRef& in,
                                                           const SystemRef& out,
                                                           Rng& rng) const {
  // Atomic classical events are single matrix entries (scaled point-to-point
  // maps); they span the extreme rays of the substochastic cone.
  std::uniform_int_distribution<int> row(0, out.rep_dim() - 1);
  std::uniform_int_distribution<int> col(0, in.rep_dim() - 1);
  std::uniform_real_distribution<double> value(0.1, 1.0);
  Mat m = Mat::Zero(out.rep_dim(), in.rep_dim());
  m(row(rng), col(rng)) = value(rng);
  return Transformation{in, out, m};
}

std::vector<Test> ClassicalTheory::fiducial_observation_tests(const SystemRef& sys) const {
  const int d = sys.rep_dim();
  Test fine;
  fine.input = sys;
  fine.output = trivial_system();
  for (int k = 0; k < d; ++k) {
    Vec e = Vec::Zero(d);
    e(k) = 1.0;
    fine.branches.push_back(Transformation::from_effect(Effect{sys, e}));
    fine.labels.push_back(std::to_string(k));
  }
  return {fine};
}

const ClassicalTheory& classical_theory() {
  static ClassicalTheory instance;
  return instance;
}

}  // namespace gpt
