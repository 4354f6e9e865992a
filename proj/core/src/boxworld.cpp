#include "gpt/boxworld.hpp"

#include <cmath>

#include "gpt/compose.hpp"
#include "gpt/errors.hpp"
#include "gpt/polytope.hpp"

namespace gpt {
namespace boxworld {

const std::vector<Vec>& gbit_vertices() {
  static const std::vector<Vec> vertices = [] {
    std::vector<Vec> v(4, Vec::Zero(3));
    v[0] << 1, 0, 1;
    v[1] << 0, 1, 1;
    v[2] << -1, 0, 1;
    v[3] << 0, -1, 1;
    return v;
  }();
  return vertices;
}

const std::vector<Vec>& gbit_extreme_effects() {
  static const std::vector<Vec> effects = [] {
    std::vector<Vec> e(4, Vec::Zero(3));
    e[0] << 0.5, 0.5, 0.5;    // measurement 0, outcome 0: picks out v0, v1
    e[1] << -0.5, -0.5, 0.5;  // measurement 0, outcome 1
    e[2] << 0.5, -0.5, 0.5;   // measurement 1, outcome 0: picks out v0, v3
    e[3] << -0.5, 0.5, 0.5;   // measurement 1, outcome 1
    return e;
  }();
  return effects;
}

const std::vector<Mat>& gbit_symmetries() {
  static const std::vector<Mat> group = [] {
    std::vector<Mat> g;
    const double rot[4][4] = {
        {1, 0, 0, 1}, {0, -1, 1, 0}, {-1, 0, 0, -1}, {0, 1, -1, 0}};
    for (const auto& r : rot) {
      for (int reflect = 0; reflect < 2; ++reflect) {
        Mat m = Mat::Identity(3, 3);
        m(0, 0) = r[0];
        m(0, 1) = r[1];
        m(1, 0) = r[2];
        m(1, 1) = r[3];
        if (reflect) {
          // compose with (x, y) -> (y, x)
          Mat s = Mat::Identity(3, 3);
          s(0, 0) = s(1, 1) = 0.0;
          s(0, 1) = s(1, 0) = 1.0;
          m = m * s;
        }
        g.push_back(m);
      }
    }
    return g;
  }();
  return group;
}

int gbit_count(const Shape& shape) {
  if (shape.is_leaf()) {
    if (shape.dim == 2) return 1;
    if (shape.dim == 1) return 0;
    fail(ErrorKind::BadShape, "boxworld leaf must be a gbit or trivial");
  }
  int n = 0;
  for (const Shape& part : shape.parts) n += gbit_count(part);
  return n;
}

namespace {

std::vector<Vec> product_effect_list(const Shape& shape) {
  if (shape.is_leaf()) {
    if (shape.dim == 1) return {Vec::Ones(1)};
    return gbit_extreme_effects();
  }
  std::vector<Vec> acc{Vec::Ones(1)};
  for (const Shape& part : shape.parts) {
    std::vector<Vec> local = product_effect_list(part);
    std::vector<Vec> next;
    next.reserve(acc.size() * local.size());
    for (const Vec& a : acc)
      for (const Vec& l : local) next.push_back(linalg::kron(a, l));
    acc = std::move(next);
  }
  return acc;
}

Vec dirichlet(int n, Rng& rng) {
  std::uniform_real_distribution<double> uniform(0.0, 1.0);
  Vec w(n);
  for (int i = 0; i < n; ++i) w(i) = -std::log(1.0 - uniform(rng));
  return w / w.sum();
}

const Vec& two_gbit_unit() {
  static const Vec u = [] {
    Vec u1(3);
    u1 << 0, 0, 1;
    return linalg::kron(u1, u1);
  }();
  return u;
}

}  // namespace

Mat product_effect_rows(const Shape& shape) {
  std::vector<Vec> effects = product_effect_list(shape);
  Mat rows(static_cast<Eigen::Index>(effects.size()), effects.front().size());
  for (size_t i = 0; i < effects.size(); ++i)
    rows.row(static_cast<Eigen::Index>(i)) = effects[i].transpose();
  return rows;
}

const std::vector<Vec>& two_gbit_vertices() {
  static const std::vector<Vec> vertices = [] {
    Shape pair = Shape::composite({Shape::gbit(), Shape::gbit()});
    Mat ge = product_effect_rows(pair);
    Vec ge_b = Vec::Zero(ge.rows());
    Mat eq(1, 9);
    eq.row(0) = two_gbit_unit().transpose();
    Vec eq_b = Vec::Ones(1);
    std::vector<Vec> v = polytope::enumerate_vertices(ge, ge_b, eq, eq_b);
    if (v.size() != 24)
      fail(ErrorKind::Internal, "two-gbit maximal tensor product must have 24 vertices");
    return v;
  }();
  return vertices;
}

}  // namespace boxworld

int BoxworldTheory::leaf_rep_dim(int leaf_dim) const {
  if (leaf_dim == 1) return 1;
  if (leaf_dim == 2) return 3;
  fail(ErrorKind::BadShape, "boxworld leaf must be a gbit (dim 2)");
}

Vec BoxworldTheory::leaf_unit(int leaf_dim) const {
  if (leaf_dim == 1) return Vec::Ones(1);
  if (leaf_dim == 2) {
    Vec u(3);
    u << 0, 0, 1;
    return u;
  }
  fail(ErrorKind::BadShape, "boxworld leaf must be a gbit (dim 2)");
}

bool BoxworldTheory::valid_state(const State& state, double tol) const {
  Mat rows = boxworld::product_effect_rows(state.system.shape());
  if ((rows * state.coords).minCoeff() < -tol) return false;
  return unit_coords(state.system).dot(state.coords) <= 1.0 + tol;
}

bool BoxworldTheory::valid_effect(const Effect& effect, double tol) const {
  const std::vector<Vec> vertices = pure_state_vertices(effect.system);
  for (const Vec& v : vertices) {
    double p = effect.coords.dot(v);
    if (p < -tol || p > 1.0 + tol) return false;
  }
  return true;
}

bool BoxworldTheory::valid_transformation(const Transformation& t, double tol) const {
  // Vertex images decide validity, and under the maximal tensor product this
  // already covers validity alongside idle wires.
  const std::vector<Vec> vertices = pure_state_vertices(t.input);
  for (const Vec& v : vertices) {
    if (!valid_state(State{t.output, t.matrix * v}, tol)) return false;
  }
  return true;
}

bool BoxworldTheory::has_vertex_enumeration(const SystemRef& sys) const {
  return boxworld::gbit_count(sys.shape()) <= 2;
}

std::vector<Vec> BoxworldTheory::pure_state_vertices(const SystemRef& sys) const {
  const Shape& shape = sys.shape();
  int n = boxworld::gbit_count(shape);
  if (n > 2)
    fail(ErrorKind::BadShape, "boxworld vertex enumeration limited to two gbits: " + sys.str());
  if (n == 2 && sys.rep_dim() == 9) return boxworld::two_gbit_vertices();
  if (shape.is_leaf())
    return shape.dim == 1 ? std::vector<Vec>{Vec::Ones(1)} : boxworld::gbit_vertices();
  // Composite with at most one gbit, or nested with trivial padding: products.
  std::vector<Vec> acc{Vec::Ones(1)};
  for (const Shape& part : shape.parts) {
    std::vector<Vec> local = pure_state_vertices(system(part));
    std::vector<Vec> next;
    for (const Vec& a : acc)
      for (const Vec& l : local) next.push_back(linalg::kron(a, l));
    acc = std::move(next);
  }
  return acc;
}

bool BoxworldTheory::has_finite_reversibles(const SystemRef& sys) const {
  return boxworld::gbit_count(sys.shape()) <= 2;
}

std::vector<Mat> BoxworldTheory::reversible_group(const SystemRef& sys) const {
  int n = boxworld::gbit_count(sys.shape());
  if (n == 0) return {Mat::Identity(sys.rep_dim(), sys.rep_dim())};
  if (n == 1) return boxworld::gbit_symmetries();
  if (n != 2 || sys.rep_dim() != 9)
    fail(ErrorKind::BadShape, "boxworld reversibles limited to two gbits: " + sys.str());
  Mat swap = Mat::Zero(9, 9);
  for (int c = 0; c < 3; ++c)
    for (int d = 0; d < 3; ++d) swap(d * 3 + c, c * 3 + d) = 1.0;
  std::vector<Mat> group;
  for (const Mat& a : boxworld::gbit_symmetries()) {
    for (const Mat& b : boxworld::gbit_symmetries()) {
      Mat local = linalg::kron(a, b);
      group.push_back(local);
      group.push_back(local * swap);
    }
  }
  return group;
}

State BoxworldTheory::random_state(const SystemRef& sys, Rng& rng, bool pure) const {
  const Shape& shape = sys.shape();
  if (boxworld::gbit_count(shape) <= 2) {
    const std::vector<Vec> vertices = pure_state_vertices(sys);
    if (pure) {
      std::uniform_int_distribution<int> pick(0, static_cast<int>(vertices.size()) - 1);
      return State{sys, vertices[static_cast<size_t>(pick(rng))]};
    }
    Vec w = boxworld::dirichlet(static_cast<int>(vertices.size()), rng);
    Vec coords = Vec::Zero(sys.rep_dim());
    for (size_t i = 0; i < vertices.size(); ++i) coords += w(static_cast<Eigen::Index>(i)) * vertices[i];
    return State{sys, coords};
  }
  // Wide composites: products of per-part samples, mixed as needed.
  auto product_sample = [&](bool part_pure) {
    Vec coords = Vec::Ones(1);
    for (const Shape& part : shape.parts)
      coords = linalg::kron(coords, random_state(system(part), rng, part_pure).coords);
    return coords;
  };
  if (pure) return State{sys, product_sample(true)};
  Vec w = boxworld::dirichlet(4, rng);
  Vec coords = Vec::Zero(sys.rep_dim());
  for (int i = 0; i < 4; ++i) coords += w(i) * product_sample(false);
  return State{sys, coords};
}

Test BoxworldTheory::random_test(const SystemRef& in, const SystemRef& out, int n_outcomes,
                                 Rng& rng) const {
  if (n_outcomes < 1) fail(ErrorKind::BadArity, "need at least one outcome");
  std::uniform_real_distribution<double> uniform(0.0, 1.0);
  Test test;
  test.input = in;
  test.output = out;
  for (int b = 0; b < n_outcomes; ++b) {
    test.branches.push_back(Transformation{in, out, Mat::Zero(out.rep_dim(), in.rep_dim())});
    test.labels.push_back(std::to_string(b));
  }

  bool same_gbit = in == out && boxworld::gbit_count(in.shape()) == 1;
  if (same_gbit && uniform(rng) < 0.5) {
    // Instrument of scaled reversibles.
    Vec c = boxworld::dirichlet(n_outcomes, rng);
    for (int b = 0; b < n_outcomes; ++b)
      test.branches[static_cast<size_t>(b)].matrix = c(b) * reversible_sample(in, rng).matrix;
    return test;
  }

  // Measure-and-prepare along one fiducial observation of the input: branch
  // b collects a Dirichlet share of every fiducial outcome, re-prepared as a
  // fresh state. The branch sum is a valid channel by construction.
  std::vector<Test> fiducials = fiducial_observation_tests(in);
  std::uniform_int_distribution<int> pick(0, static_cast<int>(fiducials.size()) - 1);
  const Test& fid = fiducials[static_cast<size_t>(pick(rng))];
  for (const Transformation& outcome : fid.branches) {
    Vec c = boxworld::dirichlet(n_outcomes, rng);
    for (int b = 0; b < n_outcomes; ++b) {
      Vec prep = random_state(out, rng, false).coords;
      test.branches[static_cast<size_t>(b)].matrix += c(b) * prep * outcome.matrix;
    }
  }
  return test;
}

Transformation BoxworldTheory::reversible_sample(const SystemRef& sys, Rng& rng) const {
  if (boxworld::gbit_count(sys.shape()) <= 2) {
    std::vector<Mat> group = reversible_group(sys);
    std::uniform_int_distribution<int> pick(0, static_cast<int>(group.size()) - 1);
    return Transformation{sys, sys, group[static_cast<size_t>(pick(rng))]};
  }
  Mat m = Mat::Ones(1, 1);
  for (const Shape& part : sys.shape().parts)
    m = linalg::kron(m, reversible_sample(system(part), rng).matrix);
  return Transformation{sys, sys, m};
}

Transformation BoxworldTheory::sample_pure_transformation(const SystemRef& in,
                                                          const SystemRef& out,
                                                          Rng& rng) const {
  std::uniform_real_distribution<double> uniform(0.0, 1.0);
  if (in.is_trivial() && out.is_trivial())
    return Transformation{in, out, Mat::Constant(1, 1, uniform(rng))};
  if (in.is_trivial()) return Transformation::from_state(random_state(out, rng, true));
  if (in == out && uniform(rng) < 0.5) return reversible_sample(in, rng);
  // Atomic measure-and-prepare: extreme product effect in, vertex out.
  std::vector<Vec> effects = boxworld::product_effect_list(in.shape());
  std::uniform_int_distribution<int> pick(0, static_cast<int>(effects.size()) - 1);
  const Vec& f = effects[static_cast<size_t>(pick(rng))];
  Vec v = random_state(out, rng, true).coords;
  return Transformation{in, out, v * f.transpose()};
}

std::vector<Test> BoxworldTheory::fiducial_observation_tests(const SystemRef& sys) const {
  const Shape& shape = sys.shape();
  if (shape.is_leaf()) {
    if (shape.dim == 1) {
      Test t;
      t.input = sys;
      t.output = trivial_system();
      t.branches.push_back(Transformation::from_effect(Effect{sys, Vec::Ones(1)}));
      t.labels.push_back("0");
      return {t};
    }
    const std::vector<Vec>& e = boxworld::gbit_extreme_effects();
    std::vector<Test> tests;
    for (int m = 0; m < 2; ++m) {
      Test t;
      t.input = sys;
      t.output = trivial_system();
      for (int k = 0; k < 2; ++k) {
        t.branches.push_back(Transformation::from_effect(Effect{sys, e[static_cast<size_t>(2 * m + k)]}));
        t.labels.push_back(std::to_string(k));
      }
      tests.push_back(std::move(t));
    }
    return tests;
  }
  std::vector<Test> acc;
  bool first = true;
  for (const Shape& part : shape.parts) {
    std::vector<Test> local = fiducial_observation_tests(system(part));
    if (first) {
      acc = std::move(local);
      first = false;
      continue;
    }
    std::vector<Test> next;
    for (const Test& a : acc)
      for (const Test& l : local) next.push_back(parallel_compose(a, l));
    acc = std::move(next);
  }
  return acc;
}

const BoxworldTheory& boxworld_theory() {
  static BoxworldTheory instance;
  return instance;
}

}  // namespace gpt
