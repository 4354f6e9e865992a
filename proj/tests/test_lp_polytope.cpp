#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <random>
#include <set>
#include <vector>

#include "gpt/lp.hpp"
#include "gpt/polytope.hpp"
#include "gpt/theory.hpp"

using namespace gpt;

namespace {

Vec make_vec(std::initializer_list<double> xs) {
  Vec v(static_cast<int>(xs.size()));
  int i = 0;
  for (double x : xs) v(i++) = x;
  return v;
}

}  // namespace

TEST_CASE("lp: bounded optimum on a simplex face") {
  // minimize -x - 2y  s.t.  x + y <= 1, x, y >= 0  => optimum at (0, 1).
  lp::Problem p;
  p.n_vars = 2;
  p.objective = make_vec({-1.0, -2.0});
  p.nonneg = {true, true};
  p.add_ge(make_vec({-1.0, -1.0}), -1.0);
  const auto s = lp::solve(p);
  REQUIRE(s.status == lp::Status::Optimal);
  CHECK(s.objective == doctest::Approx(-2.0).epsilon(1e-9));
  CHECK(s.x(0) == doctest::Approx(0.0).epsilon(1e-9));
  CHECK(s.x(1) == doctest::Approx(1.0).epsilon(1e-9));
}

TEST_CASE("lp: equality-constrained problems and free variables") {
  // minimize x + y  s.t.  x - y = 3, x + y >= 1, both free => (x, y) on the
  // line x = y + 3; objective x + y = 2y + 3 minimized at the ge boundary
  // x + y = 1 => value 1.
  lp::Problem p;
  p.n_vars = 2;
  p.objective = make_vec({1.0, 1.0});
  p.add_eq(make_vec({1.0, -1.0}), 3.0);
  p.add_ge(make_vec({1.0, 1.0}), 1.0);
  const auto s = lp::solve(p);
  REQUIRE(s.status == lp::Status::Optimal);
  CHECK(s.objective == doctest::Approx(1.0).epsilon(1e-9));
  CHECK(s.x(0) - s.x(1) == doctest::Approx(3.0).epsilon(1e-9));
}

TEST_CASE("lp: infeasibility produces a verifiable Farkas certificate") {
  // x = 2 and x >= 0 with x <= 1 is infeasible.
  lp::Problem p;
  p.n_vars = 1;
  p.nonneg = {true};
  p.add_eq(make_vec({1.0}), 2.0);
  p.add_ge(make_vec({-1.0}), -1.0);
  const auto s = lp::solve(p);
  REQUIRE(s.status == lp::Status::Infeasible);
  const double margin = lp::farkas_margin(p, s.farkas_eq, s.farkas_ge);
  CHECK(margin > 1e-9);

  // A zero certificate never certifies anything.
  CHECK(lp::farkas_margin(p, Vec::Zero(1), Vec::Zero(1)) <= 0.0);
  // Sign-violating multipliers are rejected.
  CHECK(lp::farkas_margin(p, Vec::Zero(1), make_vec({-1.0})) <= 0.0);
}

TEST_CASE("lp: unbounded detection") {
  lp::Problem p;
  p.n_vars = 1;
  p.objective = make_vec({-1.0});
  p.nonneg = {true};
  const auto s = lp::solve(p);
  CHECK(s.status == lp::Status::Unbounded);
}

TEST_CASE("lp: degenerate and redundant rows stay solvable") {
  lp::Problem p;
  p.n_vars = 3;
  p.objective = make_vec({2.0, 1.0, 3.0});
  p.nonneg = {true, true, true};
  p.add_eq(make_vec({1.0, 1.0, 1.0}), 1.0);
  p.add_eq(make_vec({2.0, 2.0, 2.0}), 2.0);  // redundant copy
  p.add_ge(make_vec({1.0, 0.0, 0.0}), 0.0);  // redundant with nonneg
  const auto s = lp::solve(p);
  REQUIRE(s.status == lp::Status::Optimal);
  CHECK(s.objective == doctest::Approx(1.0).epsilon(1e-9));  // all mass on y
}

TEST_CASE("lp: random simplex problems match the closed-form optimum") {
  // minimize c . x over the probability simplex has optimum min_i c_i.
  std::mt19937_64 rng(321);
  std::uniform_real_distribution<double> coef(-5.0, 5.0);
  for (int trial = 0; trial < 50; ++trial) {
    const int n = 2 + static_cast<int>(rng() % 6);
    lp::Problem p;
    p.n_vars = n;
    p.objective = Vec::NullaryExpr(n, [&](Eigen::Index) { return coef(rng); });
    p.nonneg.assign(static_cast<std::size_t>(n), true);
    p.add_eq(Vec::Ones(n), 1.0);
    const auto s = lp::solve(p);
    REQUIRE(s.status == lp::Status::Optimal);
    CHECK(s.objective == doctest::Approx(p.objective.minCoeff()).epsilon(1e-8));
    CHECK(s.x.minCoeff() > -1e-9);
    CHECK(s.x.sum() == doctest::Approx(1.0).epsilon(1e-9));
  }
}

TEST_CASE("polytope: vertex enumeration recovers the unit square") {
  // {0 <= x <= 1, 0 <= y <= 1}
  Mat ge(4, 2);
  ge << 1, 0, -1, 0, 0, 1, 0, -1;
  Vec b = make_vec({0.0, -1.0, 0.0, -1.0});
  const auto verts = polytope::enumerate_vertices(ge, b, Mat(0, 2), Vec(0));
  REQUIRE(verts.size() == 4);
  std::set<std::pair<int, int>> got;
  for (const Vec& v : verts)
    got.insert({static_cast<int>(std::lround(v(0))), static_cast<int>(std::lround(v(1)))});
  const std::set<std::pair<int, int>> want{{0, 0}, {0, 1}, {1, 0}, {1, 1}};
  CHECK(got == want);
}

TEST_CASE("polytope: convex combinations and minimality") {
  const std::vector<Vec> square{make_vec({0, 0}), make_vec({1, 0}), make_vec({0, 1}),
                                make_vec({1, 1})};
  const auto w = polytope::convex_combination(square, make_vec({0.5, 0.5}));
  REQUIRE(w.has_value());
  CHECK(w->minCoeff() > -1e-9);
  CHECK(w->sum() == doctest::Approx(1.0).epsilon(1e-9));
  Vec rebuilt = Vec::Zero(2);
  for (int i = 0; i < 4; ++i) rebuilt += (*w)(i)*square[static_cast<std::size_t>(i)];
  CHECK((rebuilt - make_vec({0.5, 0.5})).norm() < 1e-9);

  // A vertex is not a combination of the others.
  CHECK_FALSE(polytope::convex_combination(square, square[0], 0).has_value());
  CHECK(polytope::is_minimal_vertex_set(square));

  auto with_center = square;
  with_center.push_back(make_vec({0.5, 0.5}));
  CHECK_FALSE(polytope::is_minimal_vertex_set(with_center));

  // Points outside the hull are rejected.
  CHECK_FALSE(polytope::convex_combination(square, make_vec({1.5, 0.0})).has_value());
}

TEST_CASE("polytope: extreme rays of simple cones") {
  // Nonnegative quadrant: axes are extreme, interior directions are not.
  Mat quad(2, 2);
  quad << 1, 0, 0, 1;
  CHECK(polytope::is_extreme_ray(quad, make_vec({1.0, 0.0})));
  CHECK(polytope::is_extreme_ray(quad, make_vec({0.0, 2.0})));
  CHECK_FALSE(polytope::is_extreme_ray(quad, make_vec({1.0, 1.0})));

  // Ice-cream-like polyhedral cone x >= 0, x >= y, x >= -y in R^2.
  Mat wedge(3, 2);
  wedge << 1, 0, 1, -1, 1, 1;
  CHECK(polytope::is_extreme_ray(wedge, make_vec({1.0, 1.0})));
  CHECK(polytope::is_extreme_ray(wedge, make_vec({1.0, -1.0})));
  CHECK_FALSE(polytope::is_extreme_ray(wedge, make_vec({1.0, 0.0})));
}

TEST_CASE("polytope: classical simplex vertices are exactly the point masses") {
  // Cross-check the theory enumeration against enumerate_vertices on the
  // H-description {x >= 0, sum x = 1}.
  for (int d = 2; d <= 4; ++d) {
    Mat ge = Mat::Identity(d, d);
    Vec zero = Vec::Zero(d);
    Mat eq(1, d);
    eq.setOnes();
    Vec one = make_vec({1.0});
    auto verts = polytope::enumerate_vertices(ge, zero, eq, one);
    REQUIRE(static_cast<int>(verts.size()) == d);
    const auto model_verts = theory(TheoryId::Classical)
                                 .pure_state_vertices(make_system(
                                     TheoryId::Classical, Shape::leaf(d)));
    for (const Vec& mv : model_verts) {
      bool found = false;
      for (const Vec& v : verts) found = found || (v - mv).norm() < 1e-9;
      CHECK(found);
    }
  }
}
