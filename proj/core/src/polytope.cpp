#include "gpt/polytope.hpp"

#include <algorithm>
#include <cmath>

#include "gpt/errors.hpp"
#include "gpt/lp.hpp"

namespace gpt {
namespace polytope {
namespace {

constexpr unsigned long long kMaxSubsets = 5000000ULL;

unsigned long long binomial(int n, int k) {
  if (k < 0 || k > n) return 0;
  unsigned long long r = 1;
  for (int i = 0; i < k; ++i) {
    r = r * static_cast<unsigned long long>(n - i) / static_cast<unsigned long long>(i + 1);
    if (r > kMaxSubsets * 64ULL) return kMaxSubsets * 64ULL;
  }
  return r;
}

bool next_combination(std::vector<int>& idx, int n) {
  int k = static_cast<int>(idx.size());
  for (int i = k - 1; i >= 0; --i) {
    if (idx[static_cast<size_t>(i)] < n - k + i) {
      ++idx[static_cast<size_t>(i)];
      for (int j = i + 1; j < k; ++j) idx[static_cast<size_t>(j)] = idx[static_cast<size_t>(j - 1)] + 1;
      return true;
    }
  }
  return false;
}

}  // namespace

std::vector<Vec> enumerate_vertices(const Mat& ge_A, const Vec& ge_b,
                                    const Mat& eq_A, const Vec& eq_b,
                                    double tol) {
  int n = static_cast<int>(ge_A.cols());
  int m_ge = static_cast<int>(ge_A.rows());
  int m_eq = static_cast<int>(eq_A.rows());

  Eigen::ColPivHouseholderQR<Mat> eq_qr(eq_A);
  eq_qr.setThreshold(1e-10);
  int r_eq = m_eq > 0 ? static_cast<int>(eq_qr.rank()) : 0;
  int need = n - r_eq;
  if (need < 0 || need > m_ge) return {};
  if (binomial(m_ge, need) > kMaxSubsets) {
    fail(ErrorKind::Internal, "vertex enumeration: too many active-set candidates");
  }

  std::vector<Vec> vertices;
  std::vector<int> idx(static_cast<size_t>(need));
  for (int i = 0; i < need; ++i) idx[static_cast<size_t>(i)] = i;
  bool more = need >= 0;
  Mat sys(m_eq + need, n);
  Vec rhs(m_eq + need);
  if (m_eq > 0) {
    sys.topRows(m_eq) = eq_A;
    rhs.head(m_eq) = eq_b;
  }
  while (more) {
    for (int i = 0; i < need; ++i) {
      sys.row(m_eq + i) = ge_A.row(idx[static_cast<size_t>(i)]);
      rhs(m_eq + i) = ge_b(idx[static_cast<size_t>(i)]);
    }
    Eigen::ColPivHouseholderQR<Mat> qr(sys);
    qr.setThreshold(1e-10);
    if (static_cast<int>(qr.rank()) == n) {
      Vec x = qr.solve(rhs);
      double feas = 1.0 + x.lpNorm<Eigen::Infinity>();
      bool ok = (sys * x - rhs).lpNorm<Eigen::Infinity>() <= tol * feas;
      if (ok && m_ge > 0) ok = ((ge_A * x - ge_b).minCoeff() >= -tol * feas);
      if (ok && m_eq > 0) ok = ((eq_A * x - eq_b).lpNorm<Eigen::Infinity>() <= tol * feas);
      if (ok) {
        bool seen = false;
        for (const Vec& v : vertices) {
          if ((v - x).lpNorm<Eigen::Infinity>() <= 1e-7 * feas) { seen = true; break; }
        }
        if (!seen) vertices.push_back(x);
      }
    }
    more = next_combination(idx, m_ge);
    if (need == 0) break;
  }
  return vertices;
}

std::optional<Vec> convex_combination(const std::vector<Vec>& points, const Vec& target,
                                      int excluded, double tol) {
  std::vector<int> used;
  for (int j = 0; j < static_cast<int>(points.size()); ++j) {
    if (j != excluded) used.push_back(j);
  }
  if (used.empty()) return std::nullopt;
  int n = static_cast<int>(target.size());
  int k = static_cast<int>(used.size());

  lp::Problem p = lp::Problem::feasibility(k);
  p.nonneg.assign(static_cast<size_t>(k), true);
  p.eq_A = Mat::Zero(n + 1, k);
  p.eq_b = Vec::Zero(n + 1);
  for (int j = 0; j < k; ++j) {
    p.eq_A.col(j).head(n) = points[static_cast<size_t>(used[static_cast<size_t>(j)])];
    p.eq_A(n, j) = 1.0;
  }
  p.eq_b.head(n) = target;
  p.eq_b(n) = 1.0;

  lp::Solution sol = lp::solve(p, tol);
  if (sol.status != lp::Status::Optimal) return std::nullopt;
  Vec full = Vec::Zero(static_cast<Eigen::Index>(points.size()));
  for (int j = 0; j < k; ++j) full(used[static_cast<size_t>(j)]) = std::max(0.0, sol.x(j));
  return full;
}

bool is_minimal_vertex_set(const std::vector<Vec>& points, double tol) {
  for (int i = 0; i < static_cast<int>(points.size()); ++i) {
    if (convex_combination(points, points[static_cast<size_t>(i)], i, tol)) return false;
  }
  return true;
}

bool is_extreme_ray(const Mat& ge_A, const Vec& x, double tol) {
  int n = static_cast<int>(x.size());
  double xs = x.lpNorm<Eigen::Infinity>();
  if (xs <= tol) return true;  // apex: only trivial refinements

  Vec gx = ge_A * x;
  double act_tol = std::max(tol, 1e-8) * (1.0 + xs);
  std::vector<int> active;
  for (int i = 0; i < gx.size(); ++i) {
    if (std::abs(gx(i)) <= act_tol) active.push_back(static_cast<int>(i));
  }

  lp::Problem base = lp::Problem::feasibility(n);
  base.ge_A = ge_A;
  base.ge_b = Vec::Zero(ge_A.rows());
  base.eq_A = Mat::Zero(static_cast<Eigen::Index>(active.size()) + 1, n);
  base.eq_b = Vec::Zero(static_cast<Eigen::Index>(active.size()) + 1);
  for (size_t a = 0; a < active.size(); ++a) {
    base.eq_A.row(static_cast<Eigen::Index>(a)) = ge_A.row(active[a]);
  }
  base.eq_A.row(static_cast<Eigen::Index>(active.size())) = x.transpose() / x.squaredNorm();
  base.eq_b(static_cast<Eigen::Index>(active.size())) = 1.0;

  double gap = std::max(1e-6, 1e3 * tol);
  for (int k = 0; k < n; ++k) {
    for (double sign : {1.0, -1.0}) {
      lp::Problem p = base;
      p.objective = Vec::Zero(n);
      p.objective(k) = sign;  // minimize => sign -1 maximizes x_k
      lp::Solution sol = lp::solve(p, tol);
      if (sol.status == lp::Status::Unbounded) return false;
      if (sol.status != lp::Status::Optimal) {
        fail(ErrorKind::Internal, "extreme ray probe: face slice infeasible");
      }
      if (std::abs(sol.x(k) - x(k)) > gap * (1.0 + xs)) return false;
    }
  }
  return true;
}

}  // namespace polytope
}  // namespace gpt
