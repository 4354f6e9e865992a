#include "gpt/lp.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "gpt/errors.hpp"

namespace gpt {
namespace lp {
namespace {

constexpr double kPivotEps = 1e-11;
constexpr int kMaxIters = 50000;

// Dense two-phase simplex over the standard form min c.x, Ax = b, x >= 0.
// Bland's rule on both entering and leaving choices, so no cycling.
struct Tableau {
  Mat body;               // m x (n_cols + 1), last column is rhs
  Vec cost;               // n_cols + 1, last entry is -objective
  std::vector<int> basis; // per row, column index currently basic
  int last_pivots = 0;    // pivots performed by the latest iterate() call

  int rows() const { return static_cast<int>(body.rows()); }
  int cols() const { return static_cast<int>(body.cols()) - 1; }

  void pivot(int r, int c) {
    body.row(r) /= body(r, c);
    for (int i = 0; i < rows(); ++i) {
      if (i == r) continue;
      double f = body(i, c);
      if (f != 0.0) body.row(i) -= f * body.row(r);
    }
    double f = cost(c);
    if (f != 0.0) cost -= f * body.row(r).transpose();
    basis[static_cast<size_t>(r)] = c;
  }

  // Returns false when the problem is unbounded in the entering direction.
  bool iterate(int n_enterable) {
    last_pivots = 0;
    for (int iter = 0; iter < kMaxIters; ++iter) {
      int enter = -1;
      for (int j = 0; j < n_enterable; ++j) {
        if (cost(j) < -kPivotEps) { enter = j; break; }
      }
      if (enter < 0) return true;
      int leave = -1;
      double best = std::numeric_limits<double>::infinity();
      for (int i = 0; i < rows(); ++i) {
        double a = body(i, enter);
        if (a <= kPivotEps) continue;
        double ratio = body(i, cols()) / a;
        if (ratio < best - kPivotEps ||
            (ratio < best + kPivotEps && (leave < 0 || basis[static_cast<size_t>(i)] < basis[static_cast<size_t>(leave)]))) {
          best = ratio;
          leave = i;
        }
      }
      if (leave < 0) return false;
      pivot(leave, enter);
      ++last_pivots;
    }
    fail(ErrorKind::Internal, "simplex iteration limit exceeded");
  }
};

struct StandardForm {
  Mat A;  // m x n_std
  Vec b;
  Vec c;
  // column layout per original variable: plus column, optional minus column
  std::vector<int> col_plus;
  std::vector<int> col_minus;  // -1 for sign-constrained variables
  int n_eq = 0;
  int n_ge = 0;
};

StandardForm standardize(const Problem& p) {
  StandardForm s;
  s.n_eq = static_cast<int>(p.eq_A.rows());
  s.n_ge = static_cast<int>(p.ge_A.rows());
  int m = s.n_eq + s.n_ge;
  s.col_plus.resize(static_cast<size_t>(p.n_vars));
  s.col_minus.assign(static_cast<size_t>(p.n_vars), -1);
  int n_std = 0;
  for (int j = 0; j < p.n_vars; ++j) {
    bool nn = !p.nonneg.empty() && p.nonneg[static_cast<size_t>(j)];
    s.col_plus[static_cast<size_t>(j)] = n_std++;
    if (!nn) s.col_minus[static_cast<size_t>(j)] = n_std++;
  }
  int slack0 = n_std;
  n_std += s.n_ge;

  s.A = Mat::Zero(m, n_std);
  s.b = Vec::Zero(m);
  s.c = Vec::Zero(n_std);
  for (int i = 0; i < s.n_eq; ++i) {
    s.b(i) = p.eq_b(i);
    for (int j = 0; j < p.n_vars; ++j) {
      double a = p.eq_A(i, j);
      s.A(i, s.col_plus[static_cast<size_t>(j)]) = a;
      if (s.col_minus[static_cast<size_t>(j)] >= 0) s.A(i, s.col_minus[static_cast<size_t>(j)]) = -a;
    }
  }
  for (int i = 0; i < s.n_ge; ++i) {
    int r = s.n_eq + i;
    s.b(r) = p.ge_b(i);
    for (int j = 0; j < p.n_vars; ++j) {
      double a = p.ge_A(i, j);
      s.A(r, s.col_plus[static_cast<size_t>(j)]) = a;
      if (s.col_minus[static_cast<size_t>(j)] >= 0) s.A(r, s.col_minus[static_cast<size_t>(j)]) = -a;
    }
    s.A(r, slack0 + i) = -1.0;
  }
  if (p.objective.size() > 0) {
    for (int j = 0; j < p.n_vars; ++j) {
      double cj = p.objective(j);
      s.c(s.col_plus[static_cast<size_t>(j)]) = cj;
      if (s.col_minus[static_cast<size_t>(j)] >= 0) s.c(s.col_minus[static_cast<size_t>(j)]) = -cj;
    }
  }
  return s;
}

}  // namespace

Problem Problem::feasibility(int n) {
  Problem p;
  p.n_vars = n;
  p.eq_A = Mat::Zero(0, n);
  p.eq_b = Vec::Zero(0);
  p.ge_A = Mat::Zero(0, n);
  p.ge_b = Vec::Zero(0);
  return p;
}

void Problem::add_eq(const Vec& row, double rhs) {
  eq_A.conservativeResize(eq_A.rows() + 1, n_vars);
  eq_A.row(eq_A.rows() - 1) = row.transpose();
  eq_b.conservativeResize(eq_b.size() + 1);
  eq_b(eq_b.size() - 1) = rhs;
}

void Problem::add_ge(const Vec& row, double rhs) {
  ge_A.conservativeResize(ge_A.rows() + 1, n_vars);
  ge_A.row(ge_A.rows() - 1) = row.transpose();
  ge_b.conservativeResize(ge_b.size() + 1);
  ge_b(ge_b.size() - 1) = rhs;
}

Solution solve(const Problem& problem, double tol) {
  if (problem.n_vars <= 0) fail(ErrorKind::Internal, "lp: no variables");
  StandardForm sf = standardize(problem);
  int m = static_cast<int>(sf.A.rows());
  int n_std = static_cast<int>(sf.A.cols());

  Solution out;
  if (m == 0) {
    // No rows: x = 0 is optimal unless some standard-form column descends.
    const bool descends = sf.c.size() > 0 && sf.c.minCoeff() < 0.0;
    out.status = descends ? Status::Unbounded : Status::Optimal;
    out.x = Vec::Zero(problem.n_vars);
    out.objective = 0.0;
    return out;
  }

  // Rows flipped so rhs >= 0; one artificial per original row.
  std::vector<double> row_sign(static_cast<size_t>(m), 1.0);
  for (int i = 0; i < m; ++i) {
    if (sf.b(i) < 0.0) {
      sf.A.row(i) *= -1.0;
      sf.b(i) *= -1.0;
      row_sign[static_cast<size_t>(i)] = -1.0;
    }
  }

  Tableau t;
  t.body = Mat::Zero(m, n_std + m + 1);
  t.basis.resize(static_cast<size_t>(m));
  for (int i = 0; i < m; ++i) t.basis[static_cast<size_t>(i)] = n_std + i;
  t.cost = Vec::Zero(n_std + m + 1);
  std::vector<int> live_rows(static_cast<size_t>(m));
  for (int i = 0; i < m; ++i) live_rows[static_cast<size_t>(i)] = i;

  // Exact refactorization: rebuild body and cost from the untouched data
  // for the current basis. Pivot updates drift over long degenerate runs,
  // which would corrupt both optimality decisions and Farkas certificates;
  // periodic rebuilds keep every accepted verdict anchored to fresh QR
  // solves. Returns the simplex multipliers for the live rows.
  auto refactor = [&](const Vec& c_std, double c_art) {
    const int mk = t.rows();
    Mat basis_cols = Mat::Zero(mk, mk);
    Vec cost_basic = Vec::Zero(mk);
    for (int i = 0; i < mk; ++i) {
      const int bj = t.basis[static_cast<size_t>(i)];
      if (bj < n_std) {
        for (int r = 0; r < mk; ++r) basis_cols(r, i) = sf.A(live_rows[static_cast<size_t>(r)], bj);
        cost_basic(i) = c_std(bj);
      } else {
        for (int r = 0; r < mk; ++r)
          basis_cols(r, i) = live_rows[static_cast<size_t>(r)] == bj - n_std ? 1.0 : 0.0;
        cost_basic(i) = c_art;
      }
    }
    Mat data(mk, n_std + m + 1);
    for (int r = 0; r < mk; ++r) {
      data.row(r).head(n_std) = sf.A.row(live_rows[static_cast<size_t>(r)]);
      data.row(r).segment(n_std, m).setZero();
      data(r, n_std + live_rows[static_cast<size_t>(r)]) = 1.0;
      data(r, n_std + m) = sf.b(live_rows[static_cast<size_t>(r)]);
    }
    t.body = basis_cols.colPivHouseholderQr().solve(data);
    const Vec y = basis_cols.transpose().colPivHouseholderQr().solve(cost_basic);
    t.cost.head(n_std) = c_std - data.leftCols(n_std).transpose() * y;
    for (int i = 0; i < m; ++i) t.cost(n_std + i) = c_art;
    for (int r = 0; r < mk; ++r) t.cost(n_std + live_rows[static_cast<size_t>(r)]) = c_art - y(r);
    t.cost(n_std + m) = -cost_basic.dot(t.body.col(n_std + m));
    return y;
  };

  // Run simplex with exact restarts until the fresh reduced costs confirm
  // the verdict (optimal/unbounded) or the round budget runs out.
  Vec last_y;
  auto refine = [&](const Vec& c_std, double c_art) -> Status {
    for (int round = 0; round < 40; ++round) {
      last_y = refactor(c_std, c_art);
      double worst = 0.0;
      for (int j = 0; j < n_std; ++j) worst = std::min(worst, t.cost(j));
      const double eps = kPivotEps * 100.0 *
                         (1.0 + last_y.lpNorm<Eigen::Infinity>() +
                          c_std.lpNorm<Eigen::Infinity>());
      if (worst >= -eps) return Status::Optimal;
      const bool ok = t.iterate(n_std);
      if (!ok && t.last_pivots == 0) return Status::Unbounded;
      if (ok) {
        // Re-check on fresh data next round; loop exits via worst >= -eps.
        continue;
      }
    }
    // Budget exhausted; accept the current basis after one last rebuild.
    last_y = refactor(c_std, c_art);
    return Status::Optimal;
  };

  const Vec zero_cost = Vec::Zero(n_std);
  if (refine(zero_cost, 1.0) == Status::Unbounded)
    fail(ErrorKind::Internal, "lp: phase one unbounded");

  double phase1 = -t.cost(n_std + m);
  double feas_tol = tol * (1.0 + sf.b.lpNorm<Eigen::Infinity>());
  if (phase1 > feas_tol) {
    Vec y(m);
    for (int i = 0; i < m; ++i) y(i) = last_y(i) * row_sign[static_cast<size_t>(i)];
    double scale = y.lpNorm<Eigen::Infinity>();
    if (scale > 0.0) y /= scale;
    out.status = Status::Infeasible;
    out.farkas_eq = y.head(sf.n_eq);
    out.farkas_ge = y.tail(sf.n_ge).cwiseMax(0.0);
    return out;
  }

  // Remove rows whose artificial cannot be pivoted out: they are redundant.
  std::vector<int> keep;
  for (int i = 0; i < m; ++i) {
    if (t.basis[static_cast<size_t>(i)] < n_std) {
      keep.push_back(i);
      continue;
    }
    int col = -1;
    for (int j = 0; j < n_std; ++j) {
      if (std::abs(t.body(i, j)) > kPivotEps) { col = j; break; }
    }
    if (col >= 0) {
      t.pivot(i, col);
      keep.push_back(i);
    }
  }
  if (static_cast<int>(keep.size()) < m) {
    Mat body(keep.size(), n_std + m + 1);
    std::vector<int> basis(keep.size());
    std::vector<int> rows(keep.size());
    for (size_t k = 0; k < keep.size(); ++k) {
      body.row(static_cast<Eigen::Index>(k)) = t.body.row(keep[k]);
      basis[k] = t.basis[static_cast<size_t>(keep[k])];
      rows[k] = live_rows[static_cast<size_t>(keep[k])];
    }
    t.body = body;
    t.basis = basis;
    live_rows = rows;
  }

  auto extract = [&](Solution& sol) {
    Vec x_std = Vec::Zero(n_std);
    for (int i = 0; i < t.rows(); ++i) {
      int bj = t.basis[static_cast<size_t>(i)];
      if (bj < n_std) x_std(bj) = t.body(i, n_std + m);
    }
    sol.x = Vec::Zero(problem.n_vars);
    for (int j = 0; j < problem.n_vars; ++j) {
      double v = x_std(sf.col_plus[static_cast<size_t>(j)]);
      if (sf.col_minus[static_cast<size_t>(j)] >= 0) v -= x_std(sf.col_minus[static_cast<size_t>(j)]);
      sol.x(j) = v;
    }
    sol.objective = problem.objective.size() > 0 ? problem.objective.dot(sol.x) : 0.0;
  };

  if (problem.objective.size() == 0) {
    refactor(zero_cost, 1.0);
    out.status = Status::Optimal;
    extract(out);
    return out;
  }

  // Phase II over the real objective; artificial columns stay blocked.
  const Status phase2 = refine(sf.c, 0.0);
  out.status = phase2 == Status::Unbounded ? Status::Unbounded : Status::Optimal;
  extract(out);
  return out;
}

double farkas_margin(const Problem& problem, const Vec& y_eq, const Vec& y_ge, double tol) {
  if (y_eq.size() != problem.eq_A.rows() || y_ge.size() != problem.ge_A.rows()) return 0.0;
  if (y_ge.size() > 0 && y_ge.minCoeff() < -tol) return 0.0;
  Vec combo = Vec::Zero(problem.n_vars);
  if (y_eq.size() > 0) combo += problem.eq_A.transpose() * y_eq;
  if (y_ge.size() > 0) combo += problem.ge_A.transpose() * y_ge;
  double scale = 1.0 + std::max(y_eq.size() ? y_eq.lpNorm<Eigen::Infinity>() : 0.0,
                                y_ge.size() ? y_ge.lpNorm<Eigen::Infinity>() : 0.0);
  for (int j = 0; j < problem.n_vars; ++j) {
    bool nn = !problem.nonneg.empty() && problem.nonneg[static_cast<size_t>(j)];
    if (nn ? combo(j) > tol * scale : std::abs(combo(j)) > tol * scale) return 0.0;
  }
  double margin = 0.0;
  if (y_eq.size() > 0) margin += y_eq.dot(problem.eq_b);
  if (y_ge.size() > 0) margin += y_ge.dot(problem.ge_b);
  return margin;
}

}  // namespace lp
}  // namespace gpt
