#ifndef GPT_LP_HPP
#define GPT_LP_HPP

#include <vector>

#include "gpt/linalg.hpp"

namespace gpt {
namespace lp {

enum class Status { Optimal, Infeasible, Unbounded };

/// General-form linear program over free or sign-constrained variables:
///   minimize objective . x
///   subject to eq_A x = eq_b, ge_A x >= ge_b, x_j >= 0 where nonneg[j].
struct Problem {
  int n_vars = 0;
  Vec objective;          // empty => pure feasibility
  Mat eq_A;               // may have zero rows
  Vec eq_b;
  Mat ge_A;               // may have zero rows
  Vec ge_b;
  std::vector<bool> nonneg;  // empty => all free

  static Problem feasibility(int n_vars);
  void add_eq(const Vec& row, double rhs);
  void add_ge(const Vec& row, double rhs);
};

/// On Infeasible the Farkas certificate (y_eq, y_ge) satisfies
///   y_eq^T eq_A + y_ge^T ge_A = 0,  y_ge >= 0,  y_eq^T eq_b + y_ge^T ge_b > 0,
/// which rules out any feasible point.
struct Solution {
  Status status = Status::Infeasible;
  Vec x;
  double objective = 0.0;
  Vec farkas_eq;
  Vec farkas_ge;
};

Solution solve(const Problem& problem, double tol = 1e-9);

/// Residual checks for a claimed Farkas certificate; returns the violation
/// margin y_eq.eq_b + y_ge.ge_b when the sign and combination conditions
/// hold within tol, and a non-positive value otherwise.
double farkas_margin(const Problem& problem, const Vec& y_eq, const Vec& y_ge, double tol = 1e-9);

}  // namespace lp
}  // namespace gpt

#endif
