#ifndef GPT_POLYTOPE_HPP
#define GPT_POLYTOPE_HPP

#include <optional>
#include <vector>

#include "gpt/linalg.hpp"

namespace gpt {
namespace polytope {

/// Vertices of {x : ge_A x >= ge_b, eq_A x = eq_b} by brute force over
/// active-constraint subsets. Intended for the small H-descriptions that
/// arise from gbit composites; cost grows combinatorially with row count.
std::vector<Vec> enumerate_vertices(const Mat& ge_A, const Vec& ge_b,
                                    const Mat& eq_A, const Vec& eq_b,
                                    double tol = kDefaultTol);

/// Coefficients expressing target as a convex combination of the given
/// points (optionally excluding one index), or nullopt when impossible.
std::optional<Vec> convex_combination(const std::vector<Vec>& points, const Vec& target,
                                      int excluded = -1, double tol = kDefaultTol);

/// True when no listed point lies in the convex hull of the others.
bool is_minimal_vertex_set(const std::vector<Vec>& points, double tol = kDefaultTol);

/// True when x is an extreme ray of {y : ge_A y >= 0}: the face of the cone
/// active at x, sliced by a normalizing hyperplane through x, is the single
/// point x. Decided by a pair of bounding LPs per coordinate.
bool is_extreme_ray(const Mat& ge_A, const Vec& x, double tol = kDefaultTol);

}  // namespace polytope
}  // namespace gpt

#endif
