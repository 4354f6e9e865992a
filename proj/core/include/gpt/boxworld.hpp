#ifndef GPT_BOXWORLD_HPP
#define GPT_BOXWORLD_HPP

#include <vector>

#include "gpt/theory.hpp"

namespace gpt {

/// Gbit theory: square state space per leaf, composites under the maximal
/// tensor product. Representation per gbit is (x, y, w) with validity
/// |x| + |y| <= w and the unit effect reading off w. States and effects on
/// one or two gbits enumerate exactly; wider composites only admit product
/// constructions, and validity checks needing vertex lists throw BadShape.
class BoxworldTheory final : public TheoryModel {
public:
  TheoryId id() const override { return TheoryId::Boxworld; }
  int leaf_rep_dim(int leaf_dim) const override;

  bool valid_state(const State& state, double tol = kDefaultTol) const override;
  bool valid_effect(const Effect& effect, double tol = kDefaultTol) const override;
  bool valid_transformation(const Transformation& t, double tol = kDefaultTol) const override;

  Vec leaf_unit(int leaf_dim) const override;

  bool has_vertex_enumeration(const SystemRef& sys) const override;
  std::vector<Vec> pure_state_vertices(const SystemRef& sys) const override;

  bool has_finite_reversibles(const SystemRef& sys) const override;
  std::vector<Mat> reversible_group(const SystemRef& sys) const override;

  State random_state(const SystemRef& sys, Rng& rng, bool pure) const override;
  Test random_test(const SystemRef& in, const SystemRef& out, int n_outcomes,
                   Rng& rng) const override;
  Transformation reversible_sample(const SystemRef& sys, Rng& rng) const override;
  Transformation sample_pure_transformation(const SystemRef& in, const SystemRef& out,
                                            Rng& rng) const override;

  std::vector<Test> fiducial_observation_tests(const SystemRef& sys) const override;
};

const BoxworldTheory& boxworld_theory();

namespace boxworld {

/// Square vertices in cyclic order: (1,0,1), (0,1,1), (-1,0,1), (0,-1,1).
const std::vector<Vec>& gbit_vertices();

/// Extreme effects (s, t, 1)/2; index pairs {0,1} and {2,3} are the two
/// fiducial binary measurements.
const std::vector<Vec>& gbit_extreme_effects();

/// Dihedral symmetries of the square acting on (x, y), identity first.
const std::vector<Mat>& gbit_symmetries();

/// The 24 extreme bipartite states of the maximal tensor product: 16
/// products plus 8 PR-box-like vertices with maximally mixed marginals.
const std::vector<Vec>& two_gbit_vertices();

/// All Kronecker products of per-leaf extreme effects for the shape, as
/// rows of a matrix; nonnegativity against these rows is state validity.
Mat product_effect_rows(const Shape& shape);

int gbit_count(const Shape& shape);

}  // namespace boxworld
}  // namespace gpt

#endif
