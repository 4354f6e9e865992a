#ifndef GPT_CLASSICAL_HPP
#define GPT_CLASSICAL_HPP

#include "gpt/theory.hpp"

namespace gpt {

/// Finite probability theory. States are sub-normalized probability vectors,
/// effects lie in [0,1]^d entrywise, transformations are column-substochastic
/// matrices. Composites multiply outcome counts, left index major.
class ClassicalTheory final : public TheoryModel {
public:
  TheoryId id() const override { return TheoryId::Classical; }
  int leaf_rep_dim(int leaf_dim) const override;

  bool valid_state(const State& state, double tol) const override;
  bool valid_effect(const Effect& effect, double tol) const override;
  bool valid_transformation(const Transformation& t, double tol) const override;

  Vec leaf_unit(int leaf_dim) const override;

  bool has_vertex_enumeration(const SystemRef&) const override { return true; }
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

const ClassicalTheory& classical_theory();

}  // namespace gpt

#endif
