#ifndef GPT_THEORY_HPP
#define GPT_THEORY_HPP

#include <memory>
#include <random>
#include <vector>

#include "gpt/value.hpp"

namespace gpt {

using Rng = std::mt19937_64;

/// A rule-set turning abstract shapes into concrete representation spaces:
/// validity predicates, canonical discard effects, vertex/reversible
/// enumerators where the state space is polyhedral, and seeded samplers
/// everywhere. Implementations are stateless and shareable.
class TheoryModel {
public:
  virtual ~TheoryModel() = default;

  virtual TheoryId id() const = 0;

  /// Representation dimension of a leaf shape; throws BadShape when the leaf
  /// is not meaningful in this theory.
  virtual int leaf_rep_dim(int leaf_dim) const = 0;

  SystemRef system(const Shape& shape) const;
  SystemRef trivial_system() const { return system(Shape::trivial()); }

  virtual bool valid_state(const State& state, double tol = kDefaultTol) const = 0;
  virtual bool valid_effect(const Effect& effect, double tol = kDefaultTol) const = 0;
  virtual bool valid_transformation(const Transformation& t, double tol = kDefaultTol) const = 0;
  /// Branches individually valid and their coarse-graining deterministic.
  bool valid_test(const Test& test, double tol = kDefaultTol) const;

  /// Discard effect of a leaf (all-ones / identity coords / normalization
  /// functional). Composites take Kronecker products of the leaf units.
  virtual Vec leaf_unit(int leaf_dim) const = 0;
  Vec unit_coords(const SystemRef& sys) const;

  /// Polyhedral theories enumerate their pure states exactly; quantum only
  /// samples (the pure manifold is a continuum).
  virtual bool has_vertex_enumeration(const SystemRef& sys) const = 0;
  virtual std::vector<Vec> pure_state_vertices(const SystemRef& sys) const = 0;

  /// Finite reversible groups (permutations, square symmetries) enumerate;
  /// unitary groups sample only.
  virtual bool has_finite_reversibles(const SystemRef& sys) const = 0;
  virtual std::vector<Mat> reversible_group(const SystemRef& sys) const = 0;

  virtual State random_state(const SystemRef& sys, Rng& rng, bool pure) const = 0;
  virtual Test random_test(const SystemRef& in, const SystemRef& out, int n_outcomes,
                           Rng& rng) const = 0;
  virtual Transformation reversible_sample(const SystemRef& sys, Rng& rng) const = 0;
  /// Pure (atomic) sub-transformation with matching wire types.
  virtual Transformation sample_pure_transformation(const SystemRef& in, const SystemRef& out,
                                                    Rng& rng) const = 0;

  /// Canonical full observation-tests spanning the state space; used as the
  /// default measurement choices for marginal checks.
  virtual std::vector<Test> fiducial_observation_tests(const SystemRef& sys) const = 0;
};

const TheoryModel& theory(TheoryId id);

SystemRef make_system(TheoryId id, const Shape& shape);

/// Composite of two systems of the same theory; the trivial system is the
/// unit of this product. Throws TheoryMismatch across theories.
SystemRef compose_systems(const SystemRef& a, const SystemRef& b);

}  // namespace gpt

#endif
