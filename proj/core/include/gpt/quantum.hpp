#ifndef GPT_QUANTUM_HPP
#define GPT_QUANTUM_HPP

#include <vector>

#include "gpt/theory.hpp"

namespace gpt {

/// Finite-dimensional quantum theory over a real coordinate representation:
/// Hermitian operators are expanded in an orthonormal Hermitian basis
/// (identity plus generalized Gell-Mann, Kronecker-factored over composite
/// shapes), so states, effects and channels share the real-vector data path
/// with the other theories. Complex arithmetic lives behind the conversion
/// helpers below.
class QuantumTheory final : public TheoryModel {
public:
  TheoryId id() const override { return TheoryId::Quantum; }
  int leaf_rep_dim(int leaf_dim) const override;

  bool valid_state(const State& state, double tol) const override;
  bool valid_effect(const Effect& effect, double tol) const override;
  bool valid_transformation(const Transformation& t, double tol) const override;

  Vec leaf_unit(int leaf_dim) const override;

  bool has_vertex_enumeration(const SystemRef&) const override { return false; }
  std::vector<Vec> pure_state_vertices(const SystemRef& sys) const override;

  bool has_finite_reversibles(const SystemRef&) const override { return false; }
  std::vector<Mat> reversible_group(const SystemRef& sys) const override;

  State random_state(const SystemRef& sys, Rng& rng, bool pure) const override;
  Test random_test(const SystemRef& in, const SystemRef& out, int n_outcomes,
                   Rng& rng) const override;
  Transformation reversible_sample(const SystemRef& sys, Rng& rng) const override;
  Transformation sample_pure_transformation(const SystemRef& in, const SystemRef& out,
                                            Rng& rng) const override;

  std::vector<Test> fiducial_observation_tests(const SystemRef& sys) const override;
};

const QuantumTheory& quantum_theory();

namespace quantum {

/// Product of leaf Hilbert dimensions.
int hilbert_dim(const SystemRef& sys);

/// Kronecker-factored orthonormal Hermitian basis matching the system's
/// coordinate order.
const std::vector<CMat>& operator_basis(const SystemRef& sys);

Vec coords_of_operator(const SystemRef& sys, const CMat& hermitian);
CMat operator_of_coords(const SystemRef& sys, const Vec& coords);

CMat density_matrix(const State& state);
State state_from_density(const SystemRef& sys, const CMat& rho);
CMat effect_operator(const Effect& effect);
Effect effect_from_operator(const SystemRef& sys, const CMat& op);

State pure_state(const SystemRef& sys, const CVec& amplitudes);

Transformation channel_from_kraus(const SystemRef& in, const SystemRef& out,
                                  const std::vector<CMat>& kraus);
Transformation unitary_channel(const SystemRef& sys, const CMat& unitary);

/// Choi matrix sum_ij T(E_ij) (x) E_ij, size (d_out*d_in)^2.
CMat choi_matrix(const Transformation& t);

/// Kraus family recovered from the Choi eigendecomposition; eigenvalues
/// below `threshold` (relative to the largest) are dropped.
std::vector<CMat> kraus_of(const Transformation& t, double threshold = 1e-12);

double state_purity(const State& state);  // tr(rho^2) of the normalized state

Rng::result_type mix_seed(Rng& rng);
CMat random_unitary(int dim, Rng& rng);
CVec random_pure_vector(int dim, Rng& rng);

}  // namespace quantum
}  // namespace gpt

#endif
