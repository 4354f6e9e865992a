#ifndef GPT_PURITY_HPP
#define GPT_PURITY_HPP

#include <cstdint>
#include <vector>

#include "gpt/report.hpp"
#include "gpt/theory.hpp"

namespace gpt {

/// Rank decisions use a relative singular-value cutoff; LP feasibility gets
/// its own margin. Both pinned project-wide.
inline constexpr double kRankTol = 1e-7;
inline constexpr double kLpTol = 1e-8;

struct PurityResult {
  bool pure = false;
  // Mixed states decompose into a convex combination of at least two
  // distinct valid states (eigenstates / vertices).
  std::vector<double> weights;
  std::vector<State> components;
};

/// Quantum: spectral rank of the density matrix; classical and boxworld:
/// vertex identity, with the LP convex combination as the mixed witness.
/// Throws InvalidState unless the input is valid and normalized.
PurityResult is_pure_state(const TheoryModel& model, const State& state);

/// Quantum: Choi rank one; classical: a single nonzero entry; boxworld:
/// extreme ray of the valid-map cone, decided by LP on small systems and by
/// the active-constraint rank on larger ones (the two agree; see tests).
/// The zero transformation counts as pure (only trivial refinements).
/// Throws InvalidTransformation on invalid input.
bool is_pure_transformation(const TheoryModel& model, const Transformation& t);

/// Samples pure pairs, composes sequentially and in parallel, and checks the
/// results stay pure. First counterexample (if any) lands in the witness.
CheckReport check_purity_preservation(const TheoryModel& model, int n_samples,
                                      std::uint64_t seed);

}  // namespace gpt

#endif
