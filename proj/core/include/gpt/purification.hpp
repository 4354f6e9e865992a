#ifndef GPT_PURIFICATION_HPP
#define GPT_PURIFICATION_HPP

#include <cstdint>
#include <string>

#include "gpt/report.hpp"
#include "gpt/theory.hpp"

namespace gpt {

struct PurificationResult {
  bool found = false;
  State input;                // the state that was to be purified
  SystemRef environment;      // trivial when the input is already pure
  State pure_state;           // on system x environment when found
  int exhaustion_bound = -1;  // search bound behind a negative verdict
  std::string note;
};

/// Quantum: constructive, environment dimension = rank of the density
/// matrix. Classical: every pure joint state is a product of point masses,
/// so mixed states are unpurifiable; environments up to max_env are
/// enumerated to witness that. Boxworld: vertex search over the one
/// enumerable composite (system gbit + environment gbit).
PurificationResult purify_state(const TheoryModel& model, const State& state, int max_env = 8);

/// Connects two purifications with a reversible map on the environment:
/// quantum builds it from the two amplitude matrices (orthogonal Procrustes),
/// finite theories exhaust the reversible group. Certified when the
/// connection closes within tol, fails with the pair as witness otherwise.
/// Throws MarginalMismatch when the marginals differ and TypeMismatch when
/// the environments do.
CheckReport check_purification_uniqueness(const TheoryModel& model,
                                          const PurificationResult& p1,
                                          const PurificationResult& p2, double tol = 1e-9);

struct DilationResult {
  SystemRef environment;
  Transformation reversible;  // unitary channel on system x environment
  State env_state;            // pure initial environment state
  double residual = 0.0;      // worst marginal mismatch over probe states
};

/// Stinespring-style dilation of a trace-preserving quantum channel with
/// equal input and output dimension: Kraus family, isometry, unitary
/// completion; verified against the channel on 20 seeded states.
DilationResult dilate_channel(const Transformation& channel);

/// Searches for reversible classical dilations: permutation dynamics on
/// system x environment with environment sizes up to max_env. With a pure
/// (point-mass) environment a dilation exists exactly for deterministic
/// channels; allow_mixed_env extends the search to arbitrary environment
/// states via one feasibility LP per induced channel family.
CheckReport classical_dilation_search(const Transformation& channel, int max_env = 8,
                                      bool allow_mixed_env = false);

}  // namespace gpt

#endif
