#ifndef GPT_VALUE_HPP
#define GPT_VALUE_HPP

#include <string>
#include <vector>

#include "gpt/linalg.hpp"
#include "gpt/shape.hpp"

namespace gpt {

/// A (possibly sub-normalized) state: real coordinate vector over the
/// system's representation space. weight() is the pairing with the
/// deterministic effect; normalized states have weight 1.
struct State {
  SystemRef system;
  Vec coords;

  double weight() const;
  bool is_normalized(double tol = kDefaultTol) const;
};

/// Dual vector; pairing with any valid normalized state lands in [0, 1].
struct Effect {
  SystemRef system;
  Vec coords;
};

/// Linear map between representation spaces, matrix of size
/// rep_dim(output) x rep_dim(input).
struct Transformation {
  SystemRef input;
  SystemRef output;
  Mat matrix;

  State apply(const State& state) const;
  Effect pullback(const Effect& effect) const;

  static Transformation identity(const SystemRef& system);
  static Transformation from_state(const State& state);   // trivial -> system
  static Transformation from_effect(const Effect& effect); // system -> trivial

  bool is_state_like() const { return input.is_trivial(); }
  bool is_effect_like() const { return output.is_trivial(); }
  State as_state() const;
  Effect as_effect() const;
};

/// Outcome-labeled family of transformations realized by one device use.
/// All branches share input and output; the sum of branches must be a
/// deterministic (weight-preserving) transformation.
struct Test {
  SystemRef input;
  SystemRef output;
  std::vector<Transformation> branches;
  std::vector<std::string> labels;  // one per branch

  std::size_t arity() const { return branches.size(); }

  /// Checks branch shapes and labels; does not run theory validity.
  void check_structure() const;
};

/// Joint distribution over tuples of outcome labels.
struct OutcomeDistribution {
  std::vector<std::vector<std::string>> labels;
  Vec probs;

  double total() const { return probs.sum(); }
  /// Index of an exact label tuple, or -1.
  int find(const std::vector<std::string>& tuple) const;
};

double pairing(const Effect& effect, const State& state);

}  // namespace gpt

#endif
