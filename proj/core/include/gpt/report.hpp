#ifndef GPT_REPORT_HPP
#define GPT_REPORT_HPP

#include <cstdint>
#include <string>
#include <vector>

#include "gpt/value.hpp"

namespace gpt {

enum class Verdict {
  HoldsOnSamples,  // sampled check, no counterexample
  Fails,           // counterexample in hand
  Impossible,      // exhaustive search ruled a construction out
  Certified,       // explicit construction or certificate in hand
};

const char* to_string(Verdict verdict);

/// Named piece of a counterexample or construction. States and effects ride
/// along as state-like / effect-like transformations so one slot fits all.
struct WitnessItem {
  std::string role;
  Transformation value;
};

/// Outcome of one axiom check. A fails or impossible verdict must carry
/// enough witness data to re-check the claim without re-running the search.
struct CheckReport {
  std::string axiom;
  TheoryId theory = TheoryId::Classical;
  Verdict verdict = Verdict::Fails;
  int samples = 0;
  std::uint64_t seed = 0;
  double tolerance = kDefaultTol;
  double deviation = 0.0;     // worst numeric deviation observed
  int exhaustion_bound = -1;  // search bound behind an impossible verdict
  std::string note;
  std::vector<WitnessItem> witness;

  bool ok() const { return verdict != Verdict::Fails; }
};

}  // namespace gpt

#endif
