#ifndef GPT_CAUSALITY_HPP
#define GPT_CAUSALITY_HPP

#include <cstdint>
#include <vector>

#include "gpt/report.hpp"
#include "gpt/theory.hpp"

namespace gpt {

/// Samples a preparation-test and two different downstream tests, and checks
/// the preparation's marginal distribution ignores the downstream choice.
/// Also coarse-grains sampled full observation-tests and compares them to
/// the canonical discard effect (uniqueness of the deterministic effect).
CheckReport check_causality(const TheoryModel& model, const SystemRef& sys, int n_samples,
                            std::uint64_t seed, double tol = kDefaultTol);

/// Joint statistics of a bipartite state under every pairing of local
/// observation tests; asserts each party's marginal is independent of the
/// other party's choice. Reports the worst deviation.
CheckReport check_no_signalling(const TheoryModel& model, const State& state_ab,
                                const std::vector<Test>& tests_a,
                                const std::vector<Test>& tests_b, double tol = kDefaultTol);

}  // namespace gpt

#endif
