#ifndef GPT_ENTANGLEMENT_HPP
#define GPT_ENTANGLEMENT_HPP

#include "gpt/report.hpp"
#include "gpt/theory.hpp"

namespace gpt {

struct EntanglementResult {
  bool entangled = false;
  // Product witness when separable: state == factor_a x factor_b.
  State factor_a;
  State factor_b;
};

/// Pure bipartite states only (throws NotPure otherwise, TypeMismatch when
/// the system is not a two-component composite). Quantum: Schmidt rank;
/// polytope theories: comparison against the products of component
/// vertices. Separable verdicts return the factors.
EntanglementResult is_entangled_pure(const TheoryModel& model, const State& state_ab);

/// Searches for a pure bipartite state with a mixed marginal. Quantum is
/// constructive (maximally entangled pair); polytope theories enumerate
/// composite vertices for partners up to max_partner. A negative verdict is
/// the purification obstruction: with no entangled states, mixed states
/// cannot be purified.
CheckReport entanglement_existence(const TheoryModel& model, const SystemRef& system,
                                   int max_partner = 8);

}  // namespace gpt

#endif
