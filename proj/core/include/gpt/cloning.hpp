#ifndef GPT_CLONING_HPP
#define GPT_CLONING_HPP

#include <vector>

#include "gpt/lp.hpp"
#include "gpt/report.hpp"
#include "gpt/theory.hpp"

namespace gpt {

/// Farkas certificate for the cloning LP; margin is the certified violation
/// y . b > 0 of any would-be feasible cloner.
struct InfeasibilityCertificate {
  lp::Problem problem;
  Vec y_eq;
  Vec y_ge;
  double margin = 0.0;
};

struct CloningVerdict {
  bool cloner_exists = false;
  Transformation cloner;  // system -> system x system when found
  InfeasibilityCertificate certificate;
  CheckReport report;
};

/// Decides whether one deterministic transformation T on A x A broadcasts
/// every probe simultaneously: T (s x blank) = s x s, where the blank
/// ancilla is the theory's ready state (first point mass, |0>, first gbit
/// vertex). Explicit constructions cover
/// classical probes and jointly distinguishable quantum probes; otherwise an
/// LP over the cloner entries runs with outcome-probability constraints, and
/// infeasibility ships with a checkable Farkas certificate. Probes are
/// deduplicated; one distinct probe admits a prepare-and-replace cloner.
/// Throws TooFewProbes on an empty probe list and ProbeNotPure on mixed
/// probes.
CloningVerdict no_cloning_check(const TheoryModel& model, const SystemRef& system,
                                const std::vector<State>& probes);

}  // namespace gpt

#endif
