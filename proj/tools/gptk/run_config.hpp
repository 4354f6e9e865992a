#ifndef GPTK_RUN_CONFIG_HPP
#define GPTK_RUN_CONFIG_HPP

#include <cstdint>
#include <optional>
#include <string>

#include "gpt/value.hpp"

namespace gptk {

inline constexpr const char* kVersion = "0.1.0";

/// Everything a run depends on; all of it is echoed in the report so no
/// default stays hidden.
struct RunConfig {
  std::string command;        // eval | check | demo
  std::string format = "text";
  std::uint64_t seed = 0;
  int samples = 100;
  double tolerance = 1e-9;
  int max_env = 8;
  int max_partner = 8;
  std::string file;    // eval
  std::string axiom;   // check (hyphenated CLI spelling)
  std::string theory;  // check
  int dim = 2;         // check
  std::string demo;    // demo
};

/// One row of the report: either a verdict (checks) or a distribution
/// (evaluations), plus optional witness program text and deviation.
struct ReportItem {
  std::string kind;
  std::string name;
  std::string verdict;
  std::optional<gpt::OutcomeDistribution> distribution;
  std::string witness;
  std::optional<double> deviation;
  double ms = 0.0;
};

}  // namespace gptk

#endif
