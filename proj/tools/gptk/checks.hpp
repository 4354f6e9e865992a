#ifndef GPTK_CHECKS_HPP
#define GPTK_CHECKS_HPP

#include <chrono>
#include <string>
#include <vector>

#include "gpt/theory.hpp"
#include "gpt/value.hpp"
#include "run_config.hpp"

namespace gptk {

/// CLI axiom spellings use hyphens, the embedded language uses underscores.
std::string underscored(std::string axiom);

/// Axioms whose target is a system (the rest take a state).
bool axiom_takes_system(const std::string& axiom_us);

/// Runs one check against an explicit target, with bounds and seeds from the
/// config. Axiom names arrive in underscore form.
ReportItem run_check_on_system(const std::string& axiom_us, const gpt::SystemRef& sys,
                               const RunConfig& cfg);
ReportItem run_check_on_state(const std::string& axiom_us, const gpt::State& state,
                              const RunConfig& cfg);

/// `check` subcommand: builds the canonical target for cfg.axiom / cfg.theory
/// / cfg.dim and delegates.
std::vector<ReportItem> run_check_cli(const RunConfig& cfg);

/// Default probe family for no-cloning on this system.
std::vector<gpt::State> default_cloning_probes(const gpt::SystemRef& sys);

/// Canonical correlated bipartite state per theory (singlet / correlated
/// uniform / PR-type vertex), used by the no-signalling default target.
gpt::State default_bipartite_state(gpt::TheoryId theory, int dim);

/// Canonical mixed state per theory, used by the purification default target.
gpt::State default_mixed_state(gpt::TheoryId theory, int dim);

double elapsed_ms_since(const std::chrono::steady_clock::time_point& start);

}  // namespace gptk

#endif
