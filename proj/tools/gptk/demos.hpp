#ifndef GPTK_DEMOS_HPP
#define GPTK_DEMOS_HPP

#include <vector>

#include "run_config.hpp"

namespace gptk {

/// Known demos: singlet-purification, classical-impossibility, no-cloning,
/// die-coarse-graining. Throws UnknownDemo otherwise.
std::vector<ReportItem> run_demo(const RunConfig& cfg);

}  // namespace gptk

#endif
