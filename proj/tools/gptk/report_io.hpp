#ifndef GPTK_REPORT_IO_HPP
#define GPTK_REPORT_IO_HPP

#include <string>
#include <vector>

#include "gpt/report.hpp"
#include "run_config.hpp"

namespace gptk {

/// Renders the report in the configured format. JSON keys are fixed:
/// {version, config, items:[{kind, name, verdict|distribution, witness?,
/// deviation?, ms}]}; text is one item per line in the same column order.
std::string emit_report(const RunConfig& config, const std::vector<ReportItem>& items);

/// Serializes witness data as a standalone program: system declarations plus
/// one state/effect/map statement per witness entry, replayable through the
/// parser.
std::string witness_program(const std::vector<gpt::WitnessItem>& witness);

/// Lifts a check report into a report row (verdict, deviation, witness).
ReportItem item_from_check(const gpt::CheckReport& report, const std::string& kind,
                           const std::string& name);

}  // namespace gptk

#endif
