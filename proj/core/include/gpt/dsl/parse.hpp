#ifndef GPT_DSL_PARSE_HPP
#define GPT_DSL_PARSE_HPP

#include <string>
#include <vector>

#include "gpt/dsl/ast.hpp"

namespace gpt {
namespace dsl {

struct ParseResult {
  Program program;
  std::vector<SourceError> errors;
  bool ok() const { return errors.empty(); }
};

/// Parses a full program. Statements that fail to parse are skipped after
/// recording the first error inside them; recovery resumes at the next
/// statement keyword so independent mistakes all surface in one pass.
ParseResult parse(const std::string& source);

}  // namespace dsl
}  // namespace gpt

#endif
