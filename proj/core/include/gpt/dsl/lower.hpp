#ifndef GPT_DSL_LOWER_HPP
#define GPT_DSL_LOWER_HPP

#include <map>
#include <string>
#include <utility>
#include <vector>

#include "gpt/circuit.hpp"
#include "gpt/dsl/ast.hpp"
#include "gpt/theory.hpp"
#include "gpt/value.hpp"

namespace gpt {
namespace dsl {

/// A pending "eval" or "check" line, kept in program order.
struct Action {
  enum class Kind { Eval, Check };
  Kind kind = Kind::Eval;
  std::string axiom;   // check only
  std::string target;  // circuit name (eval) / system or state name (check)
  std::vector<std::pair<std::string, double>> args;
  Span span;
};

struct LoweredProgram {
  std::map<std::string, SystemRef> systems;
  std::map<std::string, State> states;
  std::map<std::string, Effect> effects;
  std::map<std::string, Transformation> maps;
  std::map<std::string, Test> tests;
  std::map<std::string, Circuit> circuits;
  std::vector<Action> actions;
};

struct LowerResult {
  LoweredProgram program;
  std::vector<SourceError> errors;
  bool ok() const { return errors.empty(); }
};

/// Resolves names (declarations precede uses, one namespace per kind) and
/// then builds theory objects, collecting one error per root cause:
/// statements depending on a failed declaration are skipped silently.
LowerResult lower(const Program& program);

/// Axiom names accepted by "check" statements.
bool known_axiom(const std::string& name);

}  // namespace dsl
}  // namespace gpt

#endif
