#ifndef GPT_DSL_PRINT_HPP
#define GPT_DSL_PRINT_HPP

#include <string>

#include "gpt/dsl/ast.hpp"

namespace gpt {
namespace dsl {

/// Canonical textual form: one statement per line, test branches indented by
/// two spaces, shortest round-tripping number spellings. parse(print(p))
/// reproduces p exactly.
std::string print(const Program& program);
std::string print(const Statement& statement);
std::string print(const Expr& expr);
std::string print(const CExpr& cexpr);

/// Shortest decimal spelling that parses back to exactly this double.
std::string format_number(double value);

}  // namespace dsl
}  // namespace gpt

#endif
