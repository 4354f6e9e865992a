#ifndef GPT_DSL_AST_HPP
#define GPT_DSL_AST_HPP

#include <complex>
#include <optional>
#include <string>
#include <utility>
#include <variant>
#include <vector>

namespace gpt {
namespace dsl {

/// Half-open source region; line and column are 1-based.
struct Span {
  int line = 1;
  int column = 1;
  int length = 0;
};

enum class ErrorPhase { Lex, Parse, Resolve, Type };

struct SourceError {
  Span span;
  ErrorPhase phase = ErrorPhase::Parse;
  std::string message;
};

const char* to_string(ErrorPhase phase);

/// Value expressions: a catalog builtin with numeric arguments, a matrix
/// literal (complex entries; purely real outside quantum contexts), or a
/// reference to a previously declared object.
struct BuiltinCall {
  std::string name;
  std::vector<double> args;
  bool parens = false;  // zero-argument calls may omit "()"
};

struct MatrixLit {
  std::vector<std::vector<std::complex<double>>> rows;
};

struct NameRef {
  std::string name;
};

struct Expr {
  std::variant<BuiltinCall, MatrixLit, NameRef> node;
  Span span;
};

/// Circuit expressions: ">>" chains of "&" bundles of primaries. The parse
/// keeps redundant parentheses as nested sub-expressions so printing is a
/// strict inverse.
struct CExpr;

struct CPrimary {
  std::string name;                      // set when this is a plain reference
  std::optional<std::vector<CExpr>> sub; // single-element when parenthesized
  Span span;
};

struct CParallel {
  std::vector<CPrimary> factors;  // "&" chain, left to right
};

struct CExpr {
  std::vector<CParallel> steps;  // ">>" chain, left to right
};

enum class SystemKind { Classical, Quantum, Boxworld, Composite };

struct SystemStmt {
  std::string name;
  SystemKind kind = SystemKind::Classical;
  int dim = 0;                     // leaf declarations
  std::vector<std::string> parts;  // composite declarations: NAME * NAME ...
};

struct StateStmt {
  std::string name;
  std::string system;
  Expr value;
};

struct EffectStmt {
  std::string name;
  std::string system;
  Expr value;
};

struct MapStmt {
  std::string name;
  std::string input;
  std::string output;
  Expr value;
};

struct TestStmt {
  std::string name;
  std::string input;
  std::string output;
  std::vector<Expr> branches;
};

struct CircuitStmt {
  std::string name;
  CExpr body;
};

struct EvalStmt {
  std::string target;
};

struct CheckStmt {
  std::string axiom;
  std::string target;
  std::vector<std::pair<std::string, double>> args;  // "with k=v, ..."
};

struct Statement {
  std::variant<SystemStmt, StateStmt, EffectStmt, MapStmt, TestStmt, CircuitStmt, EvalStmt,
               CheckStmt>
      node;
  Span span;
};

struct Program {
  std::vector<Statement> statements;
};

}  // namespace dsl
}  // namespace gpt

#endif
