#include "gpt/dsl/print.hpp"

#include <charconv>
#include <sstream>
#include <system_error>

namespace gpt {
namespace dsl {
namespace {

void print_number(std::ostream& os, double value) {
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof(buf), value);
  os.write(buf, res.ptr - buf);
}

void print_entry(std::ostream& os, const std::complex<double>& z) {
  if (z.imag() == 0.0) {
    print_number(os, z.real());
    return;
  }
  if (z.real() == 0.0) {
    print_number(os, z.imag());
    os << 'i';
    return;
  }
  print_number(os, z.real());
  if (z.imag() > 0.0) os << '+';
  print_number(os, z.imag());
  os << 'i';
}

void print_expr(std::ostream& os, const Expr& expr) {
  if (const auto* call = std::get_if<BuiltinCall>(&expr.node)) {
    os << call->name << '(';
    for (std::size_t i = 0; i < call->args.size(); ++i) {
      if (i) os << ", ";
      print_number(os, call->args[i]);
    }
    os << ')';
  } else if (const auto* lit = std::get_if<MatrixLit>(&expr.node)) {
    os << '[';
    for (std::size_t r = 0; r < lit->rows.size(); ++r) {
      if (r) os << ", ";
      os << '[';
      for (std::size_t c = 0; c < lit->rows[r].size(); ++c) {
        if (c) os << ", ";
        print_entry(os, lit->rows[r][c]);
      }
      os << ']';
    }
    os << ']';
  } else {
    os << std::get<NameRef>(expr.node).name;
  }
}

void print_cexpr(std::ostream& os, const CExpr& cexpr) {
  for (std::size_t s = 0; s < cexpr.steps.size(); ++s) {
    if (s) os << " >> ";
    const CParallel& par = cexpr.steps[s];
    for (std::size_t f = 0; f < par.factors.size(); ++f) {
      if (f) os << " & ";
      const CPrimary& p = par.factors[f];
      if (p.sub) {
        os << '(';
        print_cexpr(os, p.sub->front());
        os << ')';
      } else {
        os << p.name;
      }
    }
  }
}

struct StatementPrinter {
  std::ostream& os;

  void operator()(const SystemStmt& s) {
    os << "system " << s.name;
    switch (s.kind) {
      case SystemKind::Classical:
        os << " : classical(" << s.dim << ')';
        break;
      case SystemKind::Quantum:
        os << " : quantum(" << s.dim << ')';
        break;
      case SystemKind::Boxworld:
        os << " : boxworld";
        break;
      case SystemKind::Composite:
        os << " = ";
        for (std::size_t i = 0; i < s.parts.size(); ++i) {
          if (i) os << " * ";
          os << s.parts[i];
        }
        break;
    }
  }

  void operator()(const StateStmt& s) {
    os << "state " << s.name << " on " << s.system << " = ";
    print_expr(os, s.value);
  }

  void operator()(const EffectStmt& s) {
    os << "effect " << s.name << " on " << s.system << " = ";
    print_expr(os, s.value);
  }

  void operator()(const MapStmt& s) {
    os << "map " << s.name << " : " << s.input << " -> " << s.output << " = ";
    print_expr(os, s.value);
  }

  void operator()(const TestStmt& s) {
    os << "test " << s.name << " : " << s.input << " -> " << s.output << " = {\n";
    for (std::size_t i = 0; i < s.branches.size(); ++i) {
      os << "  ";
      print_expr(os, s.branches[i]);
      if (i + 1 < s.branches.size()) os << ',';
      os << '\n';
    }
    os << '}';
  }

  void operator()(const CircuitStmt& s) {
    os << "circuit " << s.name << " = ";
    print_cexpr(os, s.body);
  }

  void operator()(const EvalStmt& s) { os << "eval " << s.target; }

  void operator()(const CheckStmt& s) {
    os << "check " << s.axiom << " on " << s.target;
    if (!s.args.empty()) {
      os << " with ";
      for (std::size_t i = 0; i < s.args.size(); ++i) {
        if (i) os << ", ";
        os << s.args[i].first << '=';
        print_number(os, s.args[i].second);
      }
    }
  }
};

}  // namespace

std::string format_number(double value) {
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof(buf), value);
  return std::string(buf, res.ptr);
}

std::string print(const Expr& expr) {
  std::ostringstream os;
  print_expr(os, expr);
  return os.str();
}

std::string print(const CExpr& cexpr) {
  std::ostringstream os;
  print_cexpr(os, cexpr);
  return os.str();
}

std::string print(const Statement& statement) {
  std::ostringstream os;
  std::visit(StatementPrinter{os}, statement.node);
  return os.str();
}

std::string print(const Program& program) {
  std::ostringstream os;
  for (const Statement& s : program.statements) {
    std::visit(StatementPrinter{os}, s.node);
    os << '\n';
  }
  return os.str();
}

}  // namespace dsl
}  // namespace gpt
