#include "gpt/dsl/parse.hpp"

#include <cctype>
#include <charconv>
#include <cstddef>
#include <string>
#include <vector>

namespace gpt {
namespace dsl {
namespace {

enum class Tok {
  KwSystem,
  KwState,
  KwEffect,
  KwMap,
  KwTest,
  KwCircuit,
  KwEval,
  KwCheck,
  KwOn,
  KwWith,
  Name,
  Number,
  Colon,
  Equals,
  Comma,
  Star,
  Amp,
  Plus,
  Minus,
  Arrow,
  Seq,
  LParen,
  RParen,
  LBrack,
  RBrack,
  LBrace,
  RBrace,
  End,
};

struct Token {
  Tok kind = Tok::End;
  std::string text;
  double number = 0.0;
  Span span;
  std::size_t offset = 0;  // byte offset of the first character
};

bool statement_keyword(Tok kind) {
  switch (kind) {
    case Tok::KwSystem:
    case Tok::KwState:
    case Tok::KwEffect:
    case Tok::KwMap:
    case Tok::KwTest:
    case Tok::KwCircuit:
    case Tok::KwEval:
    case Tok::KwCheck:
      return true;
    default:
      return false;
  }
}

const char* token_label(Tok kind) {
  switch (kind) {
    case Tok::KwSystem: return "'system'";
    case Tok::KwState: return "'state'";
    case Tok::KwEffect: return "'effect'";
    case Tok::KwMap: return "'map'";
    case Tok::KwTest: return "'test'";
    case Tok::KwCircuit: return "'circuit'";
    case Tok::KwEval: return "'eval'";
    case Tok::KwCheck: return "'check'";
    case Tok::KwOn: return "'on'";
    case Tok::KwWith: return "'with'";
    case Tok::Name: return "a name";
    case Tok::Number: return "a number";
    case Tok::Colon: return "':'";
    case Tok::Equals: return "'='";
    case Tok::Comma: return "','";
    case Tok::Star: return "'*'";
    case Tok::Amp: return "'&'";
    case Tok::Plus: return "'+'";
    case Tok::Minus: return "'-'";
    case Tok::Arrow: return "'->'";
    case Tok::Seq: return "'>>'";
    case Tok::LParen: return "'('";
    case Tok::RParen: return "')'";
    case Tok::LBrack: return "'['";
    case Tok::RBrack: return "']'";
    case Tok::LBrace: return "'{'";
    case Tok::RBrace: return "'}'";
    case Tok::End: return "end of input";
  }
  return "?";
}

Tok keyword_kind(const std::string& word) {
  if (word == "system") return Tok::KwSystem;
  if (word == "state") return Tok::KwState;
  if (word == "effect") return Tok::KwEffect;
  if (word == "map") return Tok::KwMap;
  if (word == "test") return Tok::KwTest;
  if (word == "circuit") return Tok::KwCircuit;
  if (word == "eval") return Tok::KwEval;
  if (word == "check") return Tok::KwCheck;
  if (word == "on") return Tok::KwOn;
  if (word == "with") return Tok::KwWith;
  return Tok::Name;
}

struct Lexer {
  const std::string& src;
  std::size_t pos = 0;
  int line = 1;
  int column = 1;
  std::vector<SourceError>& errors;

  Lexer(const std::string& s, std::vector<SourceError>& errs) : src(s), errors(errs) {}

  void advance() {
    if (src[pos] == '\n') {
      ++line;
      column = 1;
    } else {
      ++column;
    }
    ++pos;
  }

  void skip_trivia() {
    while (pos < src.size()) {
      char c = src[pos];
      if (c == '#') {
        while (pos < src.size() && src[pos] != '\n') advance();
      } else if (std::isspace(static_cast<unsigned char>(c))) {
        advance();
      } else {
        return;
      }
    }
  }

  Token make(Tok kind, std::size_t start, int start_line, int start_col) {
    Token t;
    t.kind = kind;
    t.text = src.substr(start, pos - start);
    t.span = {start_line, start_col, static_cast<int>(pos - start)};
    t.offset = start;
    return t;
  }

  std::vector<Token> run() {
    std::vector<Token> out;
    while (true) {
      skip_trivia();
      if (pos >= src.size()) break;
      std::size_t start = pos;
      int sl = line, sc = column;
      char c = src[pos];
      if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
        while (pos < src.size() &&
               (std::isalnum(static_cast<unsigned char>(src[pos])) || src[pos] == '_')) {
          advance();
        }
        Token t = make(Tok::Name, start, sl, sc);
        t.kind = keyword_kind(t.text);
        out.push_back(t);
        continue;
      }
      if (std::isdigit(static_cast<unsigned char>(c))) {
        while (pos < src.size() && std::isdigit(static_cast<unsigned char>(src[pos]))) advance();
        if (pos < src.size() && src[pos] == '.') {
          advance();
          while (pos < src.size() && std::isdigit(static_cast<unsigned char>(src[pos]))) advance();
        }
        if (pos < src.size() && (src[pos] == 'e' || src[pos] == 'E')) {
          std::size_t mark = pos;
          advance();
          if (pos < src.size() && (src[pos] == '+' || src[pos] == '-')) advance();
          if (pos < src.size() && std::isdigit(static_cast<unsigned char>(src[pos]))) {
            while (pos < src.size() && std::isdigit(static_cast<unsigned char>(src[pos]))) {
              advance();
            }
          } else {
            // "2e" with no exponent digits: the 'e' starts a following name.
            pos = mark;
          }
        }
        Token t = make(Tok::Number, start, sl, sc);
        double value = 0.0;
        auto res = std::from_chars(t.text.data(), t.text.data() + t.text.size(), value);
        if (res.ec != std::errc()) {
          errors.push_back({t.span, ErrorPhase::Lex, "malformed number '" + t.text + "'"});
          value = 0.0;
        }
        t.number = value;
        out.push_back(t);
        continue;
      }
      switch (c) {
        case ':': advance(); out.push_back(make(Tok::Colon, start, sl, sc)); continue;
        case '=': advance(); out.push_back(make(Tok::Equals, start, sl, sc)); continue;
        case ',': advance(); out.push_back(make(Tok::Comma, start, sl, sc)); continue;
        case '*': advance(); out.push_back(make(Tok::Star, start, sl, sc)); continue;
        case '&': advance(); out.push_back(make(Tok::Amp, start, sl, sc)); continue;
        case '+': advance(); out.push_back(make(Tok::Plus, start, sl, sc)); continue;
        case '(': advance(); out.push_back(make(Tok::LParen, start, sl, sc)); continue;
        case ')': advance(); out.push_back(make(Tok::RParen, start, sl, sc)); continue;
        case '[': advance(); out.push_back(make(Tok::LBrack, start, sl, sc)); continue;
        case ']': advance(); out.push_back(make(Tok::RBrack, start, sl, sc)); continue;
        case '{': advance(); out.push_back(make(Tok::LBrace, start, sl, sc)); continue;
        case '}': advance(); out.push_back(make(Tok::RBrace, start, sl, sc)); continue;
        case '-':
          advance();
          if (pos < src.size() && src[pos] == '>') {
            advance();
            out.push_back(make(Tok::Arrow, start, sl, sc));
          } else {
            out.push_back(make(Tok::Minus, start, sl, sc));
          }
          continue;
        case '>':
          advance();
          if (pos < src.size() && src[pos] == '>') {
            advance();
            out.push_back(make(Tok::Seq, start, sl, sc));
          } else {
            errors.push_back({{sl, sc, 1}, ErrorPhase::Lex, "stray '>' (did you mean '>>'?)"});
          }
          continue;
        default:
          errors.push_back(
              {{sl, sc, 1}, ErrorPhase::Lex, std::string("unexpected character '") + c + "'"});
          advance();
          continue;
      }
    }
    Token end;
    end.kind = Tok::End;
    end.span = {line, column, 0};
    end.offset = src.size();
    out.push_back(end);
    return out;
  }
};

/// Thrown inside one statement; recovery happens at the statement loop.
struct Bail {};

struct Parser {
  const std::vector<Token>& toks;
  std::size_t at = 0;
  std::vector<SourceError>& errors;

  Parser(const std::vector<Token>& t, std::vector<SourceError>& errs) : toks(t), errors(errs) {}

  const Token& peek(int ahead = 0) const {
    std::size_t i = at + static_cast<std::size_t>(ahead);
    return i < toks.size() ? toks[i] : toks.back();
  }
  const Token& prev() const { return toks[at == 0 ? 0 : at - 1]; }
  bool check(Tok kind) const { return peek().kind == kind; }
  const Token& take() {
    const Token& t = toks[at];
    if (at + 1 < toks.size()) ++at;
    return t;
  }

  [[noreturn]] void fail(const Token& where, const std::string& message) {
    Span span = where.span;
    if (span.length == 0) span.length = 1;
    errors.push_back({span, ErrorPhase::Parse, message});
    throw Bail{};
  }

  const Token& expect(Tok kind, const std::string& context) {
    if (!check(kind)) {
      fail(peek(), std::string("expected ") + token_label(kind) + " " + context + ", found " +
                       token_label(peek().kind));
    }
    return take();
  }

  std::string expect_name(const std::string& context) {
    return expect(Tok::Name, context).text;
  }

  double signed_number(const std::string& context) {
    double sign = 1.0;
    if (check(Tok::Minus)) {
      take();
      sign = -1.0;
    } else if (check(Tok::Plus)) {
      take();
    }
    const Token& t = expect(Tok::Number, context);
    return sign * t.number;
  }

  int integer(const std::string& context) {
    const Token& t = expect(Tok::Number, context);
    double v = t.number;
    int i = static_cast<int>(v);
    if (static_cast<double>(i) != v) {
      fail(t, "expected an integer " + context);
    }
    return i;
  }

  // ---- value expressions ----

  std::complex<double> matrix_entry() {
    double sign = 1.0;
    if (check(Tok::Minus)) {
      take();
      sign = -1.0;
    } else if (check(Tok::Plus)) {
      take();
    }
    const Token& first = expect(Tok::Number, "in a matrix entry");
    double a = sign * first.number;
    if (check(Tok::Name) && peek().text == "i") {
      take();
      return {0.0, a};  // pure imaginary: "2i", "-0.5i"
    }
    if (check(Tok::Plus) || check(Tok::Minus)) {
      double imag_sign = take().kind == Tok::Minus ? -1.0 : 1.0;
      const Token& second = expect(Tok::Number, "after the sign in a complex entry");
      if (!(check(Tok::Name) && peek().text == "i")) {
        fail(peek(), "expected 'i' to close a complex entry");
      }
      take();
      return {a, imag_sign * second.number};
    }
    return {a, 0.0};
  }

  MatrixLit matrix_literal() {
    MatrixLit lit;
    expect(Tok::LBrack, "to open a matrix literal");
    while (true) {
      expect(Tok::LBrack, "to open a matrix row");
      std::vector<std::complex<double>> row;
      if (!check(Tok::RBrack)) {
        row.push_back(matrix_entry());
        while (check(Tok::Comma)) {
          take();
          row.push_back(matrix_entry());
        }
      }
      expect(Tok::RBrack, "to close a matrix row");
      lit.rows.push_back(std::move(row));
      if (check(Tok::Comma)) {
        take();
        continue;
      }
      break;
    }
    expect(Tok::RBrack, "to close a matrix literal");
    return lit;
  }

  Expr expr() {
    Expr e;
    const Token& start = peek();
    e.span = start.span;
    if (check(Tok::LBrack)) {
      e.node = matrix_literal();
    } else if (check(Tok::Name)) {
      std::string name = take().text;
      if (check(Tok::LParen)) {
        take();
        BuiltinCall call;
        call.name = std::move(name);
        if (!check(Tok::RParen)) {
          call.args.push_back(signed_number("in a builtin argument"));
          while (check(Tok::Comma)) {
            take();
            call.args.push_back(signed_number("in a builtin argument"));
          }
        }
        expect(Tok::RParen, "to close the builtin call");
        e.node = std::move(call);
      } else {
        e.node = NameRef{std::move(name)};
      }
    } else {
      fail(start, std::string("expected a value expression, found ") + token_label(start.kind));
    }
    e.span.length = static_cast<int>(prev().offset + prev().text.size() - start.offset);
    return e;
  }

  // ---- circuit expressions ----

  CPrimary cprimary() {
    CPrimary p;
    const Token& start = peek();
    p.span = start.span;
    if (check(Tok::LParen)) {
      take();
      std::vector<CExpr> inner;
      inner.push_back(cexpr());
      expect(Tok::RParen, "to close the circuit group");
      p.sub = std::move(inner);
    } else if (check(Tok::Name)) {
      p.name = take().text;
    } else {
      fail(start,
           std::string("expected a circuit element or '(', found ") + token_label(start.kind));
    }
    p.span.length = static_cast<int>(prev().offset + prev().text.size() - start.offset);
    return p;
  }

  CParallel cparallel() {
    CParallel par;
    par.factors.push_back(cprimary());
    while (check(Tok::Amp)) {
      take();
      par.factors.push_back(cprimary());
    }
    return par;
  }

  CExpr cexpr() {
    CExpr e;
    e.steps.push_back(cparallel());
    while (check(Tok::Seq)) {
      take();
      e.steps.push_back(cparallel());
    }
    return e;
  }

  // ---- statements ----

  SystemStmt system_stmt() {
    SystemStmt s;
    s.name = expect_name("after 'system'");
    if (check(Tok::Equals)) {
      take();
      s.kind = SystemKind::Composite;
      s.parts.push_back(expect_name("after '='"));
      expect(Tok::Star, "between composite factors");
      s.parts.push_back(expect_name("after '*'"));
      while (check(Tok::Star)) {
        take();
        s.parts.push_back(expect_name("after '*'"));
      }
      return s;
    }
    expect(Tok::Colon, "after the system name");
    const Token& theory = expect(Tok::Name, "naming the theory");
    if (theory.text == "classical" || theory.text == "quantum") {
      s.kind = theory.text == "classical" ? SystemKind::Classical : SystemKind::Quantum;
      expect(Tok::LParen, "before the dimension");
      s.dim = integer("as the dimension");
      expect(Tok::RParen, "after the dimension");
    } else if (theory.text == "boxworld") {
      s.kind = SystemKind::Boxworld;
      s.dim = 2;  // gbit leaf
    } else {
      fail(theory, "unknown theory '" + theory.text + "' (expected classical, quantum, or boxworld)");
    }
    return s;
  }

  StateStmt state_stmt() {
    StateStmt s;
    s.name = expect_name("after 'state'");
    expect(Tok::KwOn, "after the state name");
    s.system = expect_name("naming the system");
    expect(Tok::Equals, "before the state value");
    s.value = expr();
    return s;
  }

  EffectStmt effect_stmt() {
    EffectStmt s;
    s.name = expect_name("after 'effect'");
    expect(Tok::KwOn, "after the effect name");
    s.system = expect_name("naming the system");
    expect(Tok::Equals, "before the effect value");
    s.value = expr();
    return s;
  }

  MapStmt map_stmt() {
    MapStmt s;
    s.name = expect_name("after 'map'");
    expect(Tok::Colon, "after the map name");
    s.input = expect_name("naming the input system");
    expect(Tok::Arrow, "between input and output systems");
    s.output = expect_name("naming the output system");
    expect(Tok::Equals, "before the map value");
    s.value = expr();
    return s;
  }

  TestStmt test_stmt() {
    TestStmt s;
    s.name = expect_name("after 'test'");
    expect(Tok::Colon, "after the test name");
    s.input = expect_name("naming the input system");
    expect(Tok::Arrow, "between input and output systems");
    s.output = expect_name("naming the output system");
    expect(Tok::Equals, "before the branch list");
    expect(Tok::LBrace, "to open the branch list");
    s.branches.push_back(expr());
    while (check(Tok::Comma)) {
      take();
      s.branches.push_back(expr());
    }
    expect(Tok::RBrace, "to close the branch list");
    return s;
  }

  CircuitStmt circuit_stmt() {
    CircuitStmt s;
    s.name = expect_name("after 'circuit'");
    expect(Tok::Equals, "before the circuit expression");
    s.body = cexpr();
    return s;
  }

  EvalStmt eval_stmt() {
    EvalStmt s;
    s.target = expect_name("after 'eval'");
    return s;
  }

  CheckStmt check_stmt() {
    CheckStmt s;
    s.axiom = expect_name("after 'check'");
    expect(Tok::KwOn, "after the axiom name");
    s.target = expect_name("naming the check target");
    if (check(Tok::KwWith)) {
      take();
      while (true) {
        std::string key = expect_name("as an option key");
        expect(Tok::Equals, "after the option key");
        double value = signed_number("as the option value");
        s.args.emplace_back(std::move(key), value);
        if (check(Tok::Comma)) {
          take();
          continue;
        }
        break;
      }
    }
    return s;
  }

  void synchronize() {
    while (!check(Tok::End) && !statement_keyword(peek().kind)) take();
  }

  Program run() {
    Program program;
    while (!check(Tok::End)) {
      if (!statement_keyword(peek().kind)) {
        Span span = peek().span;
        if (span.length == 0) span.length = 1;
        errors.push_back({span, ErrorPhase::Parse,
                          std::string("expected a statement keyword, found ") +
                              token_label(peek().kind)});
        take();
        synchronize();
        continue;
      }
      const Token& head = take();
      Statement stmt;
      stmt.span = head.span;
      try {
        switch (head.kind) {
          case Tok::KwSystem: stmt.node = system_stmt(); break;
          case Tok::KwState: stmt.node = state_stmt(); break;
          case Tok::KwEffect: stmt.node = effect_stmt(); break;
          case Tok::KwMap: stmt.node = map_stmt(); break;
          case Tok::KwTest: stmt.node = test_stmt(); break;
          case Tok::KwCircuit: stmt.node = circuit_stmt(); break;
          case Tok::KwEval: stmt.node = eval_stmt(); break;
          case Tok::KwCheck: stmt.node = check_stmt(); break;
          default: break;
        }
      } catch (const Bail&) {
        synchronize();
        continue;
      }
      stmt.span.length = static_cast<int>(prev().offset + prev().text.size() - head.offset);
      program.statements.push_back(std::move(stmt));
    }
    return program;
  }
};

}  // namespace

const char* to_string(ErrorPhase phase) {
  switch (phase) {
    case ErrorPhase::Lex: return "lex";
    case ErrorPhase::Parse: return "parse";
    case ErrorPhase::Resolve: return "resolve";
    case ErrorPhase::Type: return "type";
  }
  return "?";
}

ParseResult parse(const std::string& source) {
  ParseResult result;
  Lexer lexer(source, result.errors);
  std::vector<Token> tokens = lexer.run();
  Parser parser(tokens, result.errors);
  result.program = parser.run();
  return result;
}

}  // namespace dsl
}  // namespace gpt
