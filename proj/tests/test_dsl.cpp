#include <doctest.h>

#include <string>
#include <vector>

#include "gpt/circuit.hpp"
#include "gpt/dsl/ast.hpp"
#include "gpt/dsl/lower.hpp"
#include "gpt/dsl/parse.hpp"
#include "gpt/dsl/print.hpp"
#include "gpt/quantum.hpp"
#include "gpt/theory.hpp"

#include "support/dsl_gen.hpp"

using namespace gpt;

namespace {

const char* kDieProgram = R"(system Die : classical(6)
state roll on Die = uniform(6)
effect odd on Die = [[1, 0, 1, 0, 1, 0]]
circuit parity = roll >> odd
eval parity
)";

const char* kBellProgram = R"(system Q : quantum(2)
system QQ = Q * Q
state pair on QQ = singlet
map had : Q -> Q = [[0.7071067811865476, 0.7071067811865476], [0.7071067811865476, -0.7071067811865476]]
test meas : Q -> trivial = {
  [[1, 0], [0, 0]],
  [[0, 0], [0, 1]]
}
circuit bell = pair >> (had & had) >> (meas & meas)
eval bell
check no_signalling on pair
)";

std::string reprint(const std::string& source) {
  const auto r = dsl::parse(source);
  REQUIRE(r.errors.empty());
  return dsl::print(r.program);
}

}  // namespace

TEST_CASE("parse-print round trips on 200 generated programs") {
  Rng rng(2024);
  for (int trial = 0; trial < 200; ++trial) {
    const dsl::Program prog = gpt_tests::random_program(rng);
    const std::string text = dsl::print(prog);
    const auto back = dsl::parse(text);
    REQUIRE_MESSAGE(back.errors.empty(), "trial " << trial << ":\n" << text);
    CHECK_MESSAGE(gpt_tests::ast_equal(prog, back.program), "trial " << trial << ":\n"
                                                                     << text);
    // Printing is idempotent byte for byte.
    CHECK(dsl::print(back.program) == text);
  }
}

TEST_CASE("fixture programs reprint to themselves") {
  CHECK(reprint(kDieProgram) == kDieProgram);
  CHECK(reprint(kBellProgram) == kBellProgram);
}

TEST_CASE("spans point into the source text") {
  const std::string source = kDieProgram;
  const auto r = dsl::parse(source);
  REQUIRE(r.errors.empty());
  REQUIRE(r.program.statements.size() == 5);

  // Statement spans start at their keyword, 1-based.
  CHECK(r.program.statements[0].span.line == 1);
  CHECK(r.program.statements[0].span.column == 1);
  CHECK(r.program.statements[3].span.line == 4);

  // The state expression span covers exactly "uniform(6)".
  const auto& st = std::get<dsl::StateStmt>(r.program.statements[1].node);
  std::vector<std::string> lines;
  std::string cur;
  for (char ch : source) {
    if (ch == '\n') {
      lines.push_back(cur);
      cur.clear();
    } else
      cur += ch;
  }
  const dsl::Span span = st.value.span;
  const std::string snippet =
      lines[static_cast<std::size_t>(span.line - 1)].substr(
          static_cast<std::size_t>(span.column - 1), static_cast<std::size_t>(span.length));
  CHECK(snippet == "uniform(6)");
}

TEST_CASE("parser reports multiple errors and recovers at statement keywords") {
  const char* bad = R"(system A : classical(2)
state s on A = uniform(
map broken A -> A = [[1, 0], [0, 1]]
state ok on A = uniform(2)
)";
  const auto r = dsl::parse(bad);
  CHECK(r.errors.size() == 2);
  for (const auto& e : r.errors) CHECK(e.phase == dsl::ErrorPhase::Parse);
  // Recovery keeps the surrounding statements.
  REQUIRE(r.program.statements.size() >= 2);
  CHECK(std::holds_alternative<dsl::SystemStmt>(r.program.statements[0].node));
  CHECK(std::holds_alternative<dsl::StateStmt>(r.program.statements.back().node));
}

TEST_CASE("diagnostics are deterministic across repeated runs") {
  const char* bad = R"(system A : classical(2)
state s on A = fiction
state s on A = uniform(2)
effect e on Missing = [[1, 0]]
check teleportation on s
circuit c = s >> ghost
)";
  std::vector<std::string> renders;
  for (int run = 0; run < 3; ++run) {
    const auto parsed = dsl::parse(bad);
    REQUIRE(parsed.errors.empty());
    const auto lowered = dsl::lower(parsed.program);
    std::string all;
    for (const auto& e : lowered.errors) {
      all += std::to_string(e.span.line) + ":" + std::to_string(e.span.column) + " " +
             to_string(e.phase) + " " + e.message + "\n";
    }
    renders.push_back(all);
  }
  CHECK(renders[0] == renders[1]);
  CHECK(renders[1] == renders[2]);
  // Five independent mistakes: unknown state name, duplicate declaration,
  // undeclared system, unknown axiom, undeclared circuit atom.
  const auto lowered = dsl::lower(dsl::parse(bad).program);
  CHECK(lowered.errors.size() == 5);
  for (std::size_t i = 1; i < lowered.errors.size(); ++i) {
    const auto& prev = lowered.errors[i - 1].span;
    const auto& cur = lowered.errors[i].span;
    CHECK((prev.line < cur.line || (prev.line == cur.line && prev.column <= cur.column)));
  }
}

TEST_CASE("lowering the die program evaluates to the expected distribution") {
  const auto parsed = dsl::parse(kDieProgram);
  REQUIRE(parsed.errors.empty());
  const auto lowered = dsl::lower(parsed.program);
  std::string first_error = lowered.errors.empty() ? std::string() : lowered.errors.front().message;
  REQUIRE_MESSAGE(lowered.errors.empty(), first_error);

  REQUIRE(lowered.program.circuits.count("parity") == 1);
  const auto result = evaluate(lowered.program.circuits.at("parity"));
  CHECK(result.distribution.total() == doctest::Approx(1.0).epsilon(1e-12));
  // The effect atom completes to a binary test {odd, unit - odd}.
  const int hit = result.distribution.find({"0", "0"});
  REQUIRE(hit >= 0);
  CHECK(result.distribution.probs(hit) == doctest::Approx(0.5).epsilon(1e-12));

  REQUIRE(lowered.program.actions.size() == 1);
  CHECK(lowered.program.actions[0].kind == dsl::Action::Kind::Eval);
  CHECK(lowered.program.actions[0].target == "parity");
}

TEST_CASE("lowering the bell program wires composites and check actions") {
  const auto parsed = dsl::parse(kBellProgram);
  REQUIRE(parsed.errors.empty());
  const auto lowered = dsl::lower(parsed.program);
  std::string first_error = lowered.errors.empty() ? std::string() : lowered.errors.front().message;
  REQUIRE_MESSAGE(lowered.errors.empty(), first_error);

  const auto result = evaluate(lowered.program.circuits.at("bell"));
  REQUIRE(result.distribution.probs.size() == 4);
  // H x H preserves the singlet, so the statistics stay anti-correlated.
  // The last two label entries are the measurement outcomes.
  double anti = 0.0, corr = 0.0;
  for (std::size_t i = 0; i < result.distribution.labels.size(); ++i) {
    const auto& tuple = result.distribution.labels[i];
    REQUIRE(tuple.size() >= 2);
    const std::string& a = tuple[tuple.size() - 2];
    const std::string& b = tuple[tuple.size() - 1];
    (a == b ? corr : anti) += result.distribution.probs(static_cast<int>(i));
  }
  CHECK(anti == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(corr == doctest::Approx(0.0).epsilon(1e-12));

  REQUIRE(lowered.program.actions.size() == 2);
  CHECK(lowered.program.actions[1].kind == dsl::Action::Kind::Check);
  CHECK(lowered.program.actions[1].axiom == "no_signalling");
  CHECK(lowered.program.actions[1].target == "pair");
}

TEST_CASE("check statements accept tuned arguments") {
  const char* source = R"(system Q : quantum(2)
check causality on Q with seed=5, samples=20, tol=1e-10
)";
  const auto lowered = dsl::lower(dsl::parse(source).program);
  REQUIRE(lowered.errors.empty());
  REQUIRE(lowered.program.actions.size() == 1);
  const auto& args = lowered.program.actions[0].args;
  REQUIRE(args.size() == 3);
  CHECK(args[0].first == "seed");
  CHECK(args[0].second == 5.0);
  CHECK(args[2].first == "tol");
  CHECK(args[2].second == 1e-10);
}

TEST_CASE("type errors carry the right kinds and poisoning suppresses echoes") {
  struct Case {
    const char* source;
    const char* fragment;
  };
  const Case cases[] = {
      // complex entries outside quantum
      {"system A : classical(2)\nstate s on A = [[1i, 0]]\n", "complex"},
      // ragged matrix literal
      {"system Q : quantum(2)\nmap m : Q -> Q = [[1, 0], [1]]\n", "BadMatrix"},
      // invalid state coordinates
      {"system A : classical(2)\nstate s on A = [[0.6, 0.6]]\n", "InvalidState"},
      // singlet pinned to a non-composite system
      {"system Q : quantum(2)\nstate s on Q = singlet\n", "BadParams"},
  };
  for (const auto& c : cases) {
    const auto lowered = dsl::lower(dsl::parse(c.source).program);
    REQUIRE_MESSAGE(!lowered.errors.empty(), c.source);
    CHECK_MESSAGE(lowered.errors[0].message.find(c.fragment) != std::string::npos,
                  lowered.errors[0].message);
  }

  // One root cause, one diagnostic: dependents of a poisoned name are quiet.
  const char* chain = R"(system A : classical(2)
state s on A = [[2, 2]]
circuit c = s >> s
eval c
)";
  const auto lowered = dsl::lower(dsl::parse(chain).program);
  CHECK(lowered.errors.size() == 1);
}

TEST_CASE("catalog names bind to the declared system dimensions") {
  const char* source = R"(system T : classical(3)
state s on T = point_mass(1)
circuit c = s
)";
  const auto lowered = dsl::lower(dsl::parse(source).program);
  // A bare preparation circuit is open (dangling output), which is an error
  // at the eval stage but fine to declare; no errors expected here.
  REQUIRE(lowered.errors.empty());
  const auto& st = lowered.program.states.at("s");
  CHECK(st.system.rep_dim() == 3);
  CHECK(st.coords(1) == doctest::Approx(1.0));
}

TEST_CASE("reserved names and arity mismatches are resolve errors") {
  const char* trivial_clash = "system trivial : classical(2)\n";
  auto lowered = dsl::lower(dsl::parse(trivial_clash).program);
  CHECK(lowered.errors.size() == 1);

  const char* arity = R"(system A : classical(2)
state s on A = uniform(2)
state t on A = uniform(2)
effect e on A = [[1, 0]]
circuit c = (s & t) >> e
)";
  lowered = dsl::lower(dsl::parse(arity).program);
  REQUIRE(lowered.errors.size() == 1);
  CHECK(lowered.errors[0].message.find("outputs") != std::string::npos);
}

TEST_CASE("complex literals survive printing with full precision") {
  const char* source =
      "system Q : quantum(2)\n"
      "map m : Q -> Q = [[0.5+0.5i, -1i], [1-0.5i, 0.1]]\n";
  const auto parsed = dsl::parse(source);
  REQUIRE(parsed.errors.empty());
  const std::string printed = dsl::print(parsed.program);
  const auto back = dsl::parse(printed);
  REQUIRE(back.errors.empty());
  CHECK(gpt_tests::ast_equal(parsed.program, back.program));
  CHECK(printed.find("0.5+0.5i") != std::string::npos);
  CHECK(printed.find("-1i") != std::string::npos);
  CHECK(printed.find("1-0.5i") != std::string::npos);
}
