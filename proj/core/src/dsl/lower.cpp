#include "gpt/dsl/lower.hpp"

#include <algorithm>
#include <set>
#include <string>
#include <utility>

#include "gpt/catalog.hpp"
#include "gpt/errors.hpp"
#include "gpt/quantum.hpp"

namespace gpt {
namespace dsl {
namespace {

const std::set<std::string>& axiom_names() {
  static const std::set<std::string> names = {
      "causality", "purity_preservation", "purification",
      "no_signalling", "no_cloning", "entanglement"};
  return names;
}

/// Axioms whose target is a declared system; the others take a state.
bool axiom_takes_system(const std::string& axiom) {
  return axiom == "causality" || axiom == "purity_preservation" || axiom == "no_cloning" ||
         axiom == "entanglement";
}

const std::set<std::string>& option_keys() {
  static const std::set<std::string> keys = {"seed", "samples", "tol", "max_env", "max_partner"};
  return keys;
}

enum class NameKind { System, StateK, EffectK, MapK, TestK, CircuitK };

const char* kind_word(NameKind kind) {
  switch (kind) {
    case NameKind::System: return "system";
    case NameKind::StateK: return "state";
    case NameKind::EffectK: return "effect";
    case NameKind::MapK: return "map";
    case NameKind::TestK: return "test";
    case NameKind::CircuitK: return "circuit";
  }
  return "?";
}

struct Lowerer {
  const Program& program;
  LoweredProgram out;
  std::vector<SourceError> errors;

  // Declarations seen so far in the resolve walk, then reused as "was
  // declared" lookups by the type walk (filled completely by then).
  std::set<std::string> declared[6];
  // Declared names whose build failed (or whose dependencies did); statements
  // depending on them are skipped without further errors.
  std::set<std::string> poisoned[6];
  std::vector<bool> resolve_ok;

  explicit Lowerer(const Program& p) : program(p), resolve_ok(p.statements.size(), true) {}

  bool is_declared(NameKind kind, const std::string& name) const {
    return declared[static_cast<int>(kind)].count(name) > 0;
  }
  bool is_poisoned(NameKind kind, const std::string& name) const {
    return poisoned[static_cast<int>(kind)].count(name) > 0;
  }
  void declare(NameKind kind, const std::string& name) {
    declared[static_cast<int>(kind)].insert(name);
  }
  void poison(NameKind kind, const std::string& name) {
    poisoned[static_cast<int>(kind)].insert(name);
  }

  void err(std::size_t stmt_index, const Span& span, ErrorPhase phase, std::string message) {
    Span s = span;
    if (s.length == 0) s.length = 1;
    errors.push_back({s, phase, std::move(message)});
    if (phase == ErrorPhase::Resolve) resolve_ok[stmt_index] = false;
  }

  // ---- resolve walk ----

  bool resolve_declaration(std::size_t i, const Span& span, NameKind kind,
                           const std::string& name) {
    if (name == "trivial") {
      err(i, span, ErrorPhase::Resolve, "'trivial' is a reserved name");
      return false;
    }
    if (is_declared(kind, name)) {
      err(i, span, ErrorPhase::Resolve,
          std::string("duplicate ") + kind_word(kind) + " name '" + name + "'");
      return false;
    }
    return true;
  }

  void require(std::size_t i, const Span& span, NameKind kind, const std::string& name) {
    if (!is_declared(kind, name)) {
      err(i, span, ErrorPhase::Resolve,
          std::string("no ") + kind_word(kind) + " named '" + name + "' has been declared");
    }
  }

  /// Map/test wire ends accept the reserved name "trivial".
  void require_side(std::size_t i, const Span& span, const std::string& name) {
    if (name == "trivial") return;
    require(i, span, NameKind::System, name);
  }

  void resolve_state_expr(std::size_t i, const Expr& e) {
    if (const auto* call = std::get_if<BuiltinCall>(&e.node)) {
      if (!is_catalog_state_name(call->name)) {
        err(i, e.span, ErrorPhase::Resolve, "unknown builtin '" + call->name + "'");
      }
    } else if (const auto* ref = std::get_if<NameRef>(&e.node)) {
      if (!is_declared(NameKind::StateK, ref->name) && !is_catalog_state_name(ref->name)) {
        err(i, e.span, ErrorPhase::Resolve,
            "'" + ref->name + "' is neither a declared state nor a builtin");
      }
    }
  }

  void resolve_effect_expr(std::size_t i, const Expr& e) {
    if (const auto* call = std::get_if<BuiltinCall>(&e.node)) {
      err(i, e.span, ErrorPhase::Resolve,
          "there are no builtin effects ('" + call->name + "')");
    } else if (const auto* ref = std::get_if<NameRef>(&e.node)) {
      require(i, e.span, NameKind::EffectK, ref->name);
    }
  }

  void resolve_map_expr(std::size_t i, const Expr& e) {
    if (const auto* call = std::get_if<BuiltinCall>(&e.node)) {
      if (!is_catalog_state_name(call->name)) {
        err(i, e.span, ErrorPhase::Resolve, "unknown builtin '" + call->name + "'");
      }
    } else if (const auto* ref = std::get_if<NameRef>(&e.node)) {
      bool known = is_declared(NameKind::MapK, ref->name) ||
                   is_declared(NameKind::StateK, ref->name) ||
                   is_declared(NameKind::EffectK, ref->name) ||
                   is_catalog_state_name(ref->name);
      if (!known) {
        err(i, e.span, ErrorPhase::Resolve,
            "'" + ref->name + "' does not name a map, state, effect, or builtin");
      }
    }
  }

  void resolve_cexpr(std::size_t i, const CExpr& ce) {
    for (const CParallel& par : ce.steps) {
      for (const CPrimary& p : par.factors) {
        if (p.sub) {
          resolve_cexpr(i, p.sub->front());
        } else {
          bool known = is_declared(NameKind::TestK, p.name) ||
                       is_declared(NameKind::MapK, p.name) ||
                       is_declared(NameKind::StateK, p.name) ||
                       is_declared(NameKind::EffectK, p.name);
          if (!known) {
            err(i, p.span, ErrorPhase::Resolve,
                "'" + p.name + "' does not name a test, map, state, or effect");
          }
        }
      }
    }
  }

  void resolve_walk() {
    for (std::size_t i = 0; i < program.statements.size(); ++i) {
      const Statement& stmt = program.statements[i];
      const Span& span = stmt.span;
      if (const auto* s = std::get_if<SystemStmt>(&stmt.node)) {
        bool fresh = resolve_declaration(i, span, NameKind::System, s->name);
        if (s->kind == SystemKind::Composite) {
          for (const std::string& part : s->parts) require(i, span, NameKind::System, part);
        }
        if (fresh) declare(NameKind::System, s->name);
      } else if (const auto* s = std::get_if<StateStmt>(&stmt.node)) {
        bool fresh = resolve_declaration(i, span, NameKind::StateK, s->name);
        require(i, span, NameKind::System, s->system);
        resolve_state_expr(i, s->value);
        if (fresh) declare(NameKind::StateK, s->name);
      } else if (const auto* s = std::get_if<EffectStmt>(&stmt.node)) {
        bool fresh = resolve_declaration(i, span, NameKind::EffectK, s->name);
        require(i, span, NameKind::System, s->system);
        resolve_effect_expr(i, s->value);
        if (fresh) declare(NameKind::EffectK, s->name);
      } else if (const auto* s = std::get_if<MapStmt>(&stmt.node)) {
        bool fresh = resolve_declaration(i, span, NameKind::MapK, s->name);
        require_side(i, span, s->input);
        require_side(i, span, s->output);
        if (s->input == "trivial" && s->output == "trivial") {
          err(i, span, ErrorPhase::Resolve,
              "cannot infer the theory of a map between trivial systems");
        }
        resolve_map_expr(i, s->value);
        if (fresh) declare(NameKind::MapK, s->name);
      } else if (const auto* s = std::get_if<TestStmt>(&stmt.node)) {
        bool fresh = resolve_declaration(i, span, NameKind::TestK, s->name);
        require_side(i, span, s->input);
        require_side(i, span, s->output);
        if (s->input == "trivial" && s->output == "trivial") {
          err(i, span, ErrorPhase::Resolve,
              "cannot infer the theory of a test between trivial systems");
        }
        for (const Expr& b : s->branches) resolve_map_expr(i, b);
        if (fresh) declare(NameKind::TestK, s->name);
      } else if (const auto* s = std::get_if<CircuitStmt>(&stmt.node)) {
        bool fresh = resolve_declaration(i, span, NameKind::CircuitK, s->name);
        resolve_cexpr(i, s->body);
        if (fresh) declare(NameKind::CircuitK, s->name);
      } else if (const auto* s = std::get_if<EvalStmt>(&stmt.node)) {
        require(i, span, NameKind::CircuitK, s->target);
      } else if (const auto* s = std::get_if<CheckStmt>(&stmt.node)) {
        if (!known_axiom(s->axiom)) {
          err(i, span, ErrorPhase::Resolve, "unknown axiom '" + s->axiom + "'");
        } else if (axiom_takes_system(s->axiom)) {
          if (!is_declared(NameKind::System, s->target)) {
            err(i, span, ErrorPhase::Resolve,
                "check " + s->axiom + " needs a declared system, and '" + s->target +
                    "' is not one");
          }
        } else if (!is_declared(NameKind::StateK, s->target)) {
          err(i, span, ErrorPhase::Resolve,
              "check " + s->axiom + " needs a declared state, and '" + s->target +
                  "' is not one");
        }
        for (const auto& kv : s->args) {
          if (!option_keys().count(kv.first)) {
            err(i, span, ErrorPhase::Resolve, "unknown option '" + kv.first + "'");
          }
        }
      }
    }
  }

  // ---- type walk helpers ----

  bool all_real(const MatrixLit& lit) {
    for (const auto& row : lit.rows)
      for (const auto& z : row)
        if (z.imag() != 0.0) return false;
    return true;
  }

  bool rectangular(const MatrixLit& lit) {
    for (const auto& row : lit.rows)
      if (row.size() != lit.rows.front().size()) return false;
    return !lit.rows.empty() && !lit.rows.front().empty();
  }

  Mat real_matrix(const MatrixLit& lit) {
    Mat m(lit.rows.size(), lit.rows.front().size());
    for (std::size_t r = 0; r < lit.rows.size(); ++r)
      for (std::size_t c = 0; c < lit.rows[r].size(); ++c) m(r, c) = lit.rows[r][c].real();
    return m;
  }

  CMat complex_matrix(const MatrixLit& lit) {
    CMat m(lit.rows.size(), lit.rows.front().size());
    for (std::size_t r = 0; r < lit.rows.size(); ++r)
      for (std::size_t c = 0; c < lit.rows[r].size(); ++c) m(r, c) = lit.rows[r][c];
    return m;
  }

  /// Shared literal checks; throws Error(BadMatrix) with a DSL-level message.
  void check_literal(const MatrixLit& lit, bool quantum_context) {
    if (!rectangular(lit)) {
      throw Error(ErrorKind::BadMatrix, "matrix literal must be rectangular and non-empty");
    }
    if (!quantum_context && !all_real(lit)) {
      throw Error(ErrorKind::BadMatrix,
                  "complex entries are only allowed in quantum matrix literals");
    }
  }

  State lower_state_expr(const SystemRef& sys, const Expr& e) {
    const TheoryModel& model = theory(sys.theory());
    if (const auto* call = std::get_if<BuiltinCall>(&e.node)) {
      return named_state(sys, call->name, call->args);
    }
    if (const auto* ref = std::get_if<NameRef>(&e.node)) {
      auto it = out.states.find(ref->name);
      if (it != out.states.end()) {
        if (it->second.system != sys) {
          throw Error(ErrorKind::TypeMismatch,
                      "state '" + ref->name + "' lives on " + it->second.system.str() +
                          ", not " + sys.str());
        }
        return it->second;
      }
      return named_state(sys, ref->name, {});
    }
    const auto& lit = std::get<MatrixLit>(e.node);
    bool quantum = sys.theory() == TheoryId::Quantum;
    check_literal(lit, quantum);
    int rows = static_cast<int>(lit.rows.size());
    int cols = static_cast<int>(lit.rows.front().size());
    State state;
    if (rows == 1 && cols == sys.rep_dim() && all_real(lit)) {
      state = State{sys, real_matrix(lit).row(0).transpose()};
    } else if (quantum && rows == cols && rows == quantum::hilbert_dim(sys)) {
      state = quantum::state_from_density(sys, complex_matrix(lit));
    } else {
      throw Error(ErrorKind::BadMatrix,
                  "a state literal on " + sys.str() + " must be 1 x " +
                      std::to_string(sys.rep_dim()) + " coordinates" +
                      (quantum ? " or a square density matrix" : ""));
    }
    if (!model.valid_state(state)) {
      throw Error(ErrorKind::InvalidState, "literal is not a valid state on " + sys.str());
    }
    return state;
  }

  Effect lower_effect_expr(const SystemRef& sys, const Expr& e) {
    const TheoryModel& model = theory(sys.theory());
    if (const auto* ref = std::get_if<NameRef>(&e.node)) {
      const Effect& found = out.effects.at(ref->name);
      if (found.system != sys) {
        throw Error(ErrorKind::TypeMismatch,
                    "effect '" + ref->name + "' lives on " + found.system.str() + ", not " +
                        sys.str());
      }
      return found;
    }
    const auto& lit = std::get<MatrixLit>(e.node);
    bool quantum = sys.theory() == TheoryId::Quantum;
    check_literal(lit, quantum);
    int rows = static_cast<int>(lit.rows.size());
    int cols = static_cast<int>(lit.rows.front().size());
    Effect effect;
    if (rows == 1 && cols == sys.rep_dim() && all_real(lit)) {
      effect = Effect{sys, real_matrix(lit).row(0).transpose()};
    } else if (quantum && rows == cols && rows == quantum::hilbert_dim(sys)) {
      effect = quantum::effect_from_operator(sys, complex_matrix(lit));
    } else {
      throw Error(ErrorKind::BadMatrix,
                  "an effect literal on " + sys.str() + " must be 1 x " +
                      std::to_string(sys.rep_dim()) + " coordinates" +
                      (quantum ? " or a square operator matrix" : ""));
    }
    if (!model.valid_effect(effect)) {
      throw Error(ErrorKind::InvalidTransformation, "literal is not a valid effect on " + sys.str());
    }
    return effect;
  }

  Transformation lower_map_expr(const SystemRef& in, const SystemRef& out_sys, const Expr& e) {
    const TheoryModel& model = theory(in.is_trivial() ? out_sys.theory() : in.theory());
    if (const auto* ref = std::get_if<NameRef>(&e.node)) {
      auto mit = out.maps.find(ref->name);
      if (mit != out.maps.end()) {
        if (mit->second.input != in || mit->second.output != out_sys) {
          throw Error(ErrorKind::TypeMismatch,
                      "map '" + ref->name + "' has type " + mit->second.input.str() + " -> " +
                          mit->second.output.str());
        }
        return mit->second;
      }
      if (in.is_trivial()) {
        auto sit = out.states.find(ref->name);
        if (sit != out.states.end()) {
          if (sit->second.system != out_sys) {
            throw Error(ErrorKind::TypeMismatch,
                        "state '" + ref->name + "' lives on " + sit->second.system.str() +
                            ", not " + out_sys.str());
          }
          return Transformation::from_state(sit->second);
        }
        if (is_catalog_state_name(ref->name)) {
          return Transformation::from_state(named_state(out_sys, ref->name, {}));
        }
      }
      if (out_sys.is_trivial()) {
        auto eit = out.effects.find(ref->name);
        if (eit != out.effects.end()) {
          if (eit->second.system != in) {
            throw Error(ErrorKind::TypeMismatch,
                        "effect '" + ref->name + "' lives on " + eit->second.system.str() +
                            ", not " + in.str());
          }
          return Transformation::from_effect(eit->second);
        }
      }
      throw Error(ErrorKind::TypeMismatch,
                  "'" + ref->name + "' does not fit a map of type " + in.str() + " -> " +
                      out_sys.str());
    }
    if (const auto* call = std::get_if<BuiltinCall>(&e.node)) {
      if (!in.is_trivial()) {
        throw Error(ErrorKind::TypeMismatch,
                    "builtin states only fit maps out of the trivial system");
      }
      return Transformation::from_state(named_state(out_sys, call->name, call->args));
    }
    const auto& lit = std::get<MatrixLit>(e.node);
    bool quantum = model.id() == TheoryId::Quantum;
    check_literal(lit, quantum);
    int rows = static_cast<int>(lit.rows.size());
    int cols = static_cast<int>(lit.rows.front().size());
    Transformation t;
    if (quantum && in.is_trivial() && rows == cols && rows == quantum::hilbert_dim(out_sys)) {
      t = Transformation::from_state(quantum::state_from_density(out_sys, complex_matrix(lit)));
    } else if (quantum && out_sys.is_trivial() && rows == cols &&
               rows == quantum::hilbert_dim(in)) {
      t = Transformation::from_effect(quantum::effect_from_operator(in, complex_matrix(lit)));
    } else if (quantum && !in.is_trivial() && !out_sys.is_trivial() &&
               rows == quantum::hilbert_dim(out_sys) && cols == quantum::hilbert_dim(in)) {
      t = quantum::channel_from_kraus(in, out_sys, {complex_matrix(lit)});
    } else if (rows == out_sys.rep_dim() && cols == in.rep_dim() && all_real(lit)) {
      t = Transformation{in, out_sys, real_matrix(lit)};
    } else {
      throw Error(ErrorKind::BadMatrix,
                  "a map literal of type " + in.str() + " -> " + out_sys.str() + " must be " +
                      std::to_string(out_sys.rep_dim()) + " x " + std::to_string(in.rep_dim()) +
                      " coordinates" + (quantum ? " or a Hilbert-space matrix" : ""));
    }
    if (!model.valid_transformation(t)) {
      throw Error(ErrorKind::InvalidTransformation,
                  "literal is not a valid transformation " + in.str() + " -> " + out_sys.str());
    }
    return t;
  }

  /// Wire side of a map or test declaration; "trivial" takes its theory from
  /// the opposite side.
  SystemRef side_system(const std::string& name, const std::string& other) {
    if (name != "trivial") return out.systems.at(name);
    return theory(out.systems.at(other).theory()).trivial_system();
  }

  bool side_available(const std::string& name) {
    if (name == "trivial") return true;
    return out.systems.count(name) > 0 && !is_poisoned(NameKind::System, name);
  }

  // ---- circuit assembly ----

  struct Ports {
    std::vector<PortRef> inputs;
    std::vector<PortRef> outputs;
  };

  /// Appends the node for one named atom and returns its port lists.
  Ports atom_ports(const CPrimary& p, std::vector<CircuitNode>& nodes) {
    Test test;
    if (auto it = out.tests.find(p.name); it != out.tests.end()) {
      test = it->second;
    } else if (auto it2 = out.maps.find(p.name); it2 != out.maps.end()) {
      test = Test{it2->second.input, it2->second.output, {it2->second}, {"0"}};
    } else if (auto it3 = out.states.find(p.name); it3 != out.states.end()) {
      const State& s = it3->second;
      if (!s.is_normalized()) {
        throw Error(ErrorKind::InvalidState,
                    "state '" + p.name + "' must be normalized to act as a preparation");
      }
      test = Test{theory(s.system.theory()).trivial_system(), s.system,
                  {Transformation::from_state(s)}, {"0"}};
    } else {
      const Effect& eff = out.effects.at(p.name);
      const TheoryModel& model = theory(eff.system.theory());
      Effect rest{eff.system, model.unit_coords(eff.system) - eff.coords};
      test = Test{eff.system, model.trivial_system(),
                  {Transformation::from_effect(eff), Transformation::from_effect(rest)},
                  {"0", "1"}};
    }
    const TheoryModel& model = theory(test.input.is_trivial() ? test.output.theory()
                                                              : test.input.theory());
    if (!model.valid_test(test)) {
      throw Error(ErrorKind::InvalidTransformation,
                  "'" + p.name + "' does not induce a valid test");
    }
    int node_index = static_cast<int>(nodes.size());
    nodes.push_back(CircuitNode{p.name, std::move(test)});
    Ports ports;
    int n_in = static_cast<int>(port_systems(nodes.back().test.input).size());
    int n_out = static_cast<int>(port_systems(nodes.back().test.output).size());
    for (int k = 0; k < n_in; ++k) ports.inputs.push_back({node_index, k});
    for (int k = 0; k < n_out; ++k) ports.outputs.push_back({node_index, k});
    return ports;
  }

  bool cexpr_available(const CExpr& ce) {
    for (const CParallel& par : ce.steps) {
      for (const CPrimary& p : par.factors) {
        if (p.sub) {
          if (!cexpr_available(p.sub->front())) return false;
          continue;
        }
        NameKind kinds[] = {NameKind::TestK, NameKind::MapK, NameKind::StateK, NameKind::EffectK};
        bool usable = false;
        for (NameKind k : kinds) {
          if (is_declared(k, p.name)) {
            usable = !is_poisoned(k, p.name);
            break;
          }
        }
        if (!usable) return false;
      }
    }
    return true;
  }

  Ports lower_cexpr(const CExpr& ce, std::vector<CircuitNode>& nodes, std::vector<Wire>& wires) {
    Ports total;
    bool first = true;
    std::vector<PortRef> frontier;
    for (const CParallel& par : ce.steps) {
      Ports step;
      for (const CPrimary& p : par.factors) {
        Ports part = p.sub ? lower_cexpr(p.sub->front(), nodes, wires) : atom_ports(p, nodes);
        step.inputs.insert(step.inputs.end(), part.inputs.begin(), part.inputs.end());
        step.outputs.insert(step.outputs.end(), part.outputs.begin(), part.outputs.end());
      }
      if (first) {
        total.inputs = step.inputs;
        first = false;
      } else {
        if (frontier.size() != step.inputs.size()) {
          throw Error(ErrorKind::TypeMismatch,
                      "cannot wire " + std::to_string(frontier.size()) + " outputs into " +
                          std::to_string(step.inputs.size()) + " inputs at '" +
                          print_step(par) + "'");
        }
        for (std::size_t k = 0; k < frontier.size(); ++k) {
          wires.push_back(
              {frontier[k].node, frontier[k].port, step.inputs[k].node, step.inputs[k].port});
        }
      }
      frontier = step.outputs;
    }
    total.outputs = frontier;
    return total;
  }

  static std::string print_step(const CParallel& par) {
    std::string s;
    for (std::size_t f = 0; f < par.factors.size(); ++f) {
      if (f) s += " & ";
      s += par.factors[f].sub ? "(...)" : par.factors[f].name;
    }
    return s;
  }

  // ---- type walk ----

  void type_walk() {
    for (std::size_t i = 0; i < program.statements.size(); ++i) {
      if (!resolve_ok[i]) continue;
      const Statement& stmt = program.statements[i];
      try {
        if (const auto* s = std::get_if<SystemStmt>(&stmt.node)) {
          type_system(i, *s, stmt.span);
        } else if (const auto* s = std::get_if<StateStmt>(&stmt.node)) {
          type_state(i, *s, stmt.span);
        } else if (const auto* s = std::get_if<EffectStmt>(&stmt.node)) {
          type_effect(i, *s, stmt.span);
        } else if (const auto* s = std::get_if<MapStmt>(&stmt.node)) {
          type_map(i, *s, stmt.span);
        } else if (const auto* s = std::get_if<TestStmt>(&stmt.node)) {
          type_test(i, *s, stmt.span);
        } else if (const auto* s = std::get_if<CircuitStmt>(&stmt.node)) {
          type_circuit(i, *s, stmt.span);
        } else if (const auto* s = std::get_if<EvalStmt>(&stmt.node)) {
          if (out.circuits.count(s->target) && !is_poisoned(NameKind::CircuitK, s->target)) {
            Action action;
            action.kind = Action::Kind::Eval;
            action.target = s->target;
            action.span = stmt.span;
            out.actions.push_back(std::move(action));
          }
        } else if (const auto* s = std::get_if<CheckStmt>(&stmt.node)) {
          type_check_stmt(i, *s, stmt.span);
        }
      } catch (const Error& ex) {
        err(i, stmt.span, ErrorPhase::Type, ex.what());
        poison_declared(stmt);
      }
    }
  }

  void poison_declared(const Statement& stmt) {
    if (const auto* s = std::get_if<SystemStmt>(&stmt.node)) {
      poison(NameKind::System, s->name);
    } else if (const auto* s = std::get_if<StateStmt>(&stmt.node)) {
      poison(NameKind::StateK, s->name);
    } else if (const auto* s = std::get_if<EffectStmt>(&stmt.node)) {
      poison(NameKind::EffectK, s->name);
    } else if (const auto* s = std::get_if<MapStmt>(&stmt.node)) {
      poison(NameKind::MapK, s->name);
    } else if (const auto* s = std::get_if<TestStmt>(&stmt.node)) {
      poison(NameKind::TestK, s->name);
    } else if (const auto* s = std::get_if<CircuitStmt>(&stmt.node)) {
      poison(NameKind::CircuitK, s->name);
    }
  }

  void type_system(std::size_t i, const SystemStmt& s, const Span& span) {
    (void)i;
    (void)span;
    if (s.kind == SystemKind::Composite) {
      for (const std::string& part : s.parts) {
        if (!out.systems.count(part) || is_poisoned(NameKind::System, part)) {
          poison(NameKind::System, s.name);
          return;
        }
      }
      SystemRef sys = out.systems.at(s.parts[0]);
      for (std::size_t k = 1; k < s.parts.size(); ++k) {
        sys = gpt::compose_systems(sys, out.systems.at(s.parts[k]));
      }
      out.systems.emplace(s.name, sys);
      return;
    }
    if (s.kind != SystemKind::Boxworld && s.dim < 1) {
      throw Error(ErrorKind::BadShape, "system dimension must be at least 1");
    }
    TheoryId id = s.kind == SystemKind::Classical  ? TheoryId::Classical
                  : s.kind == SystemKind::Quantum ? TheoryId::Quantum
                                                  : TheoryId::Boxworld;
    out.systems.emplace(s.name, make_system(id, Shape::leaf(s.dim)));
  }

  void type_state(std::size_t i, const StateStmt& s, const Span& span) {
    if (!out.systems.count(s.system) || is_poisoned(NameKind::System, s.system) ||
        expr_depends_poisoned(s.value, NameKind::StateK)) {
      poison(NameKind::StateK, s.name);
      return;
    }
    try {
      out.states.emplace(s.name, lower_state_expr(out.systems.at(s.system), s.value));
    } catch (const Error& ex) {
      err(i, s.value.span, ErrorPhase::Type, ex.what());
      poison(NameKind::StateK, s.name);
    }
    (void)span;
  }

  void type_effect(std::size_t i, const EffectStmt& s, const Span& span) {
    if (!out.systems.count(s.system) || is_poisoned(NameKind::System, s.system) ||
        expr_depends_poisoned(s.value, NameKind::EffectK)) {
      poison(NameKind::EffectK, s.name);
      return;
    }
    try {
      out.effects.emplace(s.name, lower_effect_expr(out.systems.at(s.system), s.value));
    } catch (const Error& ex) {
      err(i, s.value.span, ErrorPhase::Type, ex.what());
      poison(NameKind::EffectK, s.name);
    }
    (void)span;
  }

  bool expr_depends_poisoned(const Expr& e, NameKind primary) {
    const auto* ref = std::get_if<NameRef>(&e.node);
    if (!ref) return false;
    if (primary == NameKind::MapK) {
      // Map context falls back through states and effects.
      if (is_declared(NameKind::MapK, ref->name)) return is_poisoned(NameKind::MapK, ref->name);
      if (is_declared(NameKind::StateK, ref->name))
        return is_poisoned(NameKind::StateK, ref->name);
      if (is_declared(NameKind::EffectK, ref->name))
        return is_poisoned(NameKind::EffectK, ref->name);
      return false;
    }
    return is_declared(primary, ref->name) && is_poisoned(primary, ref->name);
  }

  void type_map(std::size_t i, const MapStmt& s, const Span& span) {
    if (!side_available(s.input) || !side_available(s.output) ||
        expr_depends_poisoned(s.value, NameKind::MapK)) {
      poison(NameKind::MapK, s.name);
      return;
    }
    try {
      SystemRef in = side_system(s.input, s.output);
      SystemRef out_sys = side_system(s.output, s.input);
      out.maps.emplace(s.name, lower_map_expr(in, out_sys, s.value));
    } catch (const Error& ex) {
      err(i, s.value.span, ErrorPhase::Type, ex.what());
      poison(NameKind::MapK, s.name);
    }
    (void)span;
  }

  void type_test(std::size_t i, const TestStmt& s, const Span& span) {
    bool deps_bad = !side_available(s.input) || !side_available(s.output);
    for (const Expr& b : s.branches) deps_bad |= expr_depends_poisoned(b, NameKind::MapK);
    if (deps_bad) {
      poison(NameKind::TestK, s.name);
      return;
    }
    SystemRef in = side_system(s.input, s.output);
    SystemRef out_sys = side_system(s.output, s.input);
    Test test;
    test.input = in;
    test.output = out_sys;
    for (std::size_t b = 0; b < s.branches.size(); ++b) {
      try {
        test.branches.push_back(lower_map_expr(in, out_sys, s.branches[b]));
      } catch (const Error& ex) {
        err(i, s.branches[b].span, ErrorPhase::Type, ex.what());
        poison(NameKind::TestK, s.name);
        return;
      }
      test.labels.push_back(std::to_string(b));
    }
    const TheoryModel& model =
        theory(in.is_trivial() ? out_sys.theory() : in.theory());
    if (!model.valid_test(test)) {
      err(i, span, ErrorPhase::Type,
          "branches do not form a test (their coarse-graining must be deterministic)");
      poison(NameKind::TestK, s.name);
      return;
    }
    out.tests.emplace(s.name, std::move(test));
  }

  void type_circuit(std::size_t i, const CircuitStmt& s, const Span& span) {
    if (!cexpr_available(s.body)) {
      poison(NameKind::CircuitK, s.name);
      return;
    }
    std::vector<CircuitNode> nodes;
    std::vector<Wire> wires;
    try {
      lower_cexpr(s.body, nodes, wires);
      out.circuits.emplace(s.name, build(std::move(nodes), std::move(wires)));
    } catch (const Error& ex) {
      err(i, span, ErrorPhase::Type, ex.what());
      poison(NameKind::CircuitK, s.name);
    }
    (void)i;
  }

  void type_check_stmt(std::size_t i, const CheckStmt& s, const Span& span) {
    bool system_target = axiom_takes_system(s.axiom);
    if (system_target) {
      if (!out.systems.count(s.target) || is_poisoned(NameKind::System, s.target)) return;
    } else {
      if (!out.states.count(s.target) || is_poisoned(NameKind::StateK, s.target)) return;
    }
    if (s.axiom == "no_signalling") {
      const State& state = out.states.at(s.target);
      if (state.system.shape().is_leaf() || state.system.shape().parts.size() != 2) {
        err(i, span, ErrorPhase::Type,
            "check no_signalling needs a state on a two-part composite system");
        return;
      }
    }
    Action action;
    action.kind = Action::Kind::Check;
    action.axiom = s.axiom;
    action.target = s.target;
    action.args = s.args;
    action.span = span;
    out.actions.push_back(std::move(action));
  }

  LowerResult run() {
    resolve_walk();
    type_walk();
    std::stable_sort(errors.begin(), errors.end(), [](const SourceError& a, const SourceError& b) {
      if (a.span.line != b.span.line) return a.span.line < b.span.line;
      return a.span.column < b.span.column;
    });
    return LowerResult{std::move(out), std::move(errors)};
  }
};

}  // namespace

bool known_axiom(const std::string& name) { return axiom_names().count(name) > 0; }

LowerResult lower(const Program& program) {
  Lowerer lowerer(program);
  return lowerer.run();
}

}  // namespace dsl
}  // namespace gpt
