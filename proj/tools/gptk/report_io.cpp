#include "report_io.hpp"

#include <cctype>
#include <json.hpp>
#include <map>
#include <set>
#include <sstream>

#include "gpt/dsl/ast.hpp"
#include "gpt/dsl/print.hpp"
#include "gpt/shape.hpp"
#include "gpt/theory.hpp"

namespace gptk {
namespace {

using json = nlohmann::ordered_json;

std::string join_labels(const std::vector<std::string>& tuple) {
  std::string s;
  for (std::size_t i = 0; i < tuple.size(); ++i) {
    if (i) s += ',';
    s += tuple[i];
  }
  return s;
}

std::string format_ms(double ms) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.3f", ms);
  return buf;
}

/// Declares the system (and its parts) in the witness program, returning its
/// statement-level name; shapes are deduplicated per theory.
struct SystemNamer {
  gpt::dsl::Program& program;
  std::map<std::string, std::string> by_key;
  int counter = 0;

  std::string declare(gpt::TheoryId theory, const gpt::Shape& shape) {
    std::string key = std::string(gpt::to_string(theory)) + "|" + shape.str();
    auto it = by_key.find(key);
    if (it != by_key.end()) return it->second;
    gpt::dsl::SystemStmt stmt;
    if (shape.is_leaf()) {
      stmt.dim = shape.dim;
      switch (theory) {
        case gpt::TheoryId::Classical: stmt.kind = gpt::dsl::SystemKind::Classical; break;
        case gpt::TheoryId::Quantum: stmt.kind = gpt::dsl::SystemKind::Quantum; break;
        case gpt::TheoryId::Boxworld: stmt.kind = gpt::dsl::SystemKind::Boxworld; break;
      }
    } else {
      stmt.kind = gpt::dsl::SystemKind::Composite;
      for (const gpt::Shape& part : shape.parts) {
        stmt.parts.push_back(declare(theory, part));
      }
    }
    std::string name = "sys" + std::to_string(counter++);
    stmt.name = name;
    gpt::dsl::Statement out;
    out.node = std::move(stmt);
    program.statements.push_back(std::move(out));
    by_key.emplace(std::move(key), name);
    return name;
  }
};

gpt::dsl::Expr row_literal(const gpt::Vec& coords) {
  gpt::dsl::MatrixLit lit;
  lit.rows.emplace_back();
  for (int i = 0; i < coords.size(); ++i) lit.rows.back().emplace_back(coords[i], 0.0);
  gpt::dsl::Expr e;
  e.node = std::move(lit);
  return e;
}

gpt::dsl::Expr matrix_literal(const gpt::Mat& m) {
  gpt::dsl::MatrixLit lit;
  for (int r = 0; r < m.rows(); ++r) {
    lit.rows.emplace_back();
    for (int c = 0; c < m.cols(); ++c) lit.rows.back().emplace_back(m(r, c), 0.0);
  }
  gpt::dsl::Expr e;
  e.node = std::move(lit);
  return e;
}

std::string sanitize_role(const std::string& role, std::set<std::string>& used) {
  std::string name;
  for (char c : role) {
    name += (std::isalnum(static_cast<unsigned char>(c)) || c == '_') ? c : '_';
  }
  if (name.empty() || std::isdigit(static_cast<unsigned char>(name[0]))) name = "w_" + name;
  if (name == "trivial") name = "trivial_";
  std::string candidate = name;
  int suffix = 2;
  while (!used.insert(candidate).second) candidate = name + "_" + std::to_string(suffix++);
  return candidate;
}

}  // namespace

std::string witness_program(const std::vector<gpt::WitnessItem>& witness) {
  gpt::dsl::Program program;
  SystemNamer namer{program};
  std::set<std::string> used_names;
  for (const gpt::WitnessItem& item : witness) {
    const gpt::Transformation& t = item.value;
    std::string name = sanitize_role(item.role, used_names);
    gpt::dsl::Statement stmt;
    if (t.is_state_like() && !t.output.is_trivial()) {
      gpt::dsl::StateStmt s;
      s.name = std::move(name);
      s.system = namer.declare(t.output.theory(), t.output.shape());
      s.value = row_literal(t.as_state().coords);
      stmt.node = std::move(s);
    } else if (t.is_effect_like() && !t.input.is_trivial()) {
      gpt::dsl::EffectStmt s;
      s.name = std::move(name);
      s.system = namer.declare(t.input.theory(), t.input.shape());
      s.value = row_literal(t.as_effect().coords);
      stmt.node = std::move(s);
    } else {
      gpt::dsl::MapStmt s;
      s.name = std::move(name);
      s.input = t.input.is_trivial() ? "trivial"
                                     : namer.declare(t.input.theory(), t.input.shape());
      s.output = t.output.is_trivial() ? "trivial"
                                       : namer.declare(t.output.theory(), t.output.shape());
      s.value = matrix_literal(t.matrix);
      stmt.node = std::move(s);
    }
    program.statements.push_back(std::move(stmt));
  }
  return gpt::dsl::print(program);
}

ReportItem item_from_check(const gpt::CheckReport& report, const std::string& kind,
                           const std::string& name) {
  ReportItem item;
  item.kind = kind;
  item.name = name;
  item.verdict = gpt::to_string(report.verdict);
  item.deviation = report.deviation;
  if (!report.witness.empty()) item.witness = witness_program(report.witness);
  return item;
}

std::string emit_report(const RunConfig& config, const std::vector<ReportItem>& items) {
  if (config.format == "json") {
    json root;
    root["version"] = kVersion;
    json cfg;
    cfg["command"] = config.command;
    cfg["format"] = config.format;
    cfg["seed"] = config.seed;
    cfg["samples"] = config.samples;
    cfg["tolerance"] = config.tolerance;
    cfg["max_env"] = config.max_env;
    cfg["max_partner"] = config.max_partner;
    if (config.command == "eval") cfg["file"] = config.file;
    if (config.command == "check") {
      cfg["axiom"] = config.axiom;
      cfg["theory"] = config.theory;
      cfg["dim"] = config.dim;
    }
    if (config.command == "demo") cfg["demo"] = config.demo;
    root["config"] = std::move(cfg);
    json out_items = json::array();
    for (const ReportItem& item : items) {
      json j;
      j["kind"] = item.kind;
      j["name"] = item.name;
      if (item.distribution) {
        json dist;
        json outcomes = json::array();
        json probs = json::array();
        for (std::size_t k = 0; k < item.distribution->labels.size(); ++k) {
          outcomes.push_back(join_labels(item.distribution->labels[k]));
          probs.push_back(item.distribution->probs[static_cast<int>(k)]);
        }
        dist["outcomes"] = std::move(outcomes);
        dist["probs"] = std::move(probs);
        j["distribution"] = std::move(dist);
      } else {
        j["verdict"] = item.verdict;
      }
      if (!item.witness.empty()) j["witness"] = item.witness;
      if (item.deviation) j["deviation"] = *item.deviation;
      j["ms"] = item.ms;
      out_items.push_back(std::move(j));
    }
    root["items"] = std::move(out_items);
    return root.dump(2) + "\n";
  }

  // Text: a config echo line, then one line per item in fixed column order.
  std::ostringstream os;
  os << "gptk " << kVersion << " command=" << config.command << " seed=" << config.seed
     << " samples=" << config.samples
     << " tolerance=" << gpt::dsl::format_number(config.tolerance)
     << " max_env=" << config.max_env << " max_partner=" << config.max_partner;
  if (config.command == "eval") os << " file=" << config.file;
  if (config.command == "check") {
    os << " axiom=" << config.axiom << " theory=" << config.theory << " dim=" << config.dim;
  }
  if (config.command == "demo") os << " demo=" << config.demo;
  os << '\n';
  for (const ReportItem& item : items) {
    os << item.kind << ' ' << item.name;
    if (item.distribution) {
      for (std::size_t k = 0; k < item.distribution->labels.size(); ++k) {
        os << " p[" << join_labels(item.distribution->labels[k])
           << "]=" << gpt::dsl::format_number(item.distribution->probs[static_cast<int>(k)]);
      }
    } else {
      os << " verdict=" << item.verdict;
    }
    if (item.deviation) os << " deviation=" << gpt::dsl::format_number(*item.deviation);
    os << " ms=" << format_ms(item.ms) << '\n';
  }
  return os.str();
}

}  // namespace gptk
