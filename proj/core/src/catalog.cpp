#include "gpt/catalog.hpp"

#include <cmath>

#include "gpt/boxworld.hpp"
#include "gpt/errors.hpp"
#include "gpt/quantum.hpp"

namespace gpt {
namespace {

const std::vector<std::string> kCatalogNames = {
    "point_mass",   "uniform",     "computational", "plus_state",
    "singlet",      "maximally_mixed", "gbit_vertex", "gbit_center"};

int int_param(const std::string& name, const std::vector<double>& params, size_t index) {
  if (index >= params.size())
    fail(ErrorKind::BadParams, name + ": missing parameter " + std::to_string(index + 1));
  double v = params[index];
  if (std::abs(v - std::round(v)) > 1e-12)
    fail(ErrorKind::BadParams, name + ": parameter must be an integer");
  return static_cast<int>(std::round(v));
}

void want_arity(const std::string& name, const std::vector<double>& params, size_t n) {
  if (params.size() != n)
    fail(ErrorKind::BadParams, name + ": expects " + std::to_string(n) + " parameter(s)");
}

void want_theory(const std::string& name, TheoryId got, TheoryId need) {
  if (got != need) fail(ErrorKind::BadParams, name + ": wrong theory for this catalog state");
}

SystemRef default_system(TheoryId theory, const std::string& name,
                         const std::vector<double>& params) {
  const TheoryModel& model = gpt::theory(theory);
  if (name == "point_mass") return model.system(Shape::leaf(int_param(name, params, 0) + 1));
  if (name == "uniform") return model.system(Shape::leaf(int_param(name, params, 0)));
  if (name == "computational") return model.system(Shape::leaf(int_param(name, params, 0) + 1));
  if (name == "plus_state") return model.system(Shape::leaf(2));
  if (name == "singlet")
    return model.system(Shape::composite({Shape::leaf(2), Shape::leaf(2)}));
  if (name == "maximally_mixed") return model.system(Shape::leaf(int_param(name, params, 0)));
  if (name == "gbit_vertex" || name == "gbit_center") return model.system(Shape::gbit());
  fail(ErrorKind::UnknownName, "unknown catalog state: " + name);
}

}  // namespace

bool is_catalog_state_name(const std::string& name) {
  for (const std::string& n : kCatalogNames)
    if (n == name) return true;
  return false;
}

State named_state(const SystemRef& system, const std::string& name,
                  const std::vector<double>& params) {
  const TheoryId th = system.theory();
  if (name == "point_mass") {
    want_theory(name, th, TheoryId::Classical);
    want_arity(name, params, 1);
    int k = int_param(name, params, 0);
    if (k < 0 || k >= system.rep_dim())
      fail(ErrorKind::BadParams, "point_mass: index out of range for " + system.str());
    Vec coords = Vec::Zero(system.rep_dim());
    coords(k) = 1.0;
    return State{system, coords};
  }
  if (name == "uniform") {
    want_theory(name, th, TheoryId::Classical);
    want_arity(name, params, 1);
    int d = int_param(name, params, 0);
    if (d != system.rep_dim())
      fail(ErrorKind::BadParams, "uniform: dimension does not match " + system.str());
    return State{system, Vec::Constant(d, 1.0 / d)};
  }
  if (name == "computational") {
    want_theory(name, th, TheoryId::Quantum);
    want_arity(name, params, 1);
    int d = quantum::hilbert_dim(system);
    int k = int_param(name, params, 0);
    if (k < 0 || k >= d)
      fail(ErrorKind::BadParams, "computational: index out of range for " + system.str());
    CVec amp = CVec::Zero(d);
    amp(k) = 1.0;
    return quantum::pure_state(system, amp);
  }
  if (name == "plus_state") {
    want_theory(name, th, TheoryId::Quantum);
    want_arity(name, params, 0);
    if (quantum::hilbert_dim(system) != 2)
      fail(ErrorKind::BadParams, "plus_state: needs a qubit system");
    CVec amp(2);
    amp << 1.0 / std::sqrt(2.0), 1.0 / std::sqrt(2.0);
    return quantum::pure_state(system, amp);
  }
  if (name == "singlet") {
    want_theory(name, th, TheoryId::Quantum);
    want_arity(name, params, 0);
    const Shape& shape = system.shape();
    bool pair_of_qubits = !shape.is_leaf() && shape.parts.size() == 2 &&
                          shape.parts[0].is_leaf() && shape.parts[0].dim == 2 &&
                          shape.parts[1].is_leaf() && shape.parts[1].dim == 2;
    if (!pair_of_qubits)
      fail(ErrorKind::BadParams, "singlet: needs a qubit pair, got " + system.str());
    CVec amp = CVec::Zero(4);
    amp(1) = 1.0 / std::sqrt(2.0);   // |01>
    amp(2) = -1.0 / std::sqrt(2.0);  // |10>
    return quantum::pure_state(system, amp);
  }
  if (name == "maximally_mixed") {
    want_theory(name, th, TheoryId::Quantum);
    want_arity(name, params, 1);
    int d = quantum::hilbert_dim(system);
    if (int_param(name, params, 0) != d)
      fail(ErrorKind::BadParams, "maximally_mixed: dimension does not match " + system.str());
    return quantum::state_from_density(system, CMat::Identity(d, d) / d);
  }
  if (name == "gbit_vertex") {
    want_theory(name, th, TheoryId::Boxworld);
    want_arity(name, params, 1);
    if (system.rep_dim() != 3) fail(ErrorKind::BadParams, "gbit_vertex: needs a single gbit");
    int k = int_param(name, params, 0);
    if (k < 0 || k > 3) fail(ErrorKind::BadParams, "gbit_vertex: index must be 0..3");
    return State{system, boxworld::gbit_vertices()[static_cast<size_t>(k)]};
  }
  if (name == "gbit_center") {
    want_theory(name, th, TheoryId::Boxworld);
    want_arity(name, params, 0);
    if (system.rep_dim() != 3) fail(ErrorKind::BadParams, "gbit_center: needs a single gbit");
    Vec c(3);
    c << 0, 0, 1;
    return State{system, c};
  }
  fail(ErrorKind::UnknownName, "unknown catalog state: " + name);
}

State named_state(TheoryId theory, const std::string& name, const std::vector<double>& params) {
  return named_state(default_system(theory, name, params), name, params);
}

}  // namespace gpt
