#include "gpt/value.hpp"

#include <cmath>

#include "gpt/compose.hpp"
#include "gpt/errors.hpp"
#include "gpt/theory.hpp"

namespace gpt {

double State::weight() const {
  return pairing(deterministic_effect(system), *this);
}

bool State::is_normalized(double tol) const {
  return std::abs(weight() - 1.0) <= tol;
}

State Transformation::apply(const State& state) const {
  if (state.system != input)
    fail(ErrorKind::TypeMismatch,
         "transformation expects " + input.str() + ", state is on " + state.system.str());
  return State{output, matrix * state.coords};
}

Effect Transformation::pullback(const Effect& effect) const {
  if (effect.system != output)
    fail(ErrorKind::TypeMismatch,
         "transformation outputs " + output.str() + ", effect is on " + effect.system.str());
  return Effect{input, matrix.transpose() * effect.coords};
}

Transformation Transformation::identity(const SystemRef& system) {
  return Transformation{system, system, Mat::Identity(system.rep_dim(), system.rep_dim())};
}

Transformation Transformation::from_state(const State& state) {
  const SystemRef trivial = theory(state.system.theory()).trivial_system();
  Mat column(state.coords.size(), 1);
  column.col(0) = state.coords;
  return Transformation{trivial, state.system, column};
}

Transformation Transformation::from_effect(const Effect& effect) {
  const SystemRef trivial = theory(effect.system.theory()).trivial_system();
  Mat row(1, effect.coords.size());
  row.row(0) = effect.coords.transpose();
  return Transformation{effect.system, trivial, row};
}

State Transformation::as_state() const {
  if (!is_state_like()) fail(ErrorKind::TypeMismatch, "transformation input is not trivial");
  return State{output, matrix.col(0)};
}

Effect Transformation::as_effect() const {
  if (!is_effect_like()) fail(ErrorKind::TypeMismatch, "transformation output is not trivial");
  return Effect{input, matrix.row(0).transpose()};
}

void Test::check_structure() const {
  if (branches.empty()) fail(ErrorKind::EmptyList, "test has no branches");
  if (labels.size() != branches.size())
    fail(ErrorKind::BadArity, "label count does not match branch count");
  for (const Transformation& branch : branches) {
    if (branch.input != input || branch.output != output)
      fail(ErrorKind::TypeMismatch, "test branches disagree on wire types");
  }
}

int OutcomeDistribution::find(const std::vector<std::string>& tuple) const {
  for (std::size_t i = 0; i < labels.size(); ++i)
    if (labels[i] == tuple) return static_cast<int>(i);
  return -1;
}

double pairing(const Effect& effect, const State& state) {
  if (effect.system != state.system)
    fail(ErrorKind::TypeMismatch,
         "pairing across systems " + effect.system.str() + " and " + state.system.str());
  return effect.coords.dot(state.coords);
}

}  // namespace gpt
