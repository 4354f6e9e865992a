#include "gpt/compose.hpp"

#include <algorithm>

#include "gpt/errors.hpp"

namespace gpt {

Transformation sequential_compose(const Transformation& first, const Transformation& second) {
  if (first.output != second.input)
    fail(ErrorKind::TypeMismatch,
         "cannot chain " + first.output.str() + " into " + second.input.str());
  return Transformation{first.input, second.output, second.matrix * first.matrix};
}

Transformation parallel_compose(const Transformation& left, const Transformation& right) {
  if (left.input.theory() != right.input.theory())
    fail(ErrorKind::TheoryMismatch, "parallel composition across theories");
  return Transformation{compose_systems(left.input, right.input),
                        compose_systems(left.output, right.output),
                        linalg::kron(left.matrix, right.matrix)};
}

State parallel_compose(const State& left, const State& right) {
  if (left.system.theory() != right.system.theory())
    fail(ErrorKind::TheoryMismatch, "parallel composition across theories");
  return State{compose_systems(left.system, right.system),
               linalg::kron(left.coords, right.coords)};
}

Effect parallel_compose(const Effect& left, const Effect& right) {
  if (left.system.theory() != right.system.theory())
    fail(ErrorKind::TheoryMismatch, "parallel composition across theories");
  return Effect{compose_systems(left.system, right.system),
                linalg::kron(left.coords, right.coords)};
}

Test parallel_compose(const Test& left, const Test& right) {
  Test out;
  out.input = compose_systems(left.input, right.input);
  out.output = compose_systems(left.output, right.output);
  for (std::size_t i = 0; i < left.branches.size(); ++i) {
    for (std::size_t j = 0; j < right.branches.size(); ++j) {
      out.branches.push_back(parallel_compose(left.branches[i], right.branches[j]));
      out.labels.push_back(left.labels[i] + "," + right.labels[j]);
    }
  }
  return out;
}

Transformation coarse_grain(const std::vector<Transformation>& branches) {
  if (branches.empty()) fail(ErrorKind::EmptyList, "coarse-graining of an empty branch list");
  Transformation out = branches.front();
  for (std::size_t i = 1; i < branches.size(); ++i) {
    if (branches[i].input != out.input || branches[i].output != out.output)
      fail(ErrorKind::TypeMismatch, "coarse-graining branches with different wire types");
    out.matrix += branches[i].matrix;
  }
  return out;
}

Effect coarse_grain_effects(const std::vector<Effect>& effects) {
  if (effects.empty()) fail(ErrorKind::EmptyList, "coarse-graining of an empty effect list");
  Effect out = effects.front();
  for (std::size_t i = 1; i < effects.size(); ++i) {
    if (effects[i].system != out.system)
      fail(ErrorKind::TypeMismatch, "coarse-graining effects on different systems");
    out.coords += effects[i].coords;
  }
  return out;
}

Effect deterministic_effect(const SystemRef& system) {
  return Effect{system, theory(system.theory()).unit_coords(system)};
}

namespace {

struct ComponentLayout {
  std::vector<SystemRef> systems;
  std::vector<int> dims;
};

ComponentLayout components_of(const SystemRef& sys) {
  const TheoryModel& model = theory(sys.theory());
  ComponentLayout layout;
  if (!sys.is_composite()) {
    layout.systems.push_back(sys);
    layout.dims.push_back(sys.rep_dim());
    return layout;
  }
  for (const Shape& part : sys.shape().parts) {
    SystemRef component = model.system(part);
    layout.systems.push_back(component);
    layout.dims.push_back(component.rep_dim());
  }
  return layout;
}

}  // namespace

State marginalize(const State& state, const std::vector<std::size_t>& keep) {
  if (!state.system.is_composite())
    fail(ErrorKind::BadSelector, "marginalize needs a composite system");
  const ComponentLayout layout = components_of(state.system);
  const std::size_t n = layout.systems.size();
  if (keep.empty()) fail(ErrorKind::BadSelector, "empty keep list");
  if (!std::is_sorted(keep.begin(), keep.end()) ||
      std::adjacent_find(keep.begin(), keep.end()) != keep.end())
    fail(ErrorKind::BadSelector, "keep indices must be strictly increasing");
  for (std::size_t index : keep)
    if (index >= n) fail(ErrorKind::BadSelector, "keep index out of range");

  const TheoryModel& model = theory(state.system.theory());
  std::vector<Vec> units(n);
  std::vector<bool> kept(n, false);
  for (std::size_t index : keep) kept[index] = true;
  for (std::size_t c = 0; c < n; ++c)
    if (!kept[c]) units[c] = model.unit_coords(layout.systems[c]);

  int out_dim = 1;
  for (std::size_t index : keep) out_dim *= layout.dims[index];
  Vec out = Vec::Zero(out_dim);

  // Walk every multi-index of the full tensor (left-major), contracting
  // discarded components with their unit functionals.
  std::vector<int> idx(n, 0);
  const Eigen::Index total = state.coords.size();
  for (Eigen::Index flat = 0; flat < total; ++flat) {
    Eigen::Index rem = flat;
    for (std::size_t c = n; c-- > 0;) {
      idx[c] = static_cast<int>(rem % layout.dims[c]);
      rem /= layout.dims[c];
    }
    double unit_factor = 1.0;
    int out_flat = 0;
    for (std::size_t c = 0; c < n; ++c) {
      if (kept[c])
        out_flat = out_flat * layout.dims[c] + idx[c];
      else
        unit_factor *= units[c](idx[c]);
    }
    out(out_flat) += unit_factor * state.coords(flat);
  }

  SystemRef out_system = layout.systems[keep.front()];
  for (std::size_t i = 1; i < keep.size(); ++i)
    out_system = compose_systems(out_system, layout.systems[keep[i]]);
  return State{out_system, out};
}

State marginalize(const State& state, std::size_t keep_index) {
  return marginalize(state, std::vector<std::size_t>{keep_index});
}

}  // namespace gpt
