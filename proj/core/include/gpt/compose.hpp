#ifndef GPT_COMPOSE_HPP
#define GPT_COMPOSE_HPP

#include <cstddef>
#include <vector>

#include "gpt/theory.hpp"
#include "gpt/value.hpp"

namespace gpt {

/// second after first; wire types must match exactly.
Transformation sequential_compose(const Transformation& first, const Transformation& second);

/// Side-by-side composition; matrices combine by Kronecker product in the
/// left-major component order. Trivial factors are absorbed.
Transformation parallel_compose(const Transformation& left, const Transformation& right);
State parallel_compose(const State& left, const State& right);
Effect parallel_compose(const Effect& left, const Effect& right);
Test parallel_compose(const Test& left, const Test& right);

/// Entrywise sum of branches (outcome merging).
Transformation coarse_grain(const std::vector<Transformation>& branches);
Effect coarse_grain_effects(const std::vector<Effect>& effects);

double pairing(const Effect& effect, const State& state);

Effect deterministic_effect(const SystemRef& system);

/// Discards every top-level component not listed in `keep` (indices into the
/// composite's component list, strictly increasing).
State marginalize(const State& state, const std::vector<std::size_t>& keep);
State marginalize(const State& state, std::size_t keep_index);

}  // namespace gpt

#endif
