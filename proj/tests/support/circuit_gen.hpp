#ifndef GPT_TESTS_CIRCUIT_GEN_HPP
#define GPT_TESTS_CIRCUIT_GEN_HPP

#include <vector>

#include "gpt/circuit.hpp"
#include "gpt/theory.hpp"

namespace gpt_tests {

inline gpt::SystemRef random_leaf(const gpt::TheoryModel& model, gpt::Rng& rng) {
  int dim = 2;
  if (model.id() != gpt::TheoryId::Boxworld) dim = 2 + static_cast<int>(rng() % 2);
  return model.system(gpt::Shape::leaf(model.id() == gpt::TheoryId::Boxworld ? 2 : dim));
}

/// One- or two-wire closed circuit: preparation, a channel layer, and a full
/// observation test, all sampled from the model.
inline gpt::Circuit random_closed_circuit(const gpt::TheoryModel& model, gpt::Rng& rng) {
  using namespace gpt;
  std::vector<CircuitNode> nodes;
  std::vector<Wire> wires;
  SystemRef trivial = model.trivial_system();
  bool two_wires = rng() % 2 == 0;
  if (!two_wires) {
    SystemRef sys = random_leaf(model, rng);
    Test prep;
    prep.input = trivial;
    prep.output = sys;
    prep.branches = {Transformation::from_state(model.random_state(sys, rng, rng() % 2 == 0))};
    prep.labels = {"0"};
    nodes.push_back(CircuitNode{"prep", prep});
    nodes.push_back(CircuitNode{"mid", model.random_test(sys, sys, 2, rng)});
    nodes.push_back(CircuitNode{"obs", model.random_test(sys, trivial, 2, rng)});
    wires = {{0, 0, 1, 0}, {1, 0, 2, 0}};
  } else {
    SystemRef a = random_leaf(model, rng);
    SystemRef b = random_leaf(model, rng);
    SystemRef ab = compose_systems(a, b);
    Test prep;
    prep.input = trivial;
    prep.output = ab;
    prep.branches = {Transformation::from_state(model.random_state(ab, rng, rng() % 2 == 0))};
    prep.labels = {"0"};
    nodes.push_back(CircuitNode{"prep", prep});
    nodes.push_back(CircuitNode{"chan_a", model.random_test(a, a, 2, rng)});
    nodes.push_back(CircuitNode{"chan_b", model.random_test(b, b, 2, rng)});
    nodes.push_back(CircuitNode{"obs", model.random_test(ab, trivial, 2, rng)});
    wires = {{0, 0, 1, 0}, {0, 1, 2, 0}, {1, 0, 3, 0}, {2, 0, 3, 1}};
  }
  return build(std::move(nodes), std::move(wires));
}

/// Places two circuits side by side with no wires between them; the joint
/// distribution must factor into the product of the parts.
inline gpt::Circuit disjoint_union(const gpt::Circuit& a, const gpt::Circuit& b) {
  using namespace gpt;
  std::vector<CircuitNode> nodes = a.nodes;
  nodes.insert(nodes.end(), b.nodes.begin(), b.nodes.end());
  std::vector<Wire> wires = a.wires;
  int shift = static_cast<int>(a.nodes.size());
  for (Wire w : b.wires) {
    w.from_node += shift;
    w.to_node += shift;
    wires.push_back(w);
  }
  return build(std::move(nodes), std::move(wires));
}

/// Uniformly random valid topological order (randomized Kahn's algorithm).
inline std::vector<int> random_topo_order(const gpt::Circuit& c, gpt::Rng& rng) {
  int n = static_cast<int>(c.nodes.size());
  std::vector<int> missing(n, 0);
  for (const gpt::Wire& w : c.wires) ++missing[w.to_node];
  std::vector<int> ready;
  for (int k = 0; k < n; ++k)
    if (missing[k] == 0) ready.push_back(k);
  std::vector<int> order;
  while (!ready.empty()) {
    std::size_t pick = rng() % ready.size();
    int node = ready[pick];
    ready.erase(ready.begin() + static_cast<std::ptrdiff_t>(pick));
    order.push_back(node);
    for (const gpt::Wire& w : c.wires) {
      if (w.from_node == node && --missing[w.to_node] == 0) ready.push_back(w.to_node);
    }
  }
  return order;
}

}  // namespace gpt_tests

#endif
