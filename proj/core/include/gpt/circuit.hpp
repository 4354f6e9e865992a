#ifndef GPT_CIRCUIT_HPP
#define GPT_CIRCUIT_HPP

#include <string>
#include <vector>

#include "gpt/theory.hpp"
#include "gpt/value.hpp"

namespace gpt {

/// One placed test. Ports are the top-level components of the test's input
/// and output shapes; a trivial side has no ports.
struct CircuitNode {
  std::string name;
  Test test;
};

/// Directed edge from an output port of one node to an input port of
/// another. Port indices count top-level shape components.
struct Wire {
  int from_node = -1;
  int from_port = 0;
  int to_node = -1;
  int to_port = 0;
};

struct PortRef {
  int node = -1;
  int port = 0;
};

/// Validated DAG. Dangling ports leave the circuit open (still usable via
/// evaluate_open); only evaluation to a distribution requires closure.
struct Circuit {
  std::vector<CircuitNode> nodes;
  std::vector<Wire> wires;
  std::vector<int> topo_order;                 // a valid evaluation order
  std::vector<PortRef> dangling_inputs;        // unconnected consumer ports
  std::vector<PortRef> dangling_outputs;       // unconnected producer ports

  bool closed() const { return dangling_inputs.empty() && dangling_outputs.empty(); }
};

/// Port systems of a node side, one entry per top-level shape component.
std::vector<SystemRef> port_systems(const SystemRef& side);

/// Validates types, port usage, and acyclicity. Throws TypeMismatch,
/// BadSelector (bad endpoint indices), or CycleDetected; dangling ports are
/// recorded, not rejected. Idempotent on its own output.
Circuit build(std::vector<CircuitNode> nodes, std::vector<Wire> wires);

struct EvaluationResult {
  OutcomeDistribution distribution;

  /// Probability of a single-outcome closed circuit.
  double scalar() const;
};

/// Joint distribution of a closed circuit over tuples of node outcomes,
/// ordered by node insertion order (node 0 outermost). Throws OpenCircuit.
EvaluationResult evaluate(const Circuit& circuit);

/// Composite transformation of an open circuit with one branch fixed per
/// node. Dangling inputs and outputs are ordered by (node, port).
Transformation evaluate_open(const Circuit& circuit, const std::vector<int>& branch_choice);

/// Evaluation order chosen greedily to keep the open-wire frontier small.
/// Any valid order yields the same distribution.
std::vector<int> contraction_plan(const Circuit& circuit);

/// Evaluates along a caller-supplied topological order (for the
/// order-independence property); the order must be valid.
EvaluationResult evaluate_with_order(const Circuit& circuit, const std::vector<int>& order);

}  // namespace gpt

#endif
