#include "gpt/circuit.hpp"

#include <algorithm>
#include <functional>
#include <numeric>

#include "gpt/compose.hpp"
#include "gpt/errors.hpp"

namespace gpt {
namespace {

constexpr long kMaxFrontier = 10000000L;
constexpr long kMaxTuples = 1000000L;

// Open wires are tagged with their eventual consumer port; dangling outputs
// use node = -1 and port = rank in the sorted dangling list.
struct OpenWire {
  int tag_node;
  int tag_port;
  SystemRef system;
};

// Reorders kron components of the row space: destination component j is
// source component perm[j]. Left-major flat indexing throughout.
Mat permute_rows(const Mat& data, const std::vector<int>& dims, const std::vector<int>& perm) {
  bool identity = true;
  for (size_t j = 0; j < perm.size(); ++j) {
    if (perm[j] != static_cast<int>(j)) { identity = false; break; }
  }
  if (identity) return data;
  int n = static_cast<int>(dims.size());
  std::vector<long> src_stride(static_cast<size_t>(n), 1);
  for (int i = n - 2; i >= 0; --i)
    src_stride[static_cast<size_t>(i)] =
        src_stride[static_cast<size_t>(i + 1)] * dims[static_cast<size_t>(i + 1)];
  std::vector<long> dst_stride(static_cast<size_t>(n), 1);
  for (int i = n - 2; i >= 0; --i)
    dst_stride[static_cast<size_t>(i)] =
        dst_stride[static_cast<size_t>(i + 1)] * dims[static_cast<size_t>(perm[static_cast<size_t>(i + 1)])];

  Mat out(data.rows(), data.cols());
  for (long r_new = 0; r_new < data.rows(); ++r_new) {
    long rem = r_new;
    long r_old = 0;
    for (int j = 0; j < n; ++j) {
      long digit = rem / dst_stride[static_cast<size_t>(j)];
      rem %= dst_stride[static_cast<size_t>(j)];
      r_old += digit * src_stride[static_cast<size_t>(perm[static_cast<size_t>(j)])];
    }
    out.row(r_new) = data.row(r_old);
  }
  return out;
}

struct Frontier {
  std::vector<OpenWire> open;
  Mat data;  // (product of open dims) rows; columns are symbolic inputs

  // Applies one branch of a node: consumed wires (tagged with this node's
  // input ports) are pulled to the front in port order and hit with the
  // branch matrix; emitted wires are prepended with placeholder tags.
  void apply(int node_index, const Test& test, const Mat& branch) {
    std::vector<SystemRef> in_ports = port_systems(test.input);
    std::vector<SystemRef> out_ports = port_systems(test.output);
    std::vector<int> consumed;
    consumed.reserve(in_ports.size());
    for (size_t p = 0; p < in_ports.size(); ++p) {
      int slot = -1;
      for (size_t s = 0; s < open.size(); ++s) {
        if (open[s].tag_node == node_index && open[s].tag_port == static_cast<int>(p)) {
          slot = static_cast<int>(s);
          break;
        }
      }
      if (slot < 0) fail(ErrorKind::Internal, "consumer port has no open wire");
      consumed.push_back(slot);
    }
    std::vector<int> perm = consumed;
    for (size_t s = 0; s < open.size(); ++s) {
      if (std::find(consumed.begin(), consumed.end(), static_cast<int>(s)) == consumed.end())
        perm.push_back(static_cast<int>(s));
    }
    std::vector<int> dims;
    dims.reserve(open.size());
    for (const OpenWire& w : open) dims.push_back(w.system.rep_dim());
    data = permute_rows(data, dims, perm);

    long d_in = 1;
    for (const SystemRef& s : in_ports) d_in *= s.rep_dim();
    long d_rest = d_in > 0 ? data.rows() / d_in : data.rows();
    long d_out = branch.rows();
    Mat next = Mat::Zero(d_out * d_rest, data.cols());
    for (long o = 0; o < d_out; ++o)
      for (long i = 0; i < d_in; ++i) {
        double f = branch(o, i);
        if (f != 0.0) next.middleRows(o * d_rest, d_rest) += f * data.middleRows(i * d_rest, d_rest);
      }
    if (d_out * d_rest > kMaxFrontier) fail(ErrorKind::Internal, "frontier dimension exceeds limit");
    data = std::move(next);

    std::vector<OpenWire> next_open;
    next_open.reserve(out_ports.size() + open.size() - consumed.size());
    for (size_t p = 0; p < out_ports.size(); ++p)
      next_open.push_back(OpenWire{node_index, static_cast<int>(p), out_ports[p]});
    for (size_t j = consumed.size(); j < perm.size(); ++j)
      next_open.push_back(open[static_cast<size_t>(perm[j])]);
    open = std::move(next_open);
  }
};

std::vector<int> sorted_port_order(const std::vector<PortRef>& ports) {
  std::vector<int> idx(ports.size());
  std::iota(idx.begin(), idx.end(), 0);
  std::sort(idx.begin(), idx.end(), [&](int a, int b) {
    const PortRef& pa = ports[static_cast<size_t>(a)];
    const PortRef& pb = ports[static_cast<size_t>(b)];
    return pa.node != pb.node ? pa.node < pb.node : pa.port < pb.port;
  });
  return idx;
}

void validate_order(const Circuit& circuit, const std::vector<int>& order) {
  size_t n = circuit.nodes.size();
  if (order.size() != n) fail(ErrorKind::BadSelector, "evaluation order has wrong length");
  std::vector<int> pos(n, -1);
  for (size_t i = 0; i < order.size(); ++i) {
    int v = order[i];
    if (v < 0 || v >= static_cast<int>(n) || pos[static_cast<size_t>(v)] >= 0)
      fail(ErrorKind::BadSelector, "evaluation order is not a permutation");
    pos[static_cast<size_t>(v)] = static_cast<int>(i);
  }
  for (const Wire& w : circuit.wires) {
    if (pos[static_cast<size_t>(w.from_node)] > pos[static_cast<size_t>(w.to_node)])
      fail(ErrorKind::BadSelector, "evaluation order is not topological");
  }
}

// Pre-resolves each output port to its consumer so frontier tags can be
// rewritten as soon as a wire is emitted.
struct Contraction {
  const Circuit& circuit;
  std::vector<std::vector<PortRef>> consumer_of;
  std::vector<int> order;

  Contraction(const Circuit& c, std::vector<int> eval_order)
      : circuit(c), order(std::move(eval_order)) {
    consumer_of.resize(circuit.nodes.size());
    for (size_t i = 0; i < circuit.nodes.size(); ++i)
      consumer_of[i].assign(port_systems(circuit.nodes[i].test.output).size(), PortRef{});
    for (const Wire& w : circuit.wires)
      consumer_of[static_cast<size_t>(w.from_node)][static_cast<size_t>(w.from_port)] =
          PortRef{w.to_node, w.to_port};
    std::vector<int> rank = sorted_port_order(circuit.dangling_outputs);
    for (size_t k = 0; k < rank.size(); ++k) {
      const PortRef& p = circuit.dangling_outputs[static_cast<size_t>(rank[k])];
      consumer_of[static_cast<size_t>(p.node)][static_cast<size_t>(p.port)] =
          PortRef{-1, static_cast<int>(k)};
    }
  }

  void step(Frontier& f, size_t position, int branch) const {
    int node = order[position];
    const Test& test = circuit.nodes[static_cast<size_t>(node)].test;
    f.apply(node, test, test.branches[static_cast<size_t>(branch)].matrix);
    size_t n_out = consumer_of[static_cast<size_t>(node)].size();
    for (size_t p = 0; p < n_out; ++p) {
      const PortRef& consumer = consumer_of[static_cast<size_t>(node)][p];
      f.open[p].tag_node = consumer.node;
      f.open[p].tag_port = consumer.port;
    }
  }
};

}  // namespace

std::vector<SystemRef> port_systems(const SystemRef& side) {
  if (side.is_trivial()) return {};
  const Shape& shape = side.shape();
  if (shape.is_leaf()) return {side};
  std::vector<SystemRef> ports;
  ports.reserve(shape.parts.size());
  const TheoryModel& model = theory(side.theory());
  for (const Shape& part : shape.parts) ports.push_back(model.system(part));
  return ports;
}

Circuit build(std::vector<CircuitNode> nodes, std::vector<Wire> wires) {
  Circuit c;
  c.nodes = std::move(nodes);
  c.wires = std::move(wires);
  int n = static_cast<int>(c.nodes.size());

  std::vector<std::vector<SystemRef>> in_ports(static_cast<size_t>(n));
  std::vector<std::vector<SystemRef>> out_ports(static_cast<size_t>(n));
  for (int i = 0; i < n; ++i) {
    c.nodes[static_cast<size_t>(i)].test.check_structure();
    in_ports[static_cast<size_t>(i)] = port_systems(c.nodes[static_cast<size_t>(i)].test.input);
    out_ports[static_cast<size_t>(i)] = port_systems(c.nodes[static_cast<size_t>(i)].test.output);
  }

  std::vector<std::vector<bool>> in_used(static_cast<size_t>(n));
  std::vector<std::vector<bool>> out_used(static_cast<size_t>(n));
  for (int i = 0; i < n; ++i) {
    in_used[static_cast<size_t>(i)].assign(in_ports[static_cast<size_t>(i)].size(), false);
    out_used[static_cast<size_t>(i)].assign(out_ports[static_cast<size_t>(i)].size(), false);
  }
  for (const Wire& w : c.wires) {
    if (w.from_node < 0 || w.from_node >= n || w.to_node < 0 || w.to_node >= n)
      fail(ErrorKind::BadSelector, "wire references a missing node");
    auto& outs = out_ports[static_cast<size_t>(w.from_node)];
    auto& ins = in_ports[static_cast<size_t>(w.to_node)];
    if (w.from_port < 0 || w.from_port >= static_cast<int>(outs.size()))
      fail(ErrorKind::BadSelector, "wire references a missing output port");
    if (w.to_port < 0 || w.to_port >= static_cast<int>(ins.size()))
      fail(ErrorKind::BadSelector, "wire references a missing input port");
    if (out_used[static_cast<size_t>(w.from_node)][static_cast<size_t>(w.from_port)])
      fail(ErrorKind::BadSelector, "output port wired twice");
    if (in_used[static_cast<size_t>(w.to_node)][static_cast<size_t>(w.to_port)])
      fail(ErrorKind::BadSelector, "input port wired twice");
    out_used[static_cast<size_t>(w.from_node)][static_cast<size_t>(w.from_port)] = true;
    in_used[static_cast<size_t>(w.to_node)][static_cast<size_t>(w.to_port)] = true;
    const SystemRef& produced = outs[static_cast<size_t>(w.from_port)];
    const SystemRef& expected = ins[static_cast<size_t>(w.to_port)];
    if (!(produced == expected))
      fail(ErrorKind::TypeMismatch,
           "wire type mismatch: " + produced.str() + " into " + expected.str());
  }

  // Kahn topological sort, smallest ready index first for determinism.
  std::vector<int> indegree(static_cast<size_t>(n), 0);
  for (const Wire& w : c.wires) ++indegree[static_cast<size_t>(w.to_node)];
  std::vector<bool> emitted(static_cast<size_t>(n), false);
  for (int step = 0; step < n; ++step) {
    int pick = -1;
    for (int i = 0; i < n; ++i) {
      if (!emitted[static_cast<size_t>(i)] && indegree[static_cast<size_t>(i)] == 0) {
        pick = i;
        break;
      }
    }
    if (pick < 0) fail(ErrorKind::CycleDetected, "circuit contains a cycle");
    emitted[static_cast<size_t>(pick)] = true;
    c.topo_order.push_back(pick);
    for (const Wire& w : c.wires)
      if (w.from_node == pick) --indegree[static_cast<size_t>(w.to_node)];
  }

  for (int i = 0; i < n; ++i) {
    for (size_t p = 0; p < in_ports[static_cast<size_t>(i)].size(); ++p)
      if (!in_used[static_cast<size_t>(i)][p])
        c.dangling_inputs.push_back(PortRef{i, static_cast<int>(p)});
    for (size_t p = 0; p < out_ports[static_cast<size_t>(i)].size(); ++p)
      if (!out_used[static_cast<size_t>(i)][p])
        c.dangling_outputs.push_back(PortRef{i, static_cast<int>(p)});
  }
  return c;
}

double EvaluationResult::scalar() const {
  if (distribution.probs.size() != 1)
    fail(ErrorKind::BadSelector, "scalar view needs a single-outcome distribution");
  return distribution.probs(0);
}

EvaluationResult evaluate_with_order(const Circuit& circuit, const std::vector<int>& order) {
  if (!circuit.closed()) fail(ErrorKind::OpenCircuit, "cannot evaluate an open circuit");
  validate_order(circuit, order);
  size_t n = circuit.nodes.size();

  EvaluationResult result;
  if (n == 0) {
    result.distribution.probs = Vec::Ones(1);
    result.distribution.labels.assign(1, {});
    return result;
  }

  long tuples = 1;
  std::vector<long> arity(n, 1);
  for (size_t i = 0; i < n; ++i) {
    arity[i] = static_cast<long>(circuit.nodes[i].test.arity());
    tuples *= arity[i];
    if (tuples > kMaxTuples) fail(ErrorKind::Internal, "outcome space exceeds limit");
  }
  std::vector<long> stride(n, 1);
  for (size_t i = n; i-- > 1;) stride[i - 1] = stride[i] * arity[i];

  result.distribution.probs = Vec::Zero(tuples);
  result.distribution.labels.assign(static_cast<size_t>(tuples), {});
  for (long t = 0; t < tuples; ++t) {
    std::vector<std::string> tuple;
    tuple.reserve(n);
    for (size_t i = 0; i < n; ++i) {
      long b = (t / stride[i]) % arity[i];
      tuple.push_back(circuit.nodes[i].test.labels[static_cast<size_t>(b)]);
    }
    result.distribution.labels[static_cast<size_t>(t)] = std::move(tuple);
  }

  Contraction ctx(circuit, order);
  std::vector<int> choice(n, 0);
  Frontier root;
  root.data = Mat::Ones(1, 1);
  // Depth-first over branch choices in plan order, sharing prefixes.
  std::function<void(size_t, const Frontier&)> walk = [&](size_t depth, const Frontier& f) {
    if (depth == n) {
      long flat = 0;
      for (size_t i = 0; i < n; ++i) flat += choice[i] * stride[i];
      result.distribution.probs(flat) = f.data(0, 0);
      return;
    }
    int node = ctx.order[depth];
    for (int b = 0; b < arity[static_cast<size_t>(node)]; ++b) {
      Frontier next = f;
      ctx.step(next, depth, b);
      choice[static_cast<size_t>(node)] = b;
      walk(depth + 1, next);
    }
  };
  walk(0, root);
  return result;
}

EvaluationResult evaluate(const Circuit& circuit) {
  return evaluate_with_order(circuit, contraction_plan(circuit));
}

Transformation evaluate_open(const Circuit& circuit, const std::vector<int>& branch_choice) {
  if (circuit.nodes.empty()) fail(ErrorKind::OpenCircuit, "empty circuit has no process view");
  size_t n = circuit.nodes.size();
  if (branch_choice.size() != n)
    fail(ErrorKind::BranchOutOfRange, "need one branch choice per node");
  for (size_t i = 0; i < n; ++i) {
    if (branch_choice[i] < 0 ||
        branch_choice[i] >= static_cast<int>(circuit.nodes[i].test.arity()))
      fail(ErrorKind::BranchOutOfRange,
           "branch choice out of range at node " + std::to_string(i));
  }

  Contraction ctx(circuit, contraction_plan(circuit));

  // Dangling inputs, sorted by (node, port), become the symbolic columns.
  std::vector<int> in_rank = sorted_port_order(circuit.dangling_inputs);
  Frontier f;
  long d_in = 1;
  std::vector<SystemRef> in_systems;
  for (int k : in_rank) {
    const PortRef& p = circuit.dangling_inputs[static_cast<size_t>(k)];
    SystemRef sys = port_systems(
        circuit.nodes[static_cast<size_t>(p.node)].test.input)[static_cast<size_t>(p.port)];
    f.open.push_back(OpenWire{p.node, p.port, sys});
    in_systems.push_back(sys);
    d_in *= sys.rep_dim();
    if (d_in > kMaxFrontier) fail(ErrorKind::Internal, "frontier dimension exceeds limit");
  }
  f.data = Mat::Identity(d_in, d_in);

  for (size_t pos = 0; pos < n; ++pos)
    ctx.step(f, pos, branch_choice[static_cast<size_t>(ctx.order[pos])]);

  // Remaining open wires carry dangling tags (-1, rank); reorder into rank
  // order for a stable output layout.
  std::vector<int> perm(f.open.size());
  std::vector<int> dims(f.open.size());
  for (size_t s = 0; s < f.open.size(); ++s) dims[s] = f.open[s].system.rep_dim();
  std::vector<SystemRef> out_systems;
  for (size_t rank = 0; rank < f.open.size(); ++rank) {
    int found = -1;
    for (size_t s = 0; s < f.open.size(); ++s) {
      if (f.open[s].tag_node == -1 && f.open[s].tag_port == static_cast<int>(rank)) {
        found = static_cast<int>(s);
        break;
      }
    }
    if (found < 0) fail(ErrorKind::Internal, "dangling output lost during contraction");
    perm[rank] = found;
    out_systems.push_back(f.open[static_cast<size_t>(found)].system);
  }
  f.data = permute_rows(f.data, dims, perm);

  const TheoryModel& model = theory(circuit.nodes[0].test.input.theory());
  SystemRef in_sys = model.trivial_system();
  for (const SystemRef& s : in_systems) in_sys = compose_systems(in_sys, s);
  SystemRef out_sys = model.trivial_system();
  for (const SystemRef& s : out_systems) out_sys = compose_systems(out_sys, s);
  return Transformation{in_sys, out_sys, f.data};
}

std::vector<int> contraction_plan(const Circuit& circuit) {
  int n = static_cast<int>(circuit.nodes.size());
  std::vector<int> remaining_inputs(static_cast<size_t>(n), 0);
  for (const Wire& w : circuit.wires) ++remaining_inputs[static_cast<size_t>(w.to_node)];

  long frontier = 1;
  for (const PortRef& p : circuit.dangling_inputs)
    frontier *=
        port_systems(circuit.nodes[static_cast<size_t>(p.node)].test.input)[static_cast<size_t>(p.port)]
            .rep_dim();

  std::vector<bool> done(static_cast<size_t>(n), false);
  std::vector<int> plan;
  plan.reserve(static_cast<size_t>(n));
  for (int step = 0; step < n; ++step) {
    int best = -1;
    long best_dim = 0;
    for (int i = 0; i < n; ++i) {
      if (done[static_cast<size_t>(i)] || remaining_inputs[static_cast<size_t>(i)] > 0) continue;
      const Test& t = circuit.nodes[static_cast<size_t>(i)].test;
      long next = frontier / t.input.rep_dim() * t.output.rep_dim();
      if (best < 0 || next < best_dim) {
        best = i;
        best_dim = next;
      }
    }
    if (best < 0) fail(ErrorKind::CycleDetected, "circuit contains a cycle");
    done[static_cast<size_t>(best)] = true;
    plan.push_back(best);
    frontier = best_dim;
    for (const Wire& w : circuit.wires)
      if (w.from_node == best) --remaining_inputs[static_cast<size_t>(w.to_node)];
  }
  return plan;
}

}  // namespace gpt
