#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numeric>

#include "gpt/catalog.hpp"
#include "gpt/circuit.hpp"
#include "gpt/compose.hpp"
#include "gpt/errors.hpp"
#include "gpt/quantum.hpp"
#include "gpt/theory.hpp"

#include "support/circuit_gen.hpp"

using namespace gpt;

namespace {

Test preparation(const State& state, const std::string& label = "0") {
  Test t;
  t.input = theory(state.system.theory()).trivial_system();
  t.output = state.system;
  t.branches = {Transformation::from_state(state)};
  t.labels = {label};
  return t;
}

Test observation(const SystemRef& sys, const std::vector<Effect>& effects,
                 const std::vector<std::string>& labels) {
  Test t;
  t.input = sys;
  t.output = theory(sys.theory()).trivial_system();
  for (const Effect& e : effects) t.branches.push_back(Transformation::from_effect(e));
  t.labels = labels;
  return t;
}

ErrorKind kind_of(const std::function<void()>& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.kind();
  }
  return ErrorKind::Internal;
}

}  // namespace

TEST_CASE("die chain: uniform six-sided die, odd/even coarse-graining") {
  const SystemRef die = make_system(TheoryId::Classical, Shape::leaf(6));
  const State u = named_state(die, "uniform", {6});

  Vec odd = Vec::Zero(6);
  odd(0) = odd(2) = odd(4) = 1.0;  // faces 1, 3, 5
  const Effect odd_e{die, odd};
  const Effect even_e{die, Vec(deterministic_effect(die).coords - odd)};

  Circuit c = build({{"roll", preparation(u)},
                     {"parity", observation(die, {odd_e, even_e}, {"odd", "even"})}},
                    {{0, 0, 1, 0}});
  REQUIRE(c.closed());
  const auto result = evaluate(c);
  CHECK(result.distribution.total() == doctest::Approx(1.0).epsilon(1e-12));
  const int i = result.distribution.find({"0", "odd"});
  REQUIRE(i >= 0);
  CHECK(result.distribution.probs(i) == doctest::Approx(0.5).epsilon(1e-12));
}

TEST_CASE("bell circuit: singlet anti-correlations") {
  const SystemRef qubit = make_system(TheoryId::Quantum, Shape::leaf(2));
  const SystemRef pair = compose_systems(qubit, qubit);
  const State singlet = named_state(pair, "singlet", {});

  CVec e0(2), e1(2);
  e0 << 1, 0;
  e1 << 0, 1;
  const Effect p0 = quantum::effect_from_operator(qubit, e0 * e0.adjoint());
  const Effect p1 = quantum::effect_from_operator(qubit, e1 * e1.adjoint());
  const Test meas = observation(qubit, {p0, p1}, {"0", "1"});

  Circuit c = build({{"pair", preparation(singlet)}, {"alice", meas}, {"bob", meas}},
                    {{0, 0, 1, 0}, {0, 1, 2, 0}});
  const auto result = evaluate(c);
  REQUIRE(result.distribution.probs.size() == 4);
  CHECK(result.distribution.total() == doctest::Approx(1.0).epsilon(1e-12));
  auto prob = [&](const char* a, const char* b) {
    const int i = result.distribution.find({"0", a, b});
    REQUIRE(i >= 0);
    return result.distribution.probs(i);
  };
  CHECK(prob("0", "0") == doctest::Approx(0.0).epsilon(1e-12));
  CHECK(prob("1", "1") == doctest::Approx(0.0).epsilon(1e-12));
  CHECK(prob("0", "1") == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(prob("1", "0") == doctest::Approx(0.5).epsilon(1e-12));
}

TEST_CASE("evaluate_open composes the chosen branches") {
  const SystemRef qubit = make_system(TheoryId::Quantum, Shape::leaf(2));
  const State zero = named_state(qubit, "computational", {0});

  CMat h(2, 2);
  h << 1, 1, 1, -1;
  h /= std::sqrt(2.0);
  Test gate;
  gate.input = qubit;
  gate.output = qubit;
  gate.branches = {quantum::unitary_channel(qubit, h)};
  gate.labels = {"0"};

  // prep >> H with a dangling output: the open value is a state-like map.
  Circuit c = build({{"prep", preparation(zero)}, {"h", gate}}, {{0, 0, 1, 0}});
  CHECK_FALSE(c.closed());
  REQUIRE(c.dangling_outputs.size() == 1);
  const Transformation open = evaluate_open(c, {0, 0});
  REQUIRE(open.is_state_like());
  const State plus = named_state(qubit, "plus_state", {});
  CHECK((open.as_state().coords - plus.coords).lpNorm<Eigen::Infinity>() < 1e-12);

  CHECK(kind_of([&] { evaluate(c); }) == ErrorKind::OpenCircuit);
  CHECK(kind_of([&] { evaluate_open(c, {0}); }) == ErrorKind::BranchOutOfRange);
  CHECK(kind_of([&] { evaluate_open(c, {0, 5}); }) == ErrorKind::BranchOutOfRange);
}

TEST_CASE("build rejects type errors, bad selectors, cycles") {
  const SystemRef bit = make_system(TheoryId::Classical, Shape::leaf(2));
  const SystemRef trit = make_system(TheoryId::Classical, Shape::leaf(3));
  const Test prep2 = preparation(named_state(bit, "uniform", {2}));
  const Test obs3 = observation(trit, {deterministic_effect(trit)}, {"0"});
  const Test id2 = [&] {
    Test t;
    t.input = bit;
    t.output = bit;
    t.branches = {Transformation::identity(bit)};
    t.labels = {"0"};
    return t;
  }();

  CHECK(kind_of([&] { build({{"p", prep2}, {"o", obs3}}, {{0, 0, 1, 0}}); }) ==
        ErrorKind::TypeMismatch);
  CHECK(kind_of([&] { build({{"p", prep2}}, {{0, 0, 3, 0}}); }) == ErrorKind::BadSelector);
  CHECK(kind_of([&] { build({{"p", prep2}}, {{0, 2, 0, 0}}); }) == ErrorKind::BadSelector);
  // two wires feeding the same input port
  CHECK(kind_of([&] {
          build({{"a", prep2}, {"b", prep2}, {"c", id2}},
                {{0, 0, 2, 0}, {1, 0, 2, 0}});
        }) == ErrorKind::BadSelector);
  CHECK(kind_of([&] {
          build({{"a", id2}, {"b", id2}}, {{0, 0, 1, 0}, {1, 0, 0, 0}});
        }) == ErrorKind::CycleDetected);
}

TEST_CASE("port systems split composites; trivial side has none") {
  const SystemRef bit = make_system(TheoryId::Classical, Shape::leaf(2));
  const SystemRef trit = make_system(TheoryId::Classical, Shape::leaf(3));
  const SystemRef joint = compose_systems(bit, trit);
  const auto ports = port_systems(joint);
  REQUIRE(ports.size() == 2);
  CHECK(ports[0] == bit);
  CHECK(ports[1] == trit);
  CHECK(port_systems(theory(TheoryId::Classical).trivial_system()).empty());
  CHECK(port_systems(bit).size() == 1);
}

TEST_CASE("order independence: plan and random topological orders agree") {
  for (const TheoryId id :
       {TheoryId::Classical, TheoryId::Quantum, TheoryId::Boxworld}) {
    const TheoryModel& model = theory(id);
    Rng rng(17);
    for (int trial = 0; trial < 10; ++trial) {
      const Circuit c = gpt_tests::random_closed_circuit(model, rng);
      const auto base = evaluate(c);
      CHECK(std::abs(base.distribution.total() - 1.0) < 1e-9);

      const auto plan = contraction_plan(c);
      auto sorted = plan;
      std::sort(sorted.begin(), sorted.end());
      std::vector<int> want(c.nodes.size());
      std::iota(want.begin(), want.end(), 0);
      CHECK(sorted == want);  // the plan is a permutation of the nodes

      const auto via_plan = evaluate_with_order(c, plan);
      CHECK((via_plan.distribution.probs - base.distribution.probs)
                .lpNorm<Eigen::Infinity>() < 1e-12);
      for (int k = 0; k < 3; ++k) {
        const auto order = gpt_tests::random_topo_order(c, rng);
        const auto alt = evaluate_with_order(c, order);
        REQUIRE(alt.distribution.labels == base.distribution.labels);
        CHECK((alt.distribution.probs - base.distribution.probs)
                  .lpNorm<Eigen::Infinity>() < 1e-12);
      }
    }
  }
}

TEST_CASE("disjoint circuits evaluate to the product distribution") {
  Rng rng(23);
  const TheoryModel& model = theory(TheoryId::Quantum);
  for (int trial = 0; trial < 5; ++trial) {
    const Circuit a = gpt_tests::random_closed_circuit(model, rng);
    const Circuit b = gpt_tests::random_closed_circuit(model, rng);
    const Circuit both = gpt_tests::disjoint_union(a, b);
    const auto pa = evaluate(a).distribution;
    const auto pb = evaluate(b).distribution;
    const auto pj = evaluate(both).distribution;
    REQUIRE(pj.probs.size() == pa.probs.size() * pb.probs.size());
    for (int i = 0; i < pa.probs.size(); ++i) {
      for (int j = 0; j < pb.probs.size(); ++j) {
        std::vector<std::string> tuple = pa.labels[i];
        tuple.insert(tuple.end(), pb.labels[j].begin(), pb.labels[j].end());
        const int k = pj.find(tuple);
        REQUIRE(k >= 0);
        CHECK(pj.probs(k) == doctest::Approx(pa.probs(i) * pb.probs(j)).epsilon(1e-12));
      }
    }
  }
}

TEST_CASE("scalar of a one-branch closed circuit is its probability") {
  const SystemRef bit = make_system(TheoryId::Classical, Shape::leaf(2));
  const State u = named_state(bit, "uniform", {2});
  Vec first = Vec::Zero(2);
  first(0) = 1.0;
  Circuit c = build({{"p", preparation(u)},
                     {"e", observation(bit, {Effect{bit, first}}, {"hit"})}},
                    {{0, 0, 1, 0}});
  // one branch per node, so the distribution has a single entry
  const auto r = evaluate(c);
  CHECK(r.scalar() == doctest::Approx(0.5).epsilon(1e-12));
}

TEST_CASE("build is idempotent on its own output") {
  Rng rng(5);
  const Circuit c = gpt_tests::random_closed_circuit(theory(TheoryId::Classical), rng);
  const Circuit again = build(c.nodes, c.wires);
  const auto r1 = evaluate(c);
  const auto r2 = evaluate(again);
  CHECK((r1.distribution.probs - r2.distribution.probs).lpNorm<Eigen::Infinity>() == 0.0);
}
