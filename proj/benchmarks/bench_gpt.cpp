// Microbenchmarks for the hot paths: circuit contraction, the LP solver,
// vertex enumeration, and the transformation purity decision.

#include <cstdint>
#include <random>
#include <vector>

#include <benchmark/benchmark.h>

#include "gpt/boxworld.hpp"
#include "gpt/circuit.hpp"
#include "gpt/lp.hpp"
#include "gpt/polytope.hpp"
#include "gpt/purity.hpp"
#include "gpt/theory.hpp"

namespace {

using namespace gpt;

/// Two-wire closed circuit: joint preparation, one channel per wire, joint
/// observation. Deterministic for a fixed seed.
Circuit make_circuit(const TheoryModel& model, std::uint64_t seed) {
  Rng rng(seed);
  const SystemRef a = model.system(Shape::leaf(2));
  const SystemRef b = model.system(Shape::leaf(2));
  const SystemRef ab = compose_systems(a, b);
  Test prep;
  prep.input = model.trivial_system();
  prep.output = ab;
  prep.branches = {Transformation::from_state(model.random_state(ab, rng, false))};
  prep.labels = {"0"};
  std::vector<CircuitNode> nodes = {
      {"prep", prep},
      {"chan_a", model.random_test(a, a, 2, rng)},
      {"chan_b", model.random_test(b, b, 2, rng)},
      {"obs", model.random_test(ab, model.trivial_system(), 2, rng)},
  };
  std::vector<Wire> wires = {{0, 0, 1, 0}, {0, 1, 2, 0}, {1, 0, 3, 0}, {2, 0, 3, 1}};
  return build(std::move(nodes), std::move(wires));
}

void BM_EvaluateCircuit(benchmark::State& state) {
  const TheoryModel& model = theory(static_cast<TheoryId>(state.range(0)));
  const Circuit circuit = make_circuit(model, 42);
  for (auto _ : state) {
    benchmark::DoNotOptimize(evaluate(circuit));
  }
}

/// Covering LP: minimize 1.x subject to A x >= 1, x >= 0 with dense random
/// nonnegative A. Always feasible and bounded.
void BM_LpSolve(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  std::mt19937 gen(7);
  std::uniform_real_distribution<double> entry(0.1, 1.0);
  lp::Problem problem;
  problem.n_vars = n;
  problem.objective = Vec::Ones(n);
  problem.nonneg.assign(static_cast<std::size_t>(n), true);
  for (int row = 0; row < n; ++row) {
    Vec coeffs(n);
    for (int col = 0; col < n; ++col) coeffs(col) = entry(gen);
    problem.add_ge(coeffs, 1.0);
  }
  for (auto _ : state) {
    benchmark::DoNotOptimize(lp::solve(problem));
  }
}

/// Unit hypercube H-description; vertex count doubles per dimension.
void BM_EnumerateVertices(benchmark::State& state) {
  const int dim = static_cast<int>(state.range(0));
  Mat ge = Mat::Zero(2 * dim, dim);
  Vec rhs = Vec::Zero(2 * dim);
  for (int k = 0; k < dim; ++k) {
    ge(2 * k, k) = 1.0;
    ge(2 * k + 1, k) = -1.0;
    rhs(2 * k + 1) = -1.0;
  }
  const Mat eq(0, dim);
  const Vec eq_rhs(0);
  for (auto _ : state) {
    benchmark::DoNotOptimize(polytope::enumerate_vertices(ge, rhs, eq, eq_rhs));
  }
}

/// Extreme-ray decision on a gbit symmetry (LP plus rank cross-check path).
void BM_PureTransformation(benchmark::State& state) {
  const TheoryModel& model = theory(TheoryId::Boxworld);
  const SystemRef gbit = model.system(Shape::gbit());
  const Transformation map{gbit, gbit, boxworld::gbit_symmetries()[1]};
  for (auto _ : state) {
    benchmark::DoNotOptimize(is_pure_transformation(model, map));
  }
}

}  // namespace

BENCHMARK(BM_EvaluateCircuit)
    ->Arg(static_cast<int>(TheoryId::Classical))
    ->Arg(static_cast<int>(TheoryId::Quantum))
    ->Arg(static_cast<int>(TheoryId::Boxworld))
    ->Unit(benchmark::kMicrosecond);
BENCHMARK(BM_LpSolve)->RangeMultiplier(2)->Range(4, 64)->Unit(benchmark::kMicrosecond);
BENCHMARK(BM_EnumerateVertices)->DenseRange(2, 6)->Unit(benchmark::kMicrosecond);
BENCHMARK(BM_PureTransformation)->Unit(benchmark::kMicrosecond);

BENCHMARK_MAIN();
