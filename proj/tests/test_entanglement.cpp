#include <doctest.h>

#include <cmath>
#include <functional>

#include "gpt/boxworld.hpp"
#include "gpt/catalog.hpp"
#include "gpt/compose.hpp"
#include "gpt/entanglement.hpp"
#include "gpt/errors.hpp"
#include "gpt/purity.hpp"
#include "gpt/quantum.hpp"

using namespace gpt;

namespace {

ErrorKind kind_of(const std::function<void()>& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.kind();
  }
  return ErrorKind::Internal;
}

}  // namespace

TEST_CASE("quantum: singlet is entangled, computational products are not") {
  const TheoryModel& model = theory(TheoryId::Quantum);
  const SystemRef qubit = model.system(Shape::leaf(2));
  const SystemRef pair = compose_systems(qubit, qubit);

  CHECK(is_entangled_pure(model, named_state(pair, "singlet", {})).entangled);

  const State a = named_state(qubit, "computational", {0});
  const State b = named_state(qubit, "computational", {1});
  const auto r = is_entangled_pure(model, parallel_compose(a, b));
  CHECK_FALSE(r.entangled);
  // Density matrices identify the factors up to phase; compare coords.
  CHECK((r.factor_a.coords - a.coords).lpNorm<Eigen::Infinity>() < 1e-9);
  CHECK((r.factor_b.coords - b.coords).lpNorm<Eigen::Infinity>() < 1e-9);
  CHECK((parallel_compose(r.factor_a, r.factor_b).coords -
         parallel_compose(a, b).coords)
            .lpNorm<Eigen::Infinity>() < 1e-9);

  // Entangled non-maximally entangled state.
  CVec amp = CVec::Zero(4);
  amp(0) = std::sqrt(0.9);
  amp(3) = std::sqrt(0.1);
  CHECK(is_entangled_pure(model, quantum::pure_state(pair, amp)).entangled);
}

TEST_CASE("entanglement input validation") {
  const TheoryModel& model = theory(TheoryId::Quantum);
  const SystemRef qubit = model.system(Shape::leaf(2));
  const SystemRef pair = compose_systems(qubit, qubit);

  CHECK(kind_of([&] {
          is_entangled_pure(model, named_state(qubit, "plus_state", {}));
        }) == ErrorKind::TypeMismatch);
  CHECK(kind_of([&] {
          is_entangled_pure(model, named_state(pair, "maximally_mixed", {4}));
        }) == ErrorKind::NotPure);
}

TEST_CASE("boxworld: the 24 two-gbit vertices split 16 separable + 8 entangled") {
  const TheoryModel& model = theory(TheoryId::Boxworld);
  const SystemRef gbit = model.system(Shape::gbit());
  const SystemRef two = compose_systems(gbit, gbit);

  int entangled = 0, separable = 0;
  for (const Vec& v : boxworld::two_gbit_vertices()) {
    const auto r = is_entangled_pure(model, State{two, v});
    if (r.entangled) {
      ++entangled;
      // Entangled vertices have the center (mixed) marginal.
      const State marg = marginalize(State{two, v}, 0);
      CHECK_FALSE(is_pure_state(model, marg).pure);
    } else {
      ++separable;
      CHECK((parallel_compose(r.factor_a, r.factor_b).coords - v)
                .lpNorm<Eigen::Infinity>() < 1e-9);
    }
  }
  CHECK(entangled == 8);
  CHECK(separable == 16);
}

TEST_CASE("classical: every pure bipartite state is a product") {
  const TheoryModel& model = theory(TheoryId::Classical);
  const SystemRef bit = model.system(Shape::leaf(2));
  const SystemRef trit = model.system(Shape::leaf(3));
  const SystemRef joint = compose_systems(bit, trit);

  for (const Vec& v : model.pure_state_vertices(joint)) {
    const auto r = is_entangled_pure(model, State{joint, v});
    CHECK_FALSE(r.entangled);
    CHECK((parallel_compose(r.factor_a, r.factor_b).coords - v)
              .lpNorm<Eigen::Infinity>() < 1e-12);
  }
}

TEST_CASE("entanglement existence: quantum certifies with a mixed marginal") {
  const TheoryModel& model = theory(TheoryId::Quantum);
  const SystemRef qubit = model.system(Shape::leaf(2));

  const auto report = entanglement_existence(model, qubit);
  CHECK(report.verdict == Verdict::Certified);
  // The witness marginal purity stays at the maximally mixed value.
  CHECK(report.deviation <= 0.5 + 1e-9);
  bool has_state = false;
  for (const auto& item : report.witness)
    if (item.value.is_state_like()) {
      has_state = true;
      const State s = item.value.as_state();
      if (s.system.shape().parts.size() == 2)
        CHECK(is_entangled_pure(model, s).entangled);
    }
  CHECK(has_state);

  // A one-dimensional system has no entanglement to find.
  const SystemRef scalar_sys = model.system(Shape::leaf(1));
  const auto none = entanglement_existence(model, scalar_sys);
  CHECK(none.verdict == Verdict::Impossible);
}

TEST_CASE("entanglement existence: classical impossibility at the search bound") {
  const TheoryModel& model = theory(TheoryId::Classical);
  const SystemRef trit = model.system(Shape::leaf(3));

  const auto report = entanglement_existence(model, trit, 8);
  CHECK(report.verdict == Verdict::Impossible);
  CHECK(report.exhaustion_bound == 8);
  CHECK_FALSE(report.note.empty());
}

TEST_CASE("entanglement existence: boxworld finds a PR-like vertex") {
  const TheoryModel& model = theory(TheoryId::Boxworld);
  const SystemRef gbit = model.system(Shape::gbit());

  const auto report = entanglement_existence(model, gbit, 8);
  CHECK(report.verdict == Verdict::Certified);
  bool verified = false;
  for (const auto& item : report.witness)
    if (item.value.is_state_like()) {
      const State s = item.value.as_state();
      if (s.system.shape().parts.size() == 2) {
        CHECK(is_entangled_pure(model, s).entangled);
        verified = true;
      }
    }
  CHECK(verified);
}
