#include "gpt/entanglement.hpp"

#include <Eigen/Dense>
#include <cmath>
#include <string>
#include <utility>
#include <vector>

#include "gpt/boxworld.hpp"
#include "gpt/compose.hpp"
#include "gpt/errors.hpp"
#include "gpt/purity.hpp"
#include "gpt/quantum.hpp"

namespace gpt {

namespace {

std::pair<SystemRef, SystemRef> bipartite_parts(const TheoryModel& model, const SystemRef& sys) {
  if (!sys.is_composite() || sys.shape().parts.size() != 2)
    fail(ErrorKind::TypeMismatch, "entanglement checks need a two-component composite");
  return {model.system(sys.shape().parts[0]), model.system(sys.shape().parts[1])};
}

}  // namespace

EntanglementResult is_entangled_pure(const TheoryModel& model, const State& state_ab) {
  const auto [sys_a, sys_b] = bipartite_parts(model, state_ab.system);
  if (!is_pure_state(model, state_ab).pure)
    fail(ErrorKind::NotPure, "entanglement is defined for pure states");

  EntanglementResult result;
  if (model.id() == TheoryId::Quantum) {
    const int da = quantum::hilbert_dim(sys_a);
    const int db = quantum::hilbert_dim(sys_b);
    Eigen::SelfAdjointEigenSolver<CMat> solver(quantum::density_matrix(state_ab));
    const CVec psi = solver.eigenvectors().col(solver.eigenvalues().size() - 1);
    CMat m(da, db);
    for (int a = 0; a < da; ++a)
      for (int b = 0; b < db; ++b) m(a, b) = psi(static_cast<Eigen::Index>(a) * db + b);
    Eigen::JacobiSVD<CMat> svd(m, Eigen::ComputeThinU | Eigen::ComputeThinV);
    const double top = svd.singularValues()(0);
    int schmidt_rank = 0;
    for (Eigen::Index k = 0; k < svd.singularValues().size(); ++k)
      if (svd.singularValues()(k) > kRankTol * top) ++schmidt_rank;
    result.entangled = schmidt_rank > 1;
    if (!result.entangled) {
      result.factor_a = quantum::pure_state(sys_a, svd.matrixU().col(0));
      result.factor_b = quantum::pure_state(sys_b, svd.matrixV().col(0).conjugate());
    }
    return result;
  }

  // Polytope theories: pure states are vertices, and separability is vertex
  // identity with a product of component vertices.
  const std::vector<Vec> verts_a = model.pure_state_vertices(sys_a);
  const std::vector<Vec> verts_b = model.pure_state_vertices(sys_b);
  for (const Vec& va : verts_a)
    for (const Vec& vb : verts_b)
      if ((state_ab.coords - linalg::kron(va, vb)).cwiseAbs().maxCoeff() <= 1e-7) {
        result.factor_a = State{sys_a, va};
        result.factor_b = State{sys_b, vb};
        return result;
      }
  result.entangled = true;
  return result;
}

CheckReport entanglement_existence(const TheoryModel& model, const SystemRef& system,
                                   int max_partner) {
  if (max_partner < 1) fail(ErrorKind::BadParams, "max_partner must be positive");
  CheckReport report;
  report.axiom = "entanglement";
  report.theory = model.id();
  report.tolerance = kRankTol;

  if (model.id() == TheoryId::Quantum) {
    const int d = quantum::hilbert_dim(system);
    if (d < 2) {
      report.verdict = Verdict::Impossible;
      report.exhaustion_bound = 0;
      report.note = "one-dimensional system: every joint pure state is a product";
      return report;
    }
    const SystemRef joint = compose_systems(system, system);
    CVec psi = CVec::Zero(static_cast<Eigen::Index>(d) * d);
    for (int i = 0; i < d; ++i)
      psi(static_cast<Eigen::Index>(i) * d + i) = 1.0 / std::sqrt(static_cast<double>(d));
    const State witness = quantum::pure_state(joint, psi);
    const State marginal = marginalize(witness, 0);
    report.verdict = Verdict::Certified;
    report.samples = 1;
    // tr(rho^2) of the marginal: 1/d for the maximally entangled pair.
    report.deviation = quantum::state_purity(marginal);
    report.note = "maximally entangled pair; marginal purity = 1/d";
    report.witness.push_back({"entangled_state", Transformation::from_state(witness)});
    report.witness.push_back({"mixed_marginal", Transformation::from_state(marginal)});
    return report;
  }

  if (model.id() == TheoryId::Classical) {
    // Exhaustive over partner sizes: every composite vertex is a point mass
    // and factors exactly; no entangled pure state exists at any bound.
    int checked = 0;
    for (int m = 2; m <= max_partner; ++m) {
      const SystemRef partner = model.system(Shape::leaf(m));
      const SystemRef joint = compose_systems(system, partner);
      for (const Vec& vertex : model.pure_state_vertices(joint)) {
        const EntanglementResult res = is_entangled_pure(model, State{joint, vertex});
        ++checked;
        if (res.entangled) {
          report.verdict = Verdict::Certified;
          report.samples = checked;
          report.note = "unexpected entangled classical vertex";
          report.witness.push_back({"entangled_state", Transformation::from_state(State{joint, vertex})});
          return report;
        }
      }
    }
    report.verdict = Verdict::Impossible;
    report.samples = checked;
    report.exhaustion_bound = max_partner;
    report.note =
        "all composite vertices factor into point masses; mixed classical states therefore admit "
        "no purification";
    return report;
  }

  if (system.shape() != Shape::gbit())
    fail(ErrorKind::BadShape, "boxworld entanglement search supports a single gbit");
  const SystemRef partner = model.system(Shape::gbit());
  const SystemRef joint = compose_systems(system, partner);
  int checked = 0;
  for (const Vec& vertex : model.pure_state_vertices(joint)) {
    ++checked;
    const State candidate{joint, vertex};
    if (is_entangled_pure(model, candidate).entangled) {
      report.verdict = Verdict::Certified;
      report.samples = checked;
      report.note = "PR-type vertex: entangled with maximally mixed marginals";
      report.witness.push_back({"entangled_state", Transformation::from_state(candidate)});
      report.witness.push_back(
          {"mixed_marginal", Transformation::from_state(marginalize(candidate, 0))});
      return report;
    }
  }
  report.verdict = Verdict::Impossible;
  report.samples = checked;
  report.exhaustion_bound = 1;
  report.note = "no entangled vertex among the bipartite extreme states";
  return report;
}

}  // namespace gpt
