#include "gpt/purification.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>
#include <unordered_set>
#include <vector>

#include "gpt/classical.hpp"
#include "gpt/compose.hpp"
#include "gpt/errors.hpp"
#include "gpt/lp.hpp"
#include "gpt/purity.hpp"
#include "gpt/quantum.hpp"

namespace gpt {

namespace {

constexpr double kMatchTol = 1e-9;

State point_mass_state(const SystemRef& sys, int index) {
  Vec coords = Vec::Zero(sys.rep_dim());
  coords(index) = 1.0;
  return State{sys, coords};
}

PurificationResult quantum_purify(const State& state) {
  const SystemRef& sys = state.system;
  const CMat rho = quantum::density_matrix(state);
  Eigen::SelfAdjointEigenSolver<CMat> solver(rho);
  const int d = static_cast<int>(rho.rows());
  const double top = solver.eigenvalues().maxCoeff();

  // Environment dimension = spectral rank; eigenvalues come back ascending.
  // The cutoff stays near machine precision so the marginal reproduces the
  // input exactly, not just within the purity tolerance.
  std::vector<int> kept;
  for (int e = d - 1; e >= 0; --e)
    if (solver.eigenvalues()(e) > std::max(top * 1e-13, 1e-15)) kept.push_back(e);
  const int r = static_cast<int>(kept.size());

  const SystemRef env = quantum_theory().system(Shape::leaf(r));
  const SystemRef joint = compose_systems(sys, env);
  CVec psi = CVec::Zero(static_cast<Eigen::Index>(d) * r);
  for (int slot = 0; slot < r; ++slot) {
    CVec vec = solver.eigenvectors().col(kept[static_cast<std::size_t>(slot)]);
    // Deterministic phase: largest-magnitude amplitude real positive.
    Eigen::Index pivot = 0;
    vec.cwiseAbs().maxCoeff(&pivot);
    vec *= std::polar(1.0, -std::arg(vec(pivot)));
    const double weight = std::sqrt(solver.eigenvalues()(kept[static_cast<std::size_t>(slot)]));
    for (int a = 0; a < d; ++a) psi(static_cast<Eigen::Index>(a) * r + slot) += weight * vec(a);
  }

  PurificationResult result;
  result.found = true;
  result.input = state;
  result.environment = env;
  result.pure_state = quantum::pure_state(joint, psi);
  result.note = "environment dimension = rank of the density matrix";

  const State marginal = marginalize(result.pure_state, 0);
  if ((marginal.coords - state.coords).cwiseAbs().maxCoeff() > 1e-7)
    fail(ErrorKind::Internal, "purification marginal drifted from the input state");
  return result;
}

// Pure joint states are enumerable here (point masses / two-gbit vertices),
// so the negative answer is an exhaustive scan, not a sampling claim.
PurificationResult vertex_purify(const TheoryModel& model, const State& state, int max_env,
                                 int env_leaf_lo, int env_leaf_hi, const std::string& cap_note) {
  PurificationResult result;
  result.input = state;
  for (int m = env_leaf_lo; m <= env_leaf_hi; ++m) {
    const SystemRef env = model.system(Shape::leaf(m));
    const SystemRef joint = compose_systems(state.system, env);
    for (const Vec& vertex : model.pure_state_vertices(joint)) {
      const State candidate{joint, vertex};
      const State marginal = marginalize(candidate, 0);
      const double gap = (marginal.coords - state.coords).cwiseAbs().maxCoeff();
      if (gap <= kMatchTol) {
        result.found = true;
        result.environment = env;
        result.pure_state = candidate;
        result.note = "vertex search, environment " + env.str();
        return result;
      }
    }
  }
  result.exhaustion_bound = max_env;
  result.note = cap_note;
  return result;
}

CheckReport finish_connection(CheckReport report, const PurificationResult& p1,
                              const PurificationResult& p2, double tol,
                              const Transformation* candidate, double deviation) {
  report.deviation = deviation;
  if (candidate != nullptr && deviation <= tol) {
    report.verdict = Verdict::Certified;
    report.witness.push_back({"environment_reversible", *candidate});
    return report;
  }
  report.verdict = Verdict::Fails;
  report.witness.push_back({"purification_1", Transformation::from_state(p1.pure_state)});
  report.witness.push_back({"purification_2", Transformation::from_state(p2.pure_state)});
  if (candidate != nullptr) report.witness.push_back({"best_candidate", *candidate});
  return report;
}

CVec amplitudes_of_pure(const State& state) {
  const CMat rho = quantum::density_matrix(state);
  Eigen::SelfAdjointEigenSolver<CMat> solver(rho);
  const Eigen::Index last = rho.rows() - 1;
  const double top = solver.eigenvalues()(last);
  if (top < 1.0 - 1e-6 ||
      (last > 0 && solver.eigenvalues()(last - 1) > kRankTol * std::max(top, 1.0)))
    fail(ErrorKind::NotPure, "purification state is not rank one");
  CVec psi = solver.eigenvectors().col(last) * std::sqrt(top);
  return psi;
}

}  // namespace

PurificationResult purify_state(const TheoryModel& model, const State& state, int max_env) {
  if (!model.valid_state(state, 1e-7) || !state.is_normalized(1e-7))
    fail(ErrorKind::InvalidState, "purification needs a valid normalized state");
  if (max_env < 1) fail(ErrorKind::BadParams, "max_env must be positive");

  if (is_pure_state(model, state).pure) {
    PurificationResult result;
    result.found = true;
    result.input = state;
    result.environment = model.trivial_system();
    result.pure_state = state;
    result.note = "input already pure, trivial environment";
    return result;
  }

  switch (model.id()) {
    case TheoryId::Quantum:
      return quantum_purify(state);
    case TheoryId::Classical:
      return vertex_purify(model, state, max_env, 2, max_env,
                           "no pure joint state has this marginal for any environment of size <= " +
                               std::to_string(max_env) +
                               " (point-mass marginals are point masses)");
    case TheoryId::Boxworld: {
      if (state.system.shape() != Shape::gbit())
        fail(ErrorKind::BadShape, "boxworld purification supports a single gbit");
      // One gbit of environment is the enumerable frontier; wider maximal
      // tensor products have no vertex list to scan.
      PurificationResult result =
          vertex_purify(model, state, 1, 2, 2,
                        "no two-gbit vertex has this marginal; search capped at a one-gbit "
                        "environment");
      result.exhaustion_bound = result.found ? -1 : 1;
      return result;
    }
  }
  fail(ErrorKind::Internal, "unhandled theory");
}

CheckReport check_purification_uniqueness(const TheoryModel& model, const PurificationResult& p1,
                                          const PurificationResult& p2, double tol) {
  if (!p1.found || !p2.found)
    fail(ErrorKind::BadParams, "uniqueness check needs two constructed purifications");
  if (p1.input.system != p2.input.system)
    fail(ErrorKind::TypeMismatch, "purified states live on different systems");
  if (p1.environment != p2.environment)
    fail(ErrorKind::TypeMismatch, "purifications use different environments");
  if ((p1.input.coords - p2.input.coords).cwiseAbs().maxCoeff() > std::max(tol, 1e-7))
    fail(ErrorKind::MarginalMismatch, "the two purifications have different marginals");

  CheckReport report;
  report.axiom = "purification";
  report.theory = model.id();
  report.tolerance = tol;
  report.note = "uniqueness up to a reversible map on the environment";

  const SystemRef& env = p1.environment;
  if (env.is_trivial()) {
    const double dev = (p1.pure_state.coords - p2.pure_state.coords).cwiseAbs().maxCoeff();
    const Transformation id = Transformation::identity(env);
    report.samples = 1;
    return finish_connection(report, p1, p2, tol, &id, dev);
  }

  const Transformation id_sys = Transformation::identity(p1.input.system);

  if (model.id() == TheoryId::Quantum) {
    const int de = quantum::hilbert_dim(env);
    const int da = quantum::hilbert_dim(p1.input.system);
    const CVec psi1 = amplitudes_of_pure(p1.pure_state);
    const CVec psi2 = amplitudes_of_pure(p2.pure_state);
    CMat m1(da, de), m2(da, de);
    for (int a = 0; a < da; ++a)
      for (int e = 0; e < de; ++e) {
        m1(a, e) = psi1(static_cast<Eigen::Index>(a) * de + e);
        m2(a, e) = psi2(static_cast<Eigen::Index>(a) * de + e);
      }
    // Orthogonal Procrustes: the unitary X minimizing |M1 X - M2| connects
    // the amplitude matrices; the environment channel is its transpose.
    Eigen::JacobiSVD<CMat> svd(m1.adjoint() * m2, Eigen::ComputeFullU | Eigen::ComputeFullV);
    const CMat x = svd.matrixU() * svd.matrixV().adjoint();
    const Transformation shift = quantum::unitary_channel(env, x.transpose());
    const Transformation full = parallel_compose(id_sys, shift);
    const double dev =
        (full.apply(p1.pure_state).coords - p2.pure_state.coords).cwiseAbs().maxCoeff();
    report.samples = 1;
    return finish_connection(report, p1, p2, tol, &shift, dev);
  }

  // Finite theories: exhaust the environment's reversible group.
  const std::vector<Mat> group = model.reversible_group(env);
  double best = std::numeric_limits<double>::infinity();
  const Mat* best_matrix = nullptr;
  for (const Mat& g : group) {
    const Transformation shift{env, env, g};
    const Transformation full = parallel_compose(id_sys, shift);
    const double dev =
        (full.apply(p1.pure_state).coords - p2.pure_state.coords).cwiseAbs().maxCoeff();
    if (dev < best) {
      best = dev;
      best_matrix = &g;
    }
    if (best <= tol) break;
  }
  report.samples = static_cast<int>(group.size());
  report.exhaustion_bound = static_cast<int>(group.size());
  Transformation candidate{env, env, best_matrix != nullptr ? *best_matrix : Mat()};
  return finish_connection(report, p1, p2, tol, best_matrix != nullptr ? &candidate : nullptr,
                           best);
}

DilationResult dilate_channel(const Transformation& channel) {
  if (channel.input.theory() != TheoryId::Quantum || channel.output.theory() != TheoryId::Quantum)
    fail(ErrorKind::TheoryMismatch, "dilate_channel expects a quantum channel");
  const int din = quantum::hilbert_dim(channel.input);
  const int dout = quantum::hilbert_dim(channel.output);
  if (din != dout) fail(ErrorKind::BadShape, "dilation needs equal input and output dimensions");
  if (!quantum_theory().valid_transformation(channel, 1e-7))
    fail(ErrorKind::InvalidTransformation, "dilate_channel expects a completely positive map");
  const Effect back = channel.pullback(deterministic_effect(channel.output));
  if ((back.coords - quantum_theory().unit_coords(channel.input)).cwiseAbs().maxCoeff() > 1e-7)
    fail(ErrorKind::NotTracePreserving, "dilation needs a trace-preserving channel");

  const std::vector<CMat> kraus = quantum::kraus_of(channel, 1e-10);
  const int d = din;
  const int r = std::max<int>(1, static_cast<int>(kraus.size()));

  DilationResult result;
  result.environment = quantum_theory().system(Shape::leaf(r));

  // Stinespring isometry, environment second: V|b> = sum_k K_k|b> (x) |k>.
  const Eigen::Index dim = static_cast<Eigen::Index>(d) * r;
  CMat u = CMat::Zero(dim, dim);
  for (int b = 0; b < d; ++b)
    for (int k = 0; k < r; ++k)
      for (int a = 0; a < d; ++a)
        u(static_cast<Eigen::Index>(a) * r + k, static_cast<Eigen::Index>(b) * r) =
            kraus[static_cast<std::size_t>(k)](a, b);

  // Complete the d isometry columns (slots b*r) to a unitary, filling the
  // remaining slots by Gram-Schmidt over the canonical basis.
  std::vector<Eigen::Index> fixed;
  for (int b = 0; b < d; ++b) fixed.push_back(static_cast<Eigen::Index>(b) * r);
  std::vector<Eigen::Index> open;
  for (Eigen::Index c = 0; c < dim; ++c)
    if (c % r != 0) open.push_back(c);
  std::size_t next_open = 0;
  for (Eigen::Index j = 0; j < dim && next_open < open.size(); ++j) {
    CVec cand = CVec::Zero(dim);
    cand(j) = 1.0;
    for (int pass = 0; pass < 2; ++pass) {
      for (Eigen::Index c : fixed) cand -= u.col(c).dot(cand) * u.col(c);
      for (std::size_t k = 0; k < next_open; ++k)
        cand -= u.col(open[k]).dot(cand) * u.col(open[k]);
    }
    if (cand.norm() > 1e-6) u.col(open[next_open++]) = cand.normalized();
  }
  if (next_open != open.size()) fail(ErrorKind::Internal, "unitary completion ran short");

  const SystemRef joint = compose_systems(channel.input, result.environment);
  result.reversible = quantum::unitary_channel(joint, u);
  CVec env0 = CVec::Zero(r);
  env0(0) = 1.0;
  result.env_state = quantum::pure_state(result.environment, env0);

  // Deterministic seeded agreement check on mixed probe states.
  Rng rng(0x9e3779b97f4a7c15ULL);
  double worst = 0.0;
  for (int trial = 0; trial < 20; ++trial) {
    const State probe = quantum_theory().random_state(channel.input, rng, false);
    const State evolved = result.reversible.apply(parallel_compose(probe, result.env_state));
    const State dilated =
        result.environment.is_trivial() ? evolved : marginalize(evolved, 0);
    const State direct = channel.apply(probe);
    worst = std::max(worst, (dilated.coords - direct.coords).cwiseAbs().maxCoeff());
  }
  result.residual = worst;
  if (worst > 1e-6) fail(ErrorKind::Internal, "dilation disagrees with the channel");
  return result;
}

CheckReport classical_dilation_search(const Transformation& channel, int max_env,
                                      bool allow_mixed_env) {
  if (channel.input.theory() != TheoryId::Classical ||
      channel.output.theory() != TheoryId::Classical)
    fail(ErrorKind::TheoryMismatch, "classical dilation expects a classical channel");
  const Mat& t = channel.matrix;
  const int d = static_cast<int>(t.rows());
  if (t.rows() != t.cols())
    fail(ErrorKind::BadShape, "dilation needs equal input and output dimensions");
  if (t.minCoeff() < -1e-9) fail(ErrorKind::BadMatrix, "channel has negative entries");
  for (int j = 0; j < d; ++j)
    if (std::abs(t.col(j).sum() - 1.0) > 1e-9)
      fail(ErrorKind::BadMatrix, "channel columns must sum to one");
  if (max_env < 1) fail(ErrorKind::BadParams, "max_env must be positive");

  CheckReport report;
  report.axiom = "purification";
  report.theory = TheoryId::Classical;
  report.tolerance = kMatchTol;

  // Deterministic channels dilate with a pure environment sized by the
  // largest fiber of the underlying function.
  bool deterministic = true;
  std::vector<int> image(static_cast<std::size_t>(d), -1);
  for (int j = 0; j < d && deterministic; ++j) {
    for (int b = 0; b < d; ++b) {
      if (t(b, j) > 1.0 - 1e-9)
        image[static_cast<std::size_t>(j)] = b;
      else if (t(b, j) > 1e-9)
        deterministic = false;
    }
    if (image[static_cast<std::size_t>(j)] < 0) deterministic = false;
  }

  if (deterministic) {
    std::vector<int> fiber_rank(static_cast<std::size_t>(d), 0);
    std::vector<int> fiber_size(static_cast<std::size_t>(d), 0);
    for (int j = 0; j < d; ++j)
      fiber_rank[static_cast<std::size_t>(j)] = fiber_size[static_cast<std::size_t>(image[j])]++;
    const int m = *std::max_element(fiber_size.begin(), fiber_size.end());
    if (m > max_env) {
      report.verdict = Verdict::Impossible;
      report.exhaustion_bound = max_env;
      report.note = "pure-environment dilation needs environment size " + std::to_string(m) +
                    " (largest fiber), beyond max_env";
      report.witness.push_back({"channel", channel});
      return report;
    }
    const SystemRef env = classical_theory().system(Shape::leaf(m));
    const SystemRef joint = compose_systems(channel.input, env);
    const Eigen::Index dim = static_cast<Eigen::Index>(d) * m;
    // (a, 0) -> (f(a), rank within fiber); spare slots pair up in order.
    std::vector<int> target(static_cast<std::size_t>(dim), -1);
    std::vector<bool> used(static_cast<std::size_t>(dim), false);
    for (int a = 0; a < d; ++a) {
      const int to = image[static_cast<std::size_t>(a)] * m + fiber_rank[static_cast<std::size_t>(a)];
      target[static_cast<std::size_t>(a) * static_cast<std::size_t>(m)] = to;
      used[static_cast<std::size_t>(to)] = true;
    }
    int spare = 0;
    for (Eigen::Index s = 0; s < dim; ++s) {
      if (target[static_cast<std::size_t>(s)] >= 0) continue;
      while (used[static_cast<std::size_t>(spare)]) ++spare;
      target[static_cast<std::size_t>(s)] = spare;
      used[static_cast<std::size_t>(spare)] = true;
    }
    Mat perm = Mat::Zero(dim, dim);
    for (Eigen::Index s = 0; s < dim; ++s) perm(target[static_cast<std::size_t>(s)], s) = 1.0;
    report.verdict = Verdict::Certified;
    report.note = "deterministic channel, permutation dynamics with environment size " +
                  std::to_string(m);
    report.witness.push_back({"reversible", Transformation{joint, joint, perm}});
    report.witness.push_back(
        {"environment_state", Transformation::from_state(point_mass_state(env, 0))});
    return report;
  }

  double nondet = 0.0;
  for (int j = 0; j < d; ++j) nondet = std::max(nondet, 1.0 - t.col(j).maxCoeff());

  if (!allow_mixed_env) {
    // Permutations map point masses to point masses, so every induced
    // channel on a point-mass environment is deterministic, whatever the
    // environment size. The bound below is therefore not the real frontier
    // of the claim; it mirrors the requested search window.
    report.verdict = Verdict::Impossible;
    report.exhaustion_bound = max_env;
    report.deviation = nondet;
    report.note =
        "permutation dynamics with a point-mass environment induce deterministic channels; "
        "this channel is not deterministic (holds for every environment size)";
    report.witness.push_back({"channel", channel});
    return report;
  }

  // Mixed environments: exhaust permutations of system x environment and
  // solve one feasibility LP per distinct slice family for the environment
  // weights eta.
  constexpr long kPermCap = 200000;
  long examined = 0;
  int searched = 0;
  for (int m = 1; m <= max_env; ++m) {
    const Eigen::Index dim = static_cast<Eigen::Index>(d) * m;
    if (dim > 8 || examined >= kPermCap) break;
    std::vector<int> perm(static_cast<std::size_t>(dim));
    std::iota(perm.begin(), perm.end(), 0);
    std::unordered_set<std::string> seen;
    bool capped = false;
    do {
      if (++examined > kPermCap) {
        capped = true;
        break;
      }
      // Slice k of the permutation acts on the system as j -> A(perm(j, k)).
      std::string key(static_cast<std::size_t>(dim), '\0');
      for (Eigen::Index s = 0; s < dim; ++s)
        key[static_cast<std::size_t>(s)] = static_cast<char>(perm[static_cast<std::size_t>(s)] / m);
      if (!seen.insert(key).second) continue;

      lp::Problem problem = lp::Problem::feasibility(m);
      problem.nonneg.assign(static_cast<std::size_t>(m), true);
      problem.add_eq(Vec::Ones(m), 1.0);
      for (int b = 0; b < d; ++b)
        for (int j = 0; j < d; ++j) {
          Vec row = Vec::Zero(m);
          for (int k = 0; k < m; ++k)
            if (perm[static_cast<std::size_t>(j) * static_cast<std::size_t>(m) +
                     static_cast<std::size_t>(k)] /
                    m ==
                b)
              row(k) += 1.0;
          problem.add_eq(row, t(b, j));
        }
      const lp::Solution solution = lp::solve(problem);
      if (solution.status != lp::Status::Optimal) continue;

      // Rebuild the induced channel from (perm, eta) and accept on match.
      Mat induced = Mat::Zero(d, d);
      for (int j = 0; j < d; ++j)
        for (int k = 0; k < m; ++k)
          induced(perm[static_cast<std::size_t>(j) * static_cast<std::size_t>(m) +
                       static_cast<std::size_t>(k)] /
                      m,
                  j) += solution.x(k);
      if ((induced - t).cwiseAbs().maxCoeff() > kMatchTol) continue;

      const SystemRef env = classical_theory().system(Shape::leaf(m));
      const SystemRef joint = compose_systems(channel.input, env);
      Mat perm_matrix = Mat::Zero(dim, dim);
      for (Eigen::Index s = 0; s < dim; ++s) perm_matrix(perm[static_cast<std::size_t>(s)], s) = 1.0;
      report.verdict = Verdict::Certified;
      report.samples = static_cast<int>(examined);
      report.note = "permutation dynamics with a mixed environment of size " + std::to_string(m);
      report.witness.push_back({"reversible", Transformation{joint, joint, perm_matrix}});
      report.witness.push_back(
          {"environment_state", Transformation::from_state(State{env, solution.x})});
      return report;
    } while (std::next_permutation(perm.begin(), perm.end()));
    if (capped) break;
    searched = m;
  }

  report.verdict = Verdict::Impossible;
  report.samples = static_cast<int>(examined);
  report.exhaustion_bound = searched;
  report.deviation = nondet;
  report.note = searched == max_env
                    ? "no permutation and environment state reproduce the channel within the bound"
                    : "search capped at environment size " + std::to_string(searched) +
                          " (permutation space limit)";
  report.witness.push_back({"channel", channel});
  return report;
}

}  // namespace gpt
