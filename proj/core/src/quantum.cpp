#include "gpt/quantum.hpp"

#include <cmath>
#include <map>
#include <mutex>
#include <string>

#include "gpt/compose.hpp"
#include "gpt/errors.hpp"

namespace gpt {

namespace quantum {

namespace {

int hilbert_dim_of_shape(const Shape& shape) {
  if (shape.is_leaf()) return shape.dim;
  int dim = 1;
  for (const Shape& part : shape.parts) dim *= hilbert_dim_of_shape(part);
  return dim;
}

std::vector<CMat> build_basis(const Shape& shape) {
  if (shape.is_leaf()) {
    const linalg::HermitianBasis& basis = linalg::HermitianBasis::get(shape.dim);
    std::vector<CMat> elements;
    elements.reserve(basis.size());
    for (int a = 0; a < basis.size(); ++a) elements.push_back(basis.element(a));
    return elements;
  }
  std::vector<CMat> acc{CMat::Ones(1, 1)};
  for (const Shape& part : shape.parts) {
    const std::vector<CMat> factor = build_basis(part);
    std::vector<CMat> next;
    next.reserve(acc.size() * factor.size());
    for (const CMat& a : acc)
      for (const CMat& b : factor) next.push_back(linalg::kron(a, b));
    acc = std::move(next);
  }
  return acc;
}

}  // namespace

int hilbert_dim(const SystemRef& sys) { return hilbert_dim_of_shape(sys.shape()); }

const std::vector<CMat>& operator_basis(const SystemRef& sys) {
  static std::mutex mutex;
  static std::map<std::string, std::vector<CMat>> cache;
  std::lock_guard<std::mutex> lock(mutex);
  auto it = cache.find(sys.shape().str());
  if (it == cache.end())
    it = cache.emplace(sys.shape().str(), build_basis(sys.shape())).first;
  return it->second;
}

Vec coords_of_operator(const SystemRef& sys, const CMat& hermitian) {
  const std::vector<CMat>& basis = operator_basis(sys);
  Vec coords(static_cast<Eigen::Index>(basis.size()));
  for (std::size_t a = 0; a < basis.size(); ++a)
    coords(static_cast<Eigen::Index>(a)) = (basis[a].adjoint() * hermitian).trace().real();
  return coords;
}

CMat operator_of_coords(const SystemRef& sys, const Vec& coords) {
  const std::vector<CMat>& basis = operator_basis(sys);
  const int d = hilbert_dim(sys);
  CMat out = CMat::Zero(d, d);
  for (std::size_t a = 0; a < basis.size(); ++a)
    out += coords(static_cast<Eigen::Index>(a)) * basis[a];
  return out;
}

CMat density_matrix(const State& state) { return operator_of_coords(state.system, state.coords); }

State state_from_density(const SystemRef& sys, const CMat& rho) {
  return State{sys, coords_of_operator(sys, rho)};
}

CMat effect_operator(const Effect& effect) {
  return operator_of_coords(effect.system, effect.coords);
}

Effect effect_from_operator(const SystemRef& sys, const CMat& op) {
  return Effect{sys, coords_of_operator(sys, op)};
}

State pure_state(const SystemRef& sys, const CVec& amplitudes) {
  CVec psi = amplitudes.normalized();
  return state_from_density(sys, psi * psi.adjoint());
}

Transformation channel_from_kraus(const SystemRef& in, const SystemRef& out,
                                  const std::vector<CMat>& kraus) {
  const std::vector<CMat>& in_basis = operator_basis(in);
  const std::vector<CMat>& out_basis = operator_basis(out);
  Mat m(static_cast<Eigen::Index>(out_basis.size()), static_cast<Eigen::Index>(in_basis.size()));
  for (std::size_t b = 0; b < in_basis.size(); ++b) {
    CMat image = CMat::Zero(out_basis.front().rows(), out_basis.front().cols());
    for (const CMat& k : kraus) image += k * in_basis[b] * k.adjoint();
    for (std::size_t a = 0; a < out_basis.size(); ++a)
      m(static_cast<Eigen::Index>(a), static_cast<Eigen::Index>(b)) =
          (out_basis[a].adjoint() * image).trace().real();
  }
  return Transformation{in, out, m};
}

Transformation unitary_channel(const SystemRef& sys, const CMat& unitary) {
  return channel_from_kraus(sys, sys, {unitary});
}

namespace {

/// Real-linear action of the transformation extended to arbitrary complex
/// matrices by splitting into Hermitian parts.
CMat apply_to_matrix(const Transformation& t, const CMat& x) {
  const Complex i01(0.0, 1.0);
  const CMat h1 = 0.5 * (x + x.adjoint());
  const CMat h2 = (x - x.adjoint()) / (2.0 * i01);
  const Vec out1 = t.matrix * coords_of_operator(t.input, h1);
  const Vec out2 = t.matrix * coords_of_operator(t.input, h2);
  return operator_of_coords(t.output, out1) + i01 * operator_of_coords(t.output, out2);
}

}  // namespace

CMat choi_matrix(const Transformation& t) {
  const int din = hilbert_dim(t.input);
  const int dout = hilbert_dim(t.output);
  CMat choi = CMat::Zero(dout * din, dout * din);
  for (int i = 0; i < din; ++i) {
    for (int j = 0; j < din; ++j) {
      CMat unit = CMat::Zero(din, din);
      unit(i, j) = 1.0;
      CMat eij = CMat::Zero(din, din);
      eij(i, j) = 1.0;
      choi += linalg::kron(apply_to_matrix(t, unit), eij);
    }
  }
  return choi;
}

std::vector<CMat> kraus_of(const Transformation& t, double threshold) {
  const int din = hilbert_dim(t.input);
  const int dout = hilbert_dim(t.output);
  const CMat choi = choi_matrix(t);
  Eigen::SelfAdjointEigenSolver<CMat> solver(0.5 * (choi + choi.adjoint()));
  const double largest = solver.eigenvalues().cwiseAbs().maxCoeff();
  std::vector<CMat> kraus;
  for (Eigen::Index e = 0; e < solver.eigenvalues().size(); ++e) {
    const double lambda = solver.eigenvalues()(e);
    if (lambda <= std::max(threshold * largest, 0.0)) continue;
    // Choi column index is (out_row * din + in_col); unvectorize accordingly.
    CMat k(dout, din);
    for (int r = 0; r < dout; ++r)
      for (int c = 0; c < din; ++c) k(r, c) = solver.eigenvectors()(r * din + c, e);
    kraus.push_back(std::sqrt(lambda) * k);
  }
  return kraus;
}

double state_purity(const State& state) {
  const CMat rho = density_matrix(state);
  const double trace = rho.trace().real();
  if (trace <= 0.0) fail(ErrorKind::InvalidState, "state has nonpositive weight");
  const CMat normalized = rho / trace;
  return (normalized * normalized).trace().real();
}

Rng::result_type mix_seed(Rng& rng) { return rng(); }

CMat random_unitary(int dim, Rng& rng) {
  std::normal_distribution<double> gauss(0.0, 1.0);
  CMat g(dim, dim);
  for (int r = 0; r < dim; ++r)
    for (int c = 0; c < dim; ++c) g(r, c) = Complex(gauss(rng), gauss(rng));
  Eigen::HouseholderQR<CMat> qr(g);
  CMat q = qr.householderQ();
  CMat r = qr.matrixQR().triangularView<Eigen::Upper>();
  // Fix the phase ambiguity so the distribution is Haar.
  for (int c = 0; c < dim; ++c) {
    const Complex diag = r(c, c);
    q.col(c) *= (std::abs(diag) > 0.0) ? diag / std::abs(diag) : 1.0;
  }
  return q;
}

CVec random_pure_vector(int dim, Rng& rng) {
  std::normal_distribution<double> gauss(0.0, 1.0);
  CVec psi(dim);
  for (int k = 0; k < dim; ++k) psi(k) = Complex(gauss(rng), gauss(rng));
  return psi.normalized();
}

}  // namespace quantum

int QuantumTheory::leaf_rep_dim(int leaf_dim) const {
  if (leaf_dim < 1) fail(ErrorKind::BadShape, "quantum system needs d >= 1");
  return leaf_dim * leaf_dim;
}

bool QuantumTheory::valid_state(const State& state, double tol) const {
  const CMat rho = quantum::density_matrix(state);
  if (linalg::min_eigenvalue(rho) < -tol) return false;
  return rho.trace().real() <= 1.0 + tol;
}

bool QuantumTheory::valid_effect(const Effect& effect, double tol) const {
  const CMat op = quantum::effect_operator(effect);
  if (linalg::min_eigenvalue(op) < -tol) return false;
  const CMat complement = CMat::Identity(op.rows(), op.cols()) - op;
  return linalg::min_eigenvalue(complement) >= -tol;
}

bool QuantumTheory::valid_transformation(const Transformation& t, double tol) const {
  if (t.input.theory() != TheoryId::Quantum || t.output.theory() != TheoryId::Quantum)
    return false;
  const CMat choi = quantum::choi_matrix(t);
  if (linalg::min_eigenvalue(choi) < -tol * std::max(1.0, choi.cwiseAbs().maxCoeff()))
    return false;
  // Weight non-increase: tr_out of the Choi matrix at most the identity.
  const int din = quantum::hilbert_dim(t.input);
  const int dout = quantum::hilbert_dim(t.output);
  CMat reduced = CMat::Zero(din, din);
  for (int r = 0; r < dout; ++r)
    reduced += choi.block(r * din, r * din, din, din);
  const CMat slack = CMat::Identity(din, din) - reduced;
  return linalg::min_eigenvalue(slack) >= -tol * std::max(1.0, double(dout));
}

Vec QuantumTheory::leaf_unit(int leaf_dim) const {
  // Identity operator: sqrt(d) times the normalized identity basis element.
  Vec unit = Vec::Zero(leaf_rep_dim(leaf_dim));
  unit(0) = std::sqrt(double(leaf_dim));
  return unit;
}

std::vector<Vec> QuantumTheory::pure_state_vertices(const SystemRef& sys) const {
  fail(ErrorKind::BadShape,
       "quantum pure states form a continuum; sample instead (" + sys.str() + ")");
}

std::vector<Mat> QuantumTheory::reversible_group(const SystemRef& sys) const {
  fail(ErrorKind::BadShape,
       "quantum reversible group is continuous; sample instead (" + sys.str() + ")");
}

State QuantumTheory::random_state(const SystemRef& sys, Rng& rng, bool pure) const {
  const int d = quantum::hilbert_dim(sys);
  if (pure) {
    const CVec psi = quantum::random_pure_vector(d, rng);
    return quantum::state_from_density(sys, psi * psi.adjoint());
  }
  std::normal_distribution<double> gauss(0.0, 1.0);
  CMat g(d, d);
  for (int r = 0; r < d; ++r)
    for (int c = 0; c < d; ++c) g(r, c) = Complex(gauss(rng), gauss(rng));
  CMat rho = g * g.adjoint();
  rho /= rho.trace().real();
  return quantum::state_from_density(sys, rho);
}

Test QuantumTheory::random_test(const SystemRef& in, const SystemRef& out, int n_outcomes,
                                Rng& rng) const {
  if (n_outcomes < 1) fail(ErrorKind::BadArity, "need at least one outcome");
  const int din = quantum::hilbert_dim(in);
  const int dout = quantum::hilbert_dim(out);
  // One or more Kraus operators per outcome; the stacked family is an
  // isometry, so the coarse-grained channel is trace preserving.
  int per_branch = 1;
  while (n_outcomes * per_branch * dout < din) ++per_branch;
  const int total = n_outcomes * per_branch;
  std::normal_distribution<double> gauss(0.0, 1.0);
  CMat stacked(total * dout, din);
  for (Eigen::Index r = 0; r < stacked.rows(); ++r)
    for (Eigen::Index c = 0; c < stacked.cols(); ++c)
      stacked(r, c) = Complex(gauss(rng), gauss(rng));
  Eigen::HouseholderQR<CMat> qr(stacked);
  CMat isometry = CMat(qr.householderQ()).leftCols(din);

  Test test;
  test.input = in;
  test.output = out;
  for (int b = 0; b < n_outcomes; ++b) {
    std::vector<CMat> kraus;
    for (int k = 0; k < per_branch; ++k)
      kraus.push_back(isometry.middleRows((b * per_branch + k) * dout, dout));
    test.branches.push_back(quantum::channel_from_kraus(in, out, kraus));
    test.labels.push_back(std::to_string(b));
  }
  return test;
}

Transformation QuantumTheory::reversible_sample(const SystemRef& sys, Rng& rng) const {
  return quantum::unitary_channel(sys, quantum::random_unitary(quantum::hilbert_dim(sys), rng));
}

Transformation QuantumTheory::sample_pure_transformation(const SystemRef& in,
                                                         const SystemRef& out,
                                                         Rng& rng) const {
  // Single sub-normalized Kraus operator: Choi rank one by construction.
  const int din = quantum::hilbert_dim(in);
  const int dout = quantum::hilbert_dim(out);
  std::normal_distribution<double> gauss(0.0, 1.0);
  CMat k(dout, din);
  for (int r = 0; r < dout; ++r)
    for (int c = 0; c < din; ++c) k(r, c) = Complex(gauss(rng), gauss(rng));
  Eigen::JacobiSVD<CMat> svd(k);
  k /= svd.singularValues()(0);
  return quantum::channel_from_kraus(in, out, {k});
}

std::vector<Test> QuantumTheory::fiducial_observation_tests(const SystemRef& sys) const {
  const int d = quantum::hilbert_dim(sys);
  const SystemRef trivial = trivial_system();
  std::vector<Test> tests;

  Test computational;
  computational.input = sys;
  computational.output = trivial;
  for (int k = 0; k < d; ++k) {
    CMat proj = CMat::Zero(d, d);
    proj(k, k) = 1.0;
    computational.branches.push_back(
        Transformation::from_effect(quantum::effect_from_operator(sys, proj)));
    computational.labels.push_back(std::to_string(k));
  }
  tests.push_back(std::move(computational));

  // Fourier-conjugate basis; for d=2 this is the +/- measurement.
  Test fourier;
  fourier.input = sys;
  fourier.output = trivial;
  const Complex i01(0.0, 1.0);
  for (int k = 0; k < d; ++k) {
    CVec psi(d);
    for (int j = 0; j < d; ++j)
      psi(j) = std::exp(2.0 * M_PI * i01 * double(j * k) / double(d)) / std::sqrt(double(d));
    fourier.branches.push_back(
        Transformation::from_effect(quantum::effect_from_operator(sys, psi * psi.adjoint())));
    fourier.labels.push_back("f" + std::to_string(k));
  }
  tests.push_back(std::move(fourier));
  return tests;
}

const QuantumTheory& quantum_theory() {
  static QuantumTheory instance;
  return instance;
}

}  // namespace gpt
