#include "gpt/linalg.hpp"

#include <cmath>
#include <map>
#include <mutex>

#include "gpt/errors.hpp"

namespace gpt {
namespace linalg {

Mat kron(const Mat& a, const Mat& b) {
  Mat out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j)
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  return out;
}

Vec kron(const Vec& a, const Vec& b) {
  Vec out(a.size() * b.size());
  for (Eigen::Index i = 0; i < a.size(); ++i)
    out.segment(i * b.size(), b.size()) = a(i) * b;
  return out;
}

CMat kron(const CMat& a, const CMat& b) {
  CMat out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j)
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  return out;
}

HermitianBasis::HermitianBasis(int dim) : dim_(dim) {
  if (dim < 1) fail(ErrorKind::BadShape, "Hermitian basis needs dim >= 1");
  const Complex i01(0.0, 1.0);
  elements_.reserve(static_cast<std::size_t>(dim) * dim);
  // Identity component first so that coordinate 0 carries the trace.
  elements_.push_back(CMat::Identity(dim, dim) / std::sqrt(double(dim)));
  // Symmetric and antisymmetric off-diagonal pairs, then diagonal ladder
  // matrices, all scaled to unit Hilbert-Schmidt norm.
  for (int j = 0; j < dim; ++j) {
    for (int k = j + 1; k < dim; ++k) {
      CMat sym = CMat::Zero(dim, dim);
      sym(j, k) = sym(k, j) = 1.0 / std::sqrt(2.0);
      elements_.push_back(sym);
      CMat asym = CMat::Zero(dim, dim);
      asym(j, k) = -i01 / std::sqrt(2.0);
      asym(k, j) = i01 / std::sqrt(2.0);
      elements_.push_back(asym);
    }
  }
  for (int l = 1; l < dim; ++l) {
    CMat diag = CMat::Zero(dim, dim);
    const double norm = 1.0 / std::sqrt(double(l) * (l + 1));
    for (int j = 0; j < l; ++j) diag(j, j) = norm;
    diag(l, l) = -double(l) * norm;
    elements_.push_back(diag);
  }
}

Eigen::VectorXd HermitianBasis::coords_of(const CMat& hermitian) const {
  Eigen::VectorXd coords(size());
  for (int a = 0; a < size(); ++a)
    coords(a) = (elements_[a].adjoint() * hermitian).trace().real();
  return coords;
}

CMat HermitianBasis::matrix_of(const Eigen::VectorXd& coords) const {
  CMat out = CMat::Zero(dim_, dim_);
  for (int a = 0; a < size(); ++a) out += coords(a) * elements_[a];
  return out;
}

const HermitianBasis& HermitianBasis::get(int dim) {
  static std::mutex mutex;
  static std::map<int, HermitianBasis> cache;
  std::lock_guard<std::mutex> lock(mutex);
  auto it = cache.find(dim);
  if (it == cache.end()) it = cache.emplace(dim, HermitianBasis(dim)).first;
  return it->second;
}

double max_abs_diff(const Mat& a, const Mat& b) {
  return (a - b).cwiseAbs().maxCoeff();
}

double max_abs_diff(const Vec& a, const Vec& b) {
  return (a - b).cwiseAbs().maxCoeff();
}

double min_eigenvalue(const CMat& hermitian) {
  CMat sym = 0.5 * (hermitian + hermitian.adjoint());
  Eigen::SelfAdjointEigenSolver<CMat> solver(sym, Eigen::EigenvaluesOnly);
  return solver.eigenvalues().minCoeff();
}

bool approx_equal(double a, double b, double tol) { return std::abs(a - b) <= tol; }

}  // namespace linalg
}  // namespace gpt
