#ifndef GPT_LINALG_HPP
#define GPT_LINALG_HPP

#include <Eigen/Dense>
#include <complex>
#include <vector>

namespace gpt {

using Vec = Eigen::VectorXd;
using Mat = Eigen::MatrixXd;
using CVec = Eigen::VectorXcd;
using CMat = Eigen::MatrixXcd;
using Complex = std::complex<double>;

inline constexpr double kDefaultTol = 1e-9;

namespace linalg {

Mat kron(const Mat& a, const Mat& b);
Vec kron(const Vec& a, const Vec& b);
CMat kron(const CMat& a, const CMat& b);

/// Orthonormal basis of Hermitian d x d matrices under the Hilbert-Schmidt
/// inner product tr(A B). Element 0 is I/sqrt(d); the rest are the
/// generalized Gell-Mann matrices scaled to unit norm. Coordinates of a
/// Hermitian operator in this basis are real, and tr(A B) is the plain dot
/// product of coordinate vectors.
class HermitianBasis {
public:
  explicit HermitianBasis(int dim);

  int dim() const { return dim_; }
  int size() const { return static_cast<int>(elements_.size()); }  // == dim^2
  const CMat& element(int index) const { return elements_[index]; }

  Eigen::VectorXd coords_of(const CMat& hermitian) const;
  CMat matrix_of(const Eigen::VectorXd& coords) const;

  /// Cached per dimension; basis construction is deterministic.
  static const HermitianBasis& get(int dim);

private:
  int dim_;
  std::vector<CMat> elements_;
};

/// Largest |entry| of a - b.
double max_abs_diff(const Mat& a, const Mat& b);
double max_abs_diff(const Vec& a, const Vec& b);

/// Minimal eigenvalue of a Hermitian matrix (symmetrized before solving).
double min_eigenvalue(const CMat& hermitian);

bool approx_equal(double a, double b, double tol);

}  // namespace linalg
}  // namespace gpt

#endif
