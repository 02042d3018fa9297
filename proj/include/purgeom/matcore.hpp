#pragma once

// Dense complex Hermitian linear algebra for small (n <= 16) matrices:
// eigendecompositions, spectral matrix functions and the Schmidt (polar)
// decomposition of purifying vectors.

#include <Eigen/Dense>
#include <complex>
#include <functional>

namespace purgeom {

using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using RealVector = Eigen::VectorXd;

namespace tol {
inline constexpr double kHermitian = 1e-10;  // relative
inline constexpr double kPsd = 1e-10;        // relative to the largest eigenvalue
inline constexpr double kReconstruct = 1e-9; // relative
inline constexpr double kRank = 1e-12;       // eps_rank = n * lambda_max * kRank
}  // namespace tol

inline constexpr Complex kI{0.0, 1.0};

/// Hilbert-Schmidt product (a, b) = Tr a* b, antilinear in the left argument.
Complex hs_inner(const Matrix& a, const Matrix& b);
double hs_norm(const Matrix& a);

/// ||a - a*|| <= tol * max(1, ||a||).
bool is_hermitian(const Matrix& a, double tol = tol::kHermitian);
Matrix hermitian_part(const Matrix& a);
Matrix commutator(const Matrix& a, const Matrix& b);

void require_square(const Matrix& a, const char* what);
void require_finite(const Matrix& a, const char* what);
void require_same_shape(const Matrix& a, const Matrix& b, const char* what);

/// Spectral cutoff below which an eigenvalue of an n x n PSD matrix is
/// treated as zero.
double rank_cutoff(Eigen::Index n, double lambda_max);

struct EigenDecomposition {
  RealVector values;  // descending
  Matrix vectors;     // orthonormal columns, vectors.col(i) <-> values(i)
};

/// Throws NonHermitianInput if `a` is not Hermitian within tol::kHermitian.
EigenDecomposition eig_hermitian(const Matrix& a);

/// U diag(phi(e)) U*. Throws DomainError if phi is not finite at an eigenvalue.
Matrix matfun(const EigenDecomposition& eig, const std::function<double(double)>& phi);
Matrix matfun(const Matrix& a, const std::function<double(double)>& phi);

/// exp(i s h) for Hermitian h.
Matrix exp_i(const Matrix& h, double s);

/// Unitary factor of the polar decomposition (nearest unitary in HS norm).
Matrix nearest_unitary(const Matrix& a);

/// Frames and singular values of w = sum_k sqrt(lambda_k) |phi_k><phi'_k|.
struct SchmidtData {
  RealVector lambdas;  // length n, nonincreasing, exact zeros beyond `rank`
  Matrix left;         // n x n unitary, columns phi_k (eigenvectors of ww*)
  Matrix right;        // n x n unitary, columns phi'_k (eigenvectors of w*w)
  Eigen::Index rank = 0;
  Matrix phase;        // partial isometry v with w = sqrt(ww*) v

  Eigen::Index dim() const { return left.rows(); }
  bool invertible() const { return rank == dim(); }
  RealVector nonzero_lambdas() const { return lambdas.head(rank); }
};

/// Rank is decided by rank_cutoff on the eigenvalues of ww*; the first `rank`
/// right frame vectors are w* phi_k / sqrt(lambda_k), the rest complete them.
SchmidtData schmidt_decompose(const Matrix& w);

/// Hermitian positive semidefinite matrix with positive trace. Normalization
/// is not required. Eigenvalues below rank_cutoff are stored as exact zeros.
class DensityOperator {
 public:
  /// Throws NonHermitianInput or ValidationError.
  explicit DensityOperator(const Matrix& rho);

  const Matrix& matrix() const { return rho_; }
  const EigenDecomposition& eig() const { return eig_; }
  const RealVector& eigenvalues() const { return eig_.values; }
  Eigen::Index dim() const { return rho_.rows(); }
  Eigen::Index rank() const { return rank_; }
  bool faithful() const { return rank_ == dim(); }
  double trace() const { return eig_.values.sum(); }

 private:
  Matrix rho_;
  EigenDecomposition eig_;
  Eigen::Index rank_ = 0;
};

/// Applies the superoperator that is diagonal on the basis |left_j><right_k|
/// with eigenvalue kernel(j, k).
template <typename Kernel>
Matrix apply_in_frames(const Matrix& left, const Matrix& right, Kernel&& kernel,
                       const Matrix& x) {
  Matrix c = left.adjoint() * x * right;
  for (Eigen::Index j = 0; j < c.rows(); ++j)
    for (Eigen::Index k = 0; k < c.cols(); ++k) c(j, k) *= kernel(j, k);
  return left * c * right.adjoint();
}

}  // namespace purgeom
