#include "purgeom/matcore.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "purgeom/errors.hpp"

namespace purgeom {

Complex hs_inner(const Matrix& a, const Matrix& b) {
  return (a.adjoint() * b).trace();
}

double hs_norm(const Matrix& a) { return a.norm(); }

bool is_hermitian(const Matrix& a, double tol) {
  if (a.rows() != a.cols()) return false;
  return (a - a.adjoint()).norm() <= tol * std::max(1.0, a.norm());
}

Matrix hermitian_part(const Matrix& a) { return 0.5 * (a + a.adjoint()); }

Matrix commutator(const Matrix& a, const Matrix& b) { return a * b - b * a; }

void require_square(const Matrix& a, const char* what) {
  if (a.rows() != a.cols() || a.rows() == 0)
    throw ValidationError(std::string(what) + ": expected a non-empty square matrix");
}

void require_finite(const Matrix& a, const char* what) {
  if (!a.allFinite()) throw ValidationError(std::string(what) + ": non-finite entries");
}

void require_same_shape(const Matrix& a, const Matrix& b, const char* what) {
  if (a.rows() != b.rows() || a.cols() != b.cols())
    throw ValidationError(std::string(what) + ": dimension mismatch");
}

double rank_cutoff(Eigen::Index n, double lambda_max) {
  return static_cast<double>(n) * std::max(lambda_max, 0.0) * tol::kRank;
}

EigenDecomposition eig_hermitian(const Matrix& a) {
  require_square(a, "eig_hermitian");
  require_finite(a, "eig_hermitian");
  if (!is_hermitian(a)) throw NonHermitianInput("eig_hermitian: matrix is not Hermitian");

  Eigen::SelfAdjointEigenSolver<Matrix> solver(hermitian_part(a));
  if (solver.info() != Eigen::Success)
    throw DomainError("eig_hermitian: eigensolver did not converge");

  // Eigen returns ascending order.
  const Eigen::Index n = a.rows();
  EigenDecomposition out{RealVector(n), Matrix(n, n)};
  for (Eigen::Index i = 0; i < n; ++i) {
    out.values(i) = solver.eigenvalues()(n - 1 - i);
    out.vectors.col(i) = solver.eigenvectors().col(n - 1 - i);
  }
  return out;
}

Matrix matfun(const EigenDecomposition& eig, const std::function<double(double)>& phi) {
  const Eigen::Index n = eig.values.size();
  RealVector mapped(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    mapped(i) = phi(eig.values(i));
    if (!std::isfinite(mapped(i)))
      throw DomainError("matfun: function undefined at eigenvalue " +
                        std::to_string(eig.values(i)));
  }
  return eig.vectors * mapped.cast<Complex>().asDiagonal() * eig.vectors.adjoint();
}

Matrix matfun(const Matrix& a, const std::function<double(double)>& phi) {
  return matfun(eig_hermitian(a), phi);
}

Matrix exp_i(const Matrix& h, double s) {
  const auto eig = eig_hermitian(h);
  Eigen::VectorXcd phases(eig.values.size());
  for (Eigen::Index i = 0; i < phases.size(); ++i)
    phases(i) = std::exp(kI * s * eig.values(i));
  return eig.vectors * phases.asDiagonal() * eig.vectors.adjoint();
}

Matrix nearest_unitary(const Matrix& a) {
  Eigen::JacobiSVD<Matrix> svd(a, Eigen::ComputeFullU | Eigen::ComputeFullV);
  return svd.matrixU() * svd.matrixV().adjoint();
}

DensityOperator::DensityOperator(const Matrix& rho) : rho_(rho) {
  require_square(rho_, "DensityOperator");
  require_finite(rho_, "DensityOperator");
  eig_ = eig_hermitian(rho_);
  rho_ = hermitian_part(rho_);
  const Eigen::Index n = dim();
  const double lambda_max = std::max(eig_.values(0), 0.0);
  if (eig_.values(n - 1) < -tol::kPsd * std::max(lambda_max, 1e-300))
    throw ValidationError("DensityOperator: matrix is not positive semidefinite (eigenvalue " +
                          std::to_string(eig_.values(n - 1)) + ")");
  if (!(lambda_max > 0.0)) throw ValidationError("DensityOperator: trace must be positive");
  const double cutoff = rank_cutoff(n, lambda_max);
  for (Eigen::Index i = 0; i < n; ++i) {
    if (eig_.values(i) > cutoff) {
      rank_ = i + 1;
    } else {
      eig_.values(i) = 0.0;
    }
  }
}

SchmidtData schmidt_decompose(const Matrix& w) {
  require_square(w, "schmidt_decompose");
  require_finite(w, "schmidt_decompose");
  const Eigen::Index n = w.rows();

  // The SVD delivers phi_k and sqrt(lambda_k) with better relative accuracy
  // for small lambda than an eigensolve of ww*.
  Eigen::JacobiSVD<Matrix> svd(w, Eigen::ComputeFullU | Eigen::ComputeFullV);
  const RealVector sigma = svd.singularValues();
  const double lambda_max = sigma.size() ? sigma(0) * sigma(0) : 0.0;
  const double cutoff = rank_cutoff(n, lambda_max);

  SchmidtData out;
  out.lambdas = RealVector::Zero(n);
  out.left = svd.matrixU();
  out.right = svd.matrixV();
  out.rank = 0;
  for (Eigen::Index k = 0; k < n; ++k) {
    const double lambda = sigma(k) * sigma(k);
    if (lambda > cutoff && lambda > 0.0) {
      out.lambdas(k) = lambda;
      out.rank = k + 1;
    }
  }
  // phi'_k = w* phi_k / sqrt(lambda_k) on the support; the SVD's trailing
  // right vectors already complete this to an orthonormal basis.
  for (Eigen::Index k = 0; k < out.rank; ++k)
    out.right.col(k) = w.adjoint() * out.left.col(k) / sigma(k);

  out.phase = out.left.leftCols(out.rank) * out.right.leftCols(out.rank).adjoint();
  return out;
}

}  // namespace purgeom
