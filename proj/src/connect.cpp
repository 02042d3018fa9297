#include "purgeom/connect.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "purgeom/errors.hpp"

namespace purgeom {

namespace {

void require_invertible(const PurificationVector& w, const char* what) {
  if (!w.invertible())
    throw RankDeficient(std::string(what) + ": purification has rank " +
                        std::to_string(w.rank()) + " < " + std::to_string(w.dim()));
}

}  // namespace

Matrix sylvester_solve(const DensityOperator& rho, const StateTangent& xi) {
  require_same_shape(rho.matrix(), xi.value, "sylvester_solve");
  const Matrix& u = rho.eig().vectors;
  const RealVector& lam = rho.eigenvalues();
  const double cutoff = rank_cutoff(rho.dim(), lam(0));
  const double scale = std::max(1.0, xi.value.norm());

  Matrix c = u.adjoint() * xi.value * u;
  for (Eigen::Index j = 0; j < c.rows(); ++j) {
    for (Eigen::Index k = 0; k < c.cols(); ++k) {
      const double s = lam(j) + lam(k);
      if (s > cutoff) {
        c(j, k) /= s;
      } else {
        if (std::abs(c(j, k)) > tol::kReconstruct * scale)
          throw UnsolvableSupport("sylvester_solve: tangent has weight " +
                                  std::to_string(std::abs(c(j, k))) +
                                  " on the null space of the state");
        c(j, k) = 0.0;
      }
    }
  }
  return hermitian_part(u * c * u.adjoint());
}

BuresSplit bures_decompose(const PurificationVector& w, const Matrix& x) {
  require_same_shape(w.matrix(), x, "bures_decompose");
  const auto& s = w.schmidt();
  const Eigen::Index n = w.dim();
  const Matrix X = s.left.adjoint() * x * s.right;
  const RealVector sigma = s.lambdas.cwiseSqrt();

  Matrix g = Matrix::Zero(n, n), a = Matrix::Zero(n, n), x0 = Matrix::Zero(n, n);
  for (Eigen::Index j = 0; j < n; ++j) {
    for (Eigen::Index k = 0; k < n; ++k) {
      const double d = s.lambdas(j) + s.lambdas(k);
      if (j >= s.rank && k >= s.rank) {
        x0(j, k) = X(j, k);
        continue;
      }
      const Complex xjk = X(j, k), xkj = std::conj(X(k, j));
      g(j, k) = (xjk * sigma(k) + sigma(j) * xkj) / d;
      a(j, k) = (sigma(j) * xjk - sigma(k) * xkj) / d;
    }
  }
  BuresSplit out;
  out.g = hermitian_part(s.left * g * s.left.adjoint());
  const Matrix av = s.right * a * s.right.adjoint();
  out.a = 0.5 * (av - av.adjoint());
  out.x0 = s.left * x0 * s.right.adjoint();
  return out;
}

ConnectionValue connection_eval(const ConnectionFunction& conn, const PurificationVector& w,
                                const Matrix& x) {
  require_same_shape(w.matrix(), x, "connection_eval");
  if (conn.bures) return {bures_decompose(w, x).a, w.condition_number()};
  require_invertible(w, "connection_eval");

  const auto& s = w.schmidt();
  const Eigen::Index n = w.dim();
  const Matrix X = s.left.adjoint() * x * s.right;
  Matrix Z(n, n);
  for (Eigen::Index j = 0; j < n; ++j) Z.row(j) = X.row(j) / std::sqrt(s.lambdas(j));

  Matrix a(n, n);
  for (Eigen::Index j = 0; j < n; ++j) {
    for (Eigen::Index k = 0; k < n; ++k) {
      const double f = eval_ratio(conn.F, s.lambdas(j), s.lambdas(k));
      a(j, k) = 0.5 * (Z(j, k) * (1.0 + f) - std::conj(Z(k, j)) * (1.0 - f));
    }
  }
  const Matrix av = s.right * a * s.right.adjoint();
  return {0.5 * (av - av.adjoint()), w.condition_number()};
}

Matrix vertical_part(const ConnectionFunction& conn, const PurificationVector& w,
                     const Matrix& x) {
  require_invertible(w, "vertical_part");
  return w.matrix() * connection_eval(conn, w, x).a;
}

Matrix horizontal_part(const ConnectionFunction& conn, const PurificationVector& w,
                       const Matrix& x) {
  return x - vertical_part(conn, w, x);
}

Matrix vertical_part_modular(const ConnectionFunction& conn, const PurificationVector& w,
                             const Matrix& x) {
  require_invertible(w, "vertical_part_modular");
  require_same_shape(w.matrix(), x, "vertical_part_modular");
  const RFunction r = r_from_F(conn);
  const Matrix y = x + w.matrix() * x.adjoint() * w.inverse().adjoint();
  return x - superop_apply(r.r, SuperopKind::DeltaInverse, w, y);
}

Matrix horizontal_lift(const ConnectionFunction& conn, const PurificationVector& w,
                       const StateTangent& xi) {
  require_invertible(w, "horizontal_lift");
  require_same_shape(w.matrix(), xi.value, "horizontal_lift");
  const Matrix rho = w.matrix() * w.matrix().adjoint();
  const double mismatch = (rho - xi.at.matrix()).norm();
  if (mismatch > tol::kReconstruct * std::max(1.0, rho.norm()))
    throw BasePointMismatch("horizontal_lift: ww* differs from the base point by " +
                            std::to_string(mismatch));
  const RFunction r = r_from_F(conn);
  const DensityOperator base(rho);
  return superop_apply(r.r, SuperopKind::ROverL, base, xi.value) * w.inverse().adjoint();
}

TangentSplit tangent_split(const DensityOperator& rho, const Matrix& xi, double degeneracy_tol) {
  require_same_shape(rho.matrix(), xi, "tangent_split");
  const Matrix& u = rho.eig().vectors;
  const RealVector& lam = rho.eigenvalues();
  const double gap = degeneracy_tol * std::max(lam(0), 0.0);
  const Eigen::Index n = rho.dim();

  const Matrix c = u.adjoint() * xi * u;
  Matrix par = Matrix::Zero(n, n), b = Matrix::Zero(n, n);
  for (Eigen::Index j = 0; j < n; ++j) {
    for (Eigen::Index k = 0; k < n; ++k) {
      const double d = lam(j) - lam(k);
      if (std::abs(d) <= gap) {
        par(j, k) = c(j, k);
      } else {
        b(j, k) = kI * c(j, k) / d;
      }
    }
  }
  TangentSplit out;
  out.parallel = u * par * u.adjoint();
  out.perp = xi - out.parallel;
  out.b = hermitian_part(u * b * u.adjoint());
  return out;
}

}  // namespace purgeom
