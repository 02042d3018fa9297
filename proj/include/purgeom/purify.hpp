#pragma once

// The purification space W = B(H) with the Hilbert-Schmidt product: bundle
// projections, tangent pushforward, the modular conjugation and a spectral
// calculus for functions of the superoperators L/R, Ltilde/Rtilde and the
// modular operator Delta = L/Rtilde.

#include <functional>
#include <memory>
#include <optional>
#include <string>

#include "purgeom/matcore.hpp"

namespace purgeom {

/// Limits of a function at the ends of (0, inf). Values may be +-inf.
struct BoundaryValues {
  std::optional<double> at_zero;
  std::optional<double> at_infinity;
};

/// A real function on (0, inf) together with declared boundary values.
/// Copies share the underlying callable.
class ScalarFunction {
 public:
  using Fn = std::function<double(double)>;

  ScalarFunction() = default;
  explicit ScalarFunction(Fn fn, BoundaryValues boundary = {}, std::string label = {});

  static ScalarFunction constant(double c);

  /// t == 0 and t == inf resolve to the boundary values; throws
  /// MissingBoundaryValue if the needed one is absent.
  double operator()(double t) const;

  const BoundaryValues& boundary() const { return boundary_; }
  const std::string& label() const { return label_; }
  bool empty() const { return !fn_; }

  ScalarFunction with_boundary(BoundaryValues boundary) const;
  ScalarFunction with_label(std::string label) const;

 private:
  std::shared_ptr<const Fn> fn_;
  BoundaryValues boundary_;
  std::string label_;
};

/// f(num/den) for num, den >= 0, with f(inf) when num > 0 = den and f(1)
/// when both vanish. A non-finite result throws DomainError.
double eval_ratio(const ScalarFunction& f, double num, double den);

enum class SuperopKind {
  LOverR,            // L/R on |phi_j><phi_k|
  ROverL,
  Delta,             // L/Rtilde on |phi_j><phi'_k|
  DeltaInverse,
  LtildeOverRtilde,  // on |phi'_j><phi'_k|
  RtildeOverLtilde,
};

const char* to_string(SuperopKind kind);

/// A vector w in W together with its Schmidt data.
class PurificationVector {
 public:
  explicit PurificationVector(const Matrix& w);

  const Matrix& matrix() const { return w_; }
  const SchmidtData& schmidt() const { return schmidt_; }
  Eigen::Index dim() const { return w_.rows(); }
  Eigen::Index rank() const { return schmidt_.rank; }
  bool invertible() const { return schmidt_.invertible(); }

  /// sqrt(lambda_max / lambda_min); infinite when not invertible.
  double condition_number() const;
  /// Built from the Schmidt frames. Throws RankDeficient.
  Matrix inverse() const;

 private:
  Matrix w_;
  SchmidtData schmidt_;
};

/// A Hermitian tangent xi at a density operator.
struct StateTangent {
  StateTangent(DensityOperator at, const Matrix& value);

  DensityOperator at;
  Matrix value;

  /// max |<phi, xi phi>| over unit null vectors phi of `at` (the block of xi
  /// on the null space, in spectral norm).
  double support_defect() const;
};

DensityOperator project(const PurificationVector& w);    // ww*
DensityOperator coproject(const PurificationVector& w);  // w*w

/// xi = x w* + w x*.
StateTangent pushforward(const PurificationVector& w, const Matrix& x);

/// J_w x = v x* v.
Matrix modular_conjugate(const PurificationVector& w, const Matrix& x);

Matrix superop_apply(const ScalarFunction& f, SuperopKind kind, const PurificationVector& w,
                     const Matrix& x);

/// f(L/R) or f(R/L) built from rho alone. Other kinds throw ValidationError.
Matrix superop_apply(const ScalarFunction& f, SuperopKind kind, const DensityOperator& rho,
                     const Matrix& x);

/// Superoperator diagonal on |phi_j><phi_k| (eigenvectors of rho) with
/// eigenvalue kernel(lambda_j, lambda_k).
template <typename Kernel>
Matrix apply_state_kernel(const DensityOperator& rho, Kernel&& kernel, const Matrix& x) {
  const auto& lam = rho.eigenvalues();
  return apply_in_frames(
      rho.eig().vectors, rho.eig().vectors,
      [&](Eigen::Index j, Eigen::Index k) { return kernel(lam(j), lam(k)); }, x);
}

/// Modified Tomita operator S^k x = k(Delta) k(Delta^-1)^-1 J sqrt(Delta) x.
Matrix tomita_modified(const ScalarFunction& k, const PurificationVector& w, const Matrix& x);
/// Delta^k x = k(Delta^-1) k(Delta)^-1 Delta x.
Matrix modified_modular_operator(const ScalarFunction& k, const PurificationVector& w,
                                 const Matrix& x);
/// J^k x = J sqrt(k(Delta^-1) / k(Delta)) x.
Matrix modified_modular_conjugation(const ScalarFunction& k, const PurificationVector& w,
                                    const Matrix& x);

/// True iff S^k x = x within tol (relative). Throws RankDeficient unless w is
/// invertible.
bool is_tomita_fixed_point(const ScalarFunction& k, const PurificationVector& w,
                           const Matrix& x, double tol = 1e-9);

}  // namespace purgeom
