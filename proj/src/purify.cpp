#include "purgeom/purify.hpp"

#include <cmath>
#include <limits>
#include <string>

#include "purgeom/errors.hpp"

namespace purgeom {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

std::string describe(const ScalarFunction& f) {
  return f.label().empty() ? std::string("function") : "function '" + f.label() + "'";
}

std::pair<const Matrix*, const Matrix*> frames_for(SuperopKind kind, const SchmidtData& s) {
  switch (kind) {
    case SuperopKind::LOverR:
    case SuperopKind::ROverL:
      return {&s.left, &s.left};
    case SuperopKind::Delta:
    case SuperopKind::DeltaInverse:
      return {&s.left, &s.right};
    case SuperopKind::LtildeOverRtilde:
    case SuperopKind::RtildeOverLtilde:
      return {&s.right, &s.right};
  }
  return {&s.left, &s.right};
}

bool inverted(SuperopKind kind) {
  return kind == SuperopKind::ROverL || kind == SuperopKind::DeltaInverse ||
         kind == SuperopKind::RtildeOverLtilde;
}

Matrix apply_with_lambdas(const ScalarFunction& f, bool invert, const Matrix& left,
                          const Matrix& right, const RealVector& lam, const Matrix& x) {
  const Eigen::Index n = lam.size();
  Eigen::MatrixXd values(n, n);
  for (Eigen::Index j = 0; j < n; ++j)
    for (Eigen::Index k = 0; k < n; ++k)
      values(j, k) = invert ? eval_ratio(f, lam(k), lam(j)) : eval_ratio(f, lam(j), lam(k));
  return apply_in_frames(left, right, [&](Eigen::Index j, Eigen::Index k) { return values(j, k); },
                         x);
}

void require_invertible(const PurificationVector& w, const char* what) {
  if (!w.invertible())
    throw RankDeficient(std::string(what) + ": requires an invertible purification (rank " +
                        std::to_string(w.rank()) + " < " + std::to_string(w.dim()) + ")");
}

}  // namespace

ScalarFunction::ScalarFunction(Fn fn, BoundaryValues boundary, std::string label)
    : fn_(std::make_shared<const Fn>(std::move(fn))),
      boundary_(boundary),
      label_(std::move(label)) {}

ScalarFunction ScalarFunction::constant(double c) {
  return ScalarFunction([c](double) { return c; }, {c, c}, "constant(" + std::to_string(c) + ")");
}

double ScalarFunction::operator()(double t) const {
  if (!fn_) throw ValidationError("ScalarFunction: empty function");
  if (t == 0.0) {
    if (!boundary_.at_zero) throw MissingBoundaryValue(describe(*this) + ": value at 0 not declared");
    return *boundary_.at_zero;
  }
  if (std::isinf(t) && t > 0) {
    if (!boundary_.at_infinity)
      throw MissingBoundaryValue(describe(*this) + ": value at infinity not declared");
    return *boundary_.at_infinity;
  }
  if (!(t > 0.0)) throw DomainError(describe(*this) + ": argument outside (0, inf)");
  return (*fn_)(t);
}

ScalarFunction ScalarFunction::with_boundary(BoundaryValues boundary) const {
  ScalarFunction out = *this;
  out.boundary_ = boundary;
  return out;
}

ScalarFunction ScalarFunction::with_label(std::string label) const {
  ScalarFunction out = *this;
  out.label_ = std::move(label);
  return out;
}

double eval_ratio(const ScalarFunction& f, double num, double den) {
  double value;
  if (den > 0.0) {
    value = f(num / den);
  } else if (num > 0.0) {
    value = f(kInf);
  } else {
    value = f(1.0);
  }
  if (!std::isfinite(value))
    throw DomainError(describe(f) + ": non-finite value at eigenvalue ratio " +
                      std::to_string(num) + "/" + std::to_string(den));
  return value;
}

const char* to_string(SuperopKind kind) {
  switch (kind) {
    case SuperopKind::LOverR: return "L/R";
    case SuperopKind::ROverL: return "R/L";
    case SuperopKind::Delta: return "Delta";
    case SuperopKind::DeltaInverse: return "Delta^-1";
    case SuperopKind::LtildeOverRtilde: return "Lt/Rt";
    case SuperopKind::RtildeOverLtilde: return "Rt/Lt";
  }
  return "?";
}

PurificationVector::PurificationVector(const Matrix& w) : w_(w), schmidt_(schmidt_decompose(w)) {}

double PurificationVector::condition_number() const {
  if (!invertible()) return kInf;
  return std::sqrt(schmidt_.lambdas(0) / schmidt_.lambdas(dim() - 1));
}

Matrix PurificationVector::inverse() const {
  require_invertible(*this, "PurificationVector::inverse");
  const auto& s = schmidt_;
  const Eigen::VectorXcd inv_sqrt = s.lambdas.cwiseSqrt().cwiseInverse().cast<Complex>();
  return s.right * inv_sqrt.asDiagonal() * s.left.adjoint();
}

StateTangent::StateTangent(DensityOperator at_, const Matrix& value_)
    : at(std::move(at_)), value(value_) {
  require_same_shape(at.matrix(), value, "StateTangent");
  require_finite(value, "StateTangent");
  if (!is_hermitian(value)) throw NonHermitianInput("StateTangent: tangent is not Hermitian");
  value = hermitian_part(value);
}

double StateTangent::support_defect() const {
  const Eigen::Index nulls = at.dim() - at.rank();
  if (nulls == 0) return 0.0;
  const Matrix basis = at.eig().vectors.rightCols(nulls);
  const Matrix block = basis.adjoint() * value * basis;
  Eigen::JacobiSVD<Matrix> svd(block);
  return svd.singularValues()(0);
}

DensityOperator project(const PurificationVector& w) {
  return DensityOperator(w.matrix() * w.matrix().adjoint());
}

DensityOperator coproject(const PurificationVector& w) {
  return DensityOperator(w.matrix().adjoint() * w.matrix());
}

StateTangent pushforward(const PurificationVector& w, const Matrix& x) {
  require_same_shape(w.matrix(), x, "pushforward");
  const Matrix xw = x * w.matrix().adjoint();
  return StateTangent(project(w), xw + xw.adjoint());
}

Matrix modular_conjugate(const PurificationVector& w, const Matrix& x) {
  require_same_shape(w.matrix(), x, "modular_conjugate");
  const Matrix& v = w.schmidt().phase;
  return v * x.adjoint() * v;
}

Matrix superop_apply(const ScalarFunction& f, SuperopKind kind, const PurificationVector& w,
                     const Matrix& x) {
  require_same_shape(w.matrix(), x, "superop_apply");
  const auto& s = w.schmidt();
  const auto [left, right] = frames_for(kind, s);
  return apply_with_lambdas(f, inverted(kind), *left, *right, s.lambdas, x);
}

Matrix superop_apply(const ScalarFunction& f, SuperopKind kind, const DensityOperator& rho,
                     const Matrix& x) {
  if (kind != SuperopKind::LOverR && kind != SuperopKind::ROverL)
    throw ValidationError(std::string("superop_apply: ") + to_string(kind) +
                          " needs a purification, not only a density operator");
  require_same_shape(rho.matrix(), x, "superop_apply");
  const Matrix& u = rho.eig().vectors;
  return apply_with_lambdas(f, inverted(kind), u, u, rho.eigenvalues(), x);
}

namespace {

ScalarFunction symmetric_ratio(const ScalarFunction& k) {
  // k(t) / k(1/t)
  return ScalarFunction([k](double t) { return k(t) / k(1.0 / t); });
}

const ScalarFunction& sqrt_function() {
  static const ScalarFunction f([](double t) { return std::sqrt(t); }, {0.0, kInf}, "sqrt");
  return f;
}

}  // namespace

Matrix tomita_modified(const ScalarFunction& k, const PurificationVector& w, const Matrix& x) {
  require_invertible(w, "tomita_modified");
  Matrix y = superop_apply(sqrt_function(), SuperopKind::Delta, w, x);
  y = modular_conjugate(w, y);
  return superop_apply(symmetric_ratio(k), SuperopKind::Delta, w, y);
}

Matrix modified_modular_operator(const ScalarFunction& k, const PurificationVector& w,
                                 const Matrix& x) {
  require_invertible(w, "modified_modular_operator");
  const ScalarFunction g([k](double t) { return t * k(1.0 / t) / k(t); });
  return superop_apply(g, SuperopKind::Delta, w, x);
}

Matrix modified_modular_conjugation(const ScalarFunction& k, const PurificationVector& w,
                                    const Matrix& x) {
  require_invertible(w, "modified_modular_conjugation");
  const ScalarFunction g([k](double t) { return std::sqrt(k(1.0 / t) / k(t)); });
  return modular_conjugate(w, superop_apply(g, SuperopKind::Delta, w, x));
}

bool is_tomita_fixed_point(const ScalarFunction& k, const PurificationVector& w,
                           const Matrix& x, double tol) {
  require_invertible(w, "is_tomita_fixed_point");
  const Matrix sx = tomita_modified(k, w, x);
  return (sx - x).norm() <= tol * std::max(1.0, x.norm());
}

}  // namespace purgeom
