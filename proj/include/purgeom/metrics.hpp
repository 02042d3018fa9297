#pragma once

// Metrics on density operators and on purification space. Hermitian forms are
// conjugate-linear in the first tangent and linear in the second, like the
// HS product.

#include <string>

#include "purgeom/connect.hpp"
#include "purgeom/funzoo.hpp"

namespace purgeom {

struct MetricReport {
  Complex hermitian_value;
  double real_value = 0.0;
  std::string metric_id;      // bures | canonical | monotone(f) | purification(k) | induced(k)
  double cross_check = 0.0;   // |closed form - lifted value| where both are computed
};

/// 1/2 Tr xi2 g1 with rho g1 + g1 rho = xi1. Any rank; throws UnsolvableSupport.
double bures_inner(const DensityOperator& rho, const StateTangent& xi1, const StateTangent& xi2);

/// 1/8 Tr (xi2 xi1 + xi1 xi2) rho^-1. Throws RankDeficient.
double canonical_inner(const DensityOperator& rho, const StateTangent& xi1,
                       const StateTangent& xi2);

/// 1/4 Tr eta R^-1 f(L/R)^-1 xi. Throws RankDeficient.
Complex monotone_inner(const MonotoneFunction& f, const DensityOperator& rho, const Matrix& eta,
                       const Matrix& xi);

/// (y, k(Delta)^-1 x). Throws RankDeficient.
Complex purification_inner(const MetricFunction& k, const PurificationVector& w, const Matrix& y,
                           const Matrix& x);

/// Tr eta (R k(L/R) / [R k(L/R) + L k(R/L)]^2) xi, cross-checked against
/// induced_inner_lifted. Throws RankDeficient.
MetricReport induced_inner(const MetricFunction& k, const DensityOperator& rho, const Matrix& eta,
                           const Matrix& xi);

/// Lifts eta and xi horizontally at sqrt(rho) for the connection belonging to
/// k and measures them with purification_inner.
Complex induced_inner_lifted(const MetricFunction& k, const DensityOperator& rho,
                             const Matrix& eta, const Matrix& xi);

/// 1 / (2 (R k(L/R) + L k(R/L))), the real part of the induced metric.
double induced_real_inner(const MetricFunction& k, const DensityOperator& rho, const Matrix& eta,
                          const Matrix& xi);

}  // namespace purgeom
