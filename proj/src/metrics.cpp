#include "purgeom/metrics.hpp"

#include <cmath>
#include <string>

#include "purgeom/errors.hpp"

namespace purgeom {

namespace {

void require_faithful(const DensityOperator& rho, const char* what) {
  if (!rho.faithful())
    throw RankDeficient(std::string(what) + ": state has rank " + std::to_string(rho.rank()) +
                        " < " + std::to_string(rho.dim()));
}

// sum_jk conj(eta_jk) kernel(l_j, l_k) xi_jk in the eigenbasis of rho.
template <typename Kernel>
Complex state_form(const DensityOperator& rho, const Matrix& eta, const Matrix& xi,
                   Kernel&& kernel) {
  require_same_shape(rho.matrix(), eta, "metric");
  require_same_shape(rho.matrix(), xi, "metric");
  const Matrix& u = rho.eig().vectors;
  const RealVector& lam = rho.eigenvalues();
  const Matrix ce = u.adjoint() * eta * u;
  const Matrix cx = u.adjoint() * xi * u;
  Complex sum = 0.0;
  for (Eigen::Index j = 0; j < ce.rows(); ++j)
    for (Eigen::Index k = 0; k < ce.cols(); ++k)
      sum += std::conj(ce(j, k)) * kernel(lam(j), lam(k)) * cx(j, k);
  return sum;
}

// lambda_k k(lambda_j / lambda_k)
double weighted(const ScalarFunction& k, double lj, double lk) { return lk * k(lj / lk); }

}  // namespace

double bures_inner(const DensityOperator& rho, const StateTangent& xi1, const StateTangent& xi2) {
  const Matrix g1 = sylvester_solve(rho, xi1);
  const Matrix g2 = sylvester_solve(rho, xi2);
  return 0.25 * ((xi2.value * g1).trace().real() + (xi1.value * g2).trace().real());
}

double canonical_inner(const DensityOperator& rho, const StateTangent& xi1,
                       const StateTangent& xi2) {
  require_faithful(rho, "canonical_inner");
  const Matrix rho_inv = matfun(rho.eig(), [](double l) { return 1.0 / l; });
  const Matrix sym = xi2.value * xi1.value + xi1.value * xi2.value;
  return 0.125 * (sym * rho_inv).trace().real();
}

Complex monotone_inner(const MonotoneFunction& f, const DensityOperator& rho, const Matrix& eta,
                       const Matrix& xi) {
  require_faithful(rho, "monotone_inner");
  return state_form(rho, eta, xi, [&](double lj, double lk) {
    return 0.25 / weighted(f.f, lj, lk);
  });
}

Complex purification_inner(const MetricFunction& k, const PurificationVector& w, const Matrix& y,
                           const Matrix& x) {
  if (!w.invertible())
    throw RankDeficient("purification_inner: purification has rank " + std::to_string(w.rank()) +
                        " < " + std::to_string(w.dim()));
  require_same_shape(w.matrix(), x, "purification_inner");
  require_same_shape(w.matrix(), y, "purification_inner");
  const ScalarFunction kinv([k](double t) { return 1.0 / k.k(t); });
  return hs_inner(y, superop_apply(kinv, SuperopKind::Delta, w, x));
}

Complex induced_inner_lifted(const MetricFunction& k, const DensityOperator& rho,
                             const Matrix& eta, const Matrix& xi) {
  require_faithful(rho, "induced_inner_lifted");
  const PurificationVector w(matfun(rho.eig(), [](double l) { return std::sqrt(l); }));
  const ConnectionFunction conn = rF_from_k(k).second;
  const Matrix x = horizontal_lift(conn, w, StateTangent(rho, xi));
  const Matrix y = horizontal_lift(conn, w, StateTangent(rho, eta));
  return purification_inner(k, w, y, x);
}

MetricReport induced_inner(const MetricFunction& k, const DensityOperator& rho, const Matrix& eta,
                           const Matrix& xi) {
  require_faithful(rho, "induced_inner");
  const Complex closed = state_form(rho, eta, xi, [&](double lj, double lk) {
    const double a = weighted(k.k, lj, lk), s = a + weighted(k.k, lk, lj);
    return a / (s * s);
  });
  MetricReport out;
  out.hermitian_value = closed;
  out.real_value = closed.real();
  out.metric_id = "induced(" + k.k.label() + ")";
  out.cross_check = std::abs(closed - induced_inner_lifted(k, rho, eta, xi));
  return out;
}

double induced_real_inner(const MetricFunction& k, const DensityOperator& rho, const Matrix& eta,
                          const Matrix& xi) {
  require_faithful(rho, "induced_real_inner");
  return state_form(rho, eta, xi, [&](double lj, double lk) {
           return 0.5 / (weighted(k.k, lj, lk) + weighted(k.k, lk, lj));
         })
      .real();
}

}  // namespace purgeom
