#pragma once

// Scalar functions that index connections (F, r), purification metrics (k)
// and state-space metrics (f, f_s), the conversions among them and the
// Condition-HS correspondence.

#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "purgeom/purify.hpp"

namespace purgeom {

/// Sample points on which functional identities are verified.
struct Grid {
  std::vector<double> points;

  /// Log-uniform points on [lo, hi]; symmetric under t -> 1/t when lo*hi = 1.
  static Grid log_uniform(double lo = 1e-3, double hi = 1e3, int n = 200);
};

/// r with r(t) + r(1/t) = 1 and r(1) = 1/2.
struct RFunction {
  ScalarFunction r;
};

/// F with F(t) = -F(1/t). `bures` marks F(t) = (t-1)/(t+1), which is also
/// defined at rank-deficient purifications.
struct ConnectionFunction {
  ScalarFunction F;
  bool bures = false;
};

/// Strictly positive k indexing the metric (x2, k(Delta)^-1 x1) on W.
struct MetricFunction {
  ScalarFunction k;
};

/// f indexing the state metric 1/4 Tr eta R^-1 f(L/R)^-1 xi.
struct MonotoneFunction {
  ScalarFunction f;
  bool selftransposed = false;
};

/// Atomic measure on [0, 1] with total mass one.
struct RadonMeasureSpec {
  struct Atom {
    double x;
    double weight;
  };
  std::vector<Atom> atoms;

  /// Throws ValidationError.
  void validate() const;
};

/// Unique Condition-HS solution for a selftransposed f_s:
/// f_s(t) = (1+t)/2 - (t-1)^2 tau(t)^2.
struct HSsolution {
  ScalarFunction tau;
  MetricFunction k;
  ConnectionFunction F;
};

// Invariant defects, maximised over the grid.
double antisymmetry_defect(const ScalarFunction& F, const Grid& grid);      // |F(t) + F(1/t)|
double complement_defect(const ScalarFunction& r, const Grid& grid);        // |r(t) + r(1/t) - 1|
double selftransposed_defect(const ScalarFunction& f, const Grid& grid);    // relative
double bures_bound_excess(const ScalarFunction& f, const Grid& grid);       // max(f - (1+t)/2)
double min_value(const ScalarFunction& f, const Grid& grid);
double max_abs_difference(const ScalarFunction& a, const ScalarFunction& b, const Grid& grid);

// Each throws ValidationError naming the violated invariant.
void validate(const ConnectionFunction& conn, const Grid& grid, double tol = 1e-12,
              bool metric_compatible = false);
void validate(const RFunction& r, const Grid& grid, double tol = 1e-12);
void validate(const MetricFunction& k, const Grid& grid);
void validate(const MonotoneFunction& f, const Grid& grid, double tol = 1e-12);

RFunction r_from_F(const ConnectionFunction& conn);
ConnectionFunction F_from_r(const RFunction& r);

/// r(t) = t k(1/t) / (k(t) + t k(1/t)), F(t) = (t k(1/t) - k(t)) / (t k(1/t) + k(t)).
std::pair<RFunction, ConnectionFunction> rF_from_k(const MetricFunction& metric);

/// k(t) = sqrt(t) (1 - F(t)) q(t) for a positive q with q(t) = q(1/t).
MetricFunction k_family_from_F(const ConnectionFunction& conn, const ScalarFunction& q);

/// f(t) = (k(t) + t k(1/t))^2 / (4 k(t)). The result has f(1) = k(1).
MonotoneFunction f_from_k(const MetricFunction& metric);

/// k(t) = 4 t^2 f(t) f(1/t)^2 / (f(t) + t f(1/t))^2, the inverse of f_from_k.
MetricFunction k_from_f(const MonotoneFunction& f);

/// r(t) = f(t) / (f(t) + t f(1/t)).
std::pair<RFunction, ConnectionFunction> rF_from_f(const MonotoneFunction& f);

/// f_s(t) = (k(t) + t k(1/t)) / 2.
MonotoneFunction fs_from_k(const MetricFunction& metric);

/// Max relative defect of k(t) + t k(1/t) = k(t)^2 + t k(1/t)^2.
double hs_defect(const MetricFunction& metric, const Grid& grid);
bool check_HS(const MetricFunction& metric, const Grid& grid = Grid::log_uniform(),
              double tol = 1e-10);

/// k(t) = 2t (1-F) / ((1+F)^2 + t (1-F)^2).
MetricFunction k_from_F_HS(const ConnectionFunction& conn);
/// f_s(t) = 2t / ((1+F)^2 + t (1-F)^2).
MonotoneFunction fs_from_F_HS(const ConnectionFunction& conn);

/// Throws NotSelftransposed or ExceedsBuresBound, checked on `grid`.
HSsolution hs_solve(const MonotoneFunction& fs, const Grid& grid = Grid::log_uniform());

/// The connection obtained from the negative root -(t-1) tau(t). It violates
/// F < 1 unless tau vanishes; exposed for checking the root selection.
ConnectionFunction hs_opposite_root(const HSsolution& solution, const MonotoneFunction& fs);

/// f_s(t) = m({0}) (1+t)/2 + sum m_i (1+x_i)/2 (t/(t+x_i) + t/(t x_i + 1)).
MonotoneFunction fs_from_measure(const RadonMeasureSpec& measure);

/// Named entries: bures, canonical, wigner_yanase, kubo_mori and
/// measure(x:m, ...) for atomic measures.
MonotoneFunction monotone_catalog(std::string_view name);
/// bures (alias geo), canonical (alias can), global_section, power(s) with
/// r(t) = t^s / (1 + t^s).
ConnectionFunction connection_catalog(std::string_view name);
/// Any monotone_catalog name (the Condition-HS k of that f_s), plus
/// hs (k = 1), sqrt, power(s) and constant(c).
MetricFunction metric_catalog(std::string_view name);

std::vector<std::string> monotone_catalog_names();
std::vector<std::string> connection_catalog_names();

}  // namespace purgeom
