#pragma once

// Horizontal transport along curves of density operators: fixed-step RK4 on
// the phase equation, closed-form lifts of von Neumann curves, holonomy
// invariants and noisy pure-state curves.

#include <cstdint>
#include <functional>
#include <optional>
#include <vector>

#include "purgeom/connect.hpp"
#include "purgeom/funzoo.hpp"

namespace purgeom {

using ComplexVector = Eigen::VectorXcd;

inline constexpr double kDefaultOdeTol = 1e-6;
inline constexpr int kStepsPerUnit = 2000;

/// steps <= 0 selects kStepsPerUnit per unit of parameter.
int resolve_steps(double t_in, double t_out, int steps);

/// t -> rho_t on [t_in, t_out]. Without a derivative, rho_dot is taken from
/// 4th-order central differences with h = 1e-4 (t_out - t_in), so the
/// sampler is also evaluated slightly outside the interval.
struct DensityCurve {
  std::function<Matrix(double)> sampler;
  std::function<Matrix(double)> derivative;
  double t_in = 0.0;
  double t_out = 1.0;
  int steps = 0;

  Matrix at(double t) const;
  Matrix velocity(double t) const;
};

struct TransportResult {
  std::vector<double> t;
  std::vector<Matrix> w;
  std::vector<Matrix> v;
  Matrix w_in;
  Matrix w_out;
  double projection_residual = 0.0;      // max ||w w* - rho_t||
  double horizontality_residual = 0.0;   // max ||a(dw/dt)|| at interior samples; NaN if not evaluable
};

struct TransportOptions {
  double ode_tol = kDefaultOdeTol;
  bool check_horizontality = true;  // StepTooLarge beyond 10 ode_tol
};

/// Lifts `curve` horizontally starting from w0. General F needs a faithful
/// curve; Bures transport works at any fixed rank. Throws RankDeficient,
/// RankChanged, BasePointMismatch or StepTooLarge.
TransportResult transport_ode(const ConnectionFunction& conn, const DensityCurve& curve,
                              const PurificationVector& w0, const TransportOptions& options = {});

/// rho_t = u_t* rho_in u_t with u_t = exp(i (t - t_in) h).
struct VonNeumannProblem {
  Matrix h;
  Matrix rho_in;
  double t_in = 0.0;
  double t_out = 1.0;
  int steps = 0;

  DensityCurve curve() const;
};

/// (sqrt(R/L) r(L/R) + sqrt(L/R) r(R/L)) h at rho_in. At a rank-deficient
/// rho_in the mixed blocks carry the limit kappa of the connection; without
/// it RankDeficient is thrown.
Matrix vn_tilde_h(const ConnectionFunction& conn, const Matrix& rho_in, const Matrix& h);

/// w_t = u_t* sqrt(rho_in) exp(i (t - t_in) h~).
TransportResult vn_transport(const VonNeumannProblem& problem, const ConnectionFunction& conn);

/// Tr [(rho_in exp(-i T h) exp(i T h~))^m], m = 1..m_max, T = t_out - t_in.
std::vector<Complex> vn_holonomy_closed_form(const VonNeumannProblem& problem,
                                              const ConnectionFunction& conn, int m_max);

/// Tr w_in* w_out.
Complex relative_phase(const Matrix& w_in, const Matrix& w_out);

/// Tr (w_out w_in*)^m for m = 1..m_max. Throws NotCyclic unless
/// ||w_in w_in* - w_out w_out*|| <= tol max(1, ||w_in w_in*||).
std::vector<Complex> holonomy_invariants(const Matrix& w_in, const Matrix& w_out, int m_max,
                                         double tol = 1e-6);

/// Unit-vector curve t -> psi_t.
struct PureCurve {
  std::function<ComplexVector(double)> psi;
  std::function<ComplexVector(double)> derivative;
  double t_in = 0.0;
  double t_out = 1.0;
  int steps = 0;

  ComplexVector at(double t) const;
  ComplexVector velocity(double t) const;
};

/// psi(phi) = (cos(theta/2), exp(i phi) sin(theta/2)), phi in [0, 2 pi].
PureCurve spin_half_loop(double theta, int steps = 0);

/// rho_t = alpha p_t + beta 1 with p_t = |psi_t><psi_t|.
struct NoiseModel {
  PureCurve curve;
  double alpha = 1.0;
  double beta = 0.0;

  DensityCurve density_curve() const;
};

/// (1 / (2 sqrt(s))) ((1 + s) + (1 - s) F(s)) with s = beta / (alpha + beta).
double noise_mu(const ConnectionFunction& conn, double alpha, double beta);

/// lim (1 + F(l)) / (2 sqrt(l)) as l -> 0 when F(0) = -1 and the limit
/// settles numerically; nullopt otherwise.
std::optional<double> noise_kappa(const ConnectionFunction& conn);

/// Integrates v' = (mu - 1)(p p' - p' p) v, or with kappa in place of mu for
/// beta = 0. Throws PureLimitUndefined if beta = 0 and kappa does not exist.
TransportResult noise_transport(const NoiseModel& model, const ConnectionFunction& conn,
                                const TransportOptions& options = {});

/// alpha (1 - tau) / (tau k(1/tau) + k(tau)) * bures_ds2, tau = beta / (alpha + beta).
double noise_line_element(const MetricFunction& k, double alpha, double beta, double bures_ds2);

/// Smooth periodic curve rho_t = A_t A_t* + floor, A_t = A0 + A1 cos 2 pi t
/// + A2 sin 2 pi t with Gaussian A_m, normalized to trace one. floor = 0
/// gives curves that may lose rank.
DensityCurve random_smooth_curve(int n, std::uint64_t seed, double floor = 0.2, double t_in = 0.0,
                                 double t_out = 1.0);

}  // namespace purgeom
