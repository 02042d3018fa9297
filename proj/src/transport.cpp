#include "purgeom/transport.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <string>

#include "purgeom/errors.hpp"

namespace purgeom {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

template <typename F>
auto central_difference(const F& f, double t, double h) {
  return ((f(t - 2.0 * h) - f(t + 2.0 * h)) + 8.0 * (f(t + h) - f(t - h))) / (12.0 * h);
}

Matrix sqrt_psd(const DensityOperator& rho) {
  return matfun(rho.eig(), [](double l) { return std::sqrt(std::max(l, 0.0)); });
}

std::vector<double> time_grid(double t_in, double t_out, int steps) {
  std::vector<double> t(static_cast<std::size_t>(steps) + 1);
  const double h = (t_out - t_in) / steps;
  for (int i = 0; i <= steps; ++i) t[static_cast<std::size_t>(i)] = t_in + i * h;
  t.back() = t_out;
  return t;
}

double projection_defect(const Matrix& w, const Matrix& rho) {
  return (w * w.adjoint() - rho).norm();
}

// max ||a(dw/dt)|| over samples where a 4th-order stencil fits.
double discrete_horizontality(const ConnectionFunction& conn, const TransportResult& r) {
  const std::size_t n = r.w.size();
  if (n < 5) return kNaN;
  const double h = r.t[1] - r.t[0];
  double worst = 0.0;
  for (std::size_t i = 2; i + 2 < n; ++i) {
    const Matrix wdot =
        ((r.w[i - 2] - r.w[i + 2]) + 8.0 * (r.w[i + 1] - r.w[i - 1])) / (12.0 * h);
    worst = std::max(worst, connection_eval(conn, PurificationVector(r.w[i]), wdot).a.norm());
  }
  return worst;
}

void enforce_horizontality(const TransportResult& r, const TransportOptions& options,
                           const char* what) {
  if (!options.check_horizontality || std::isnan(r.horizontality_residual)) return;
  if (r.horizontality_residual > 10.0 * options.ode_tol)
    throw StepTooLarge(std::string(what) + ": horizontality residual " +
                       std::to_string(r.horizontality_residual) + " exceeds 10 x ode_tol");
}

// Fixed-step RK4 for y' = G(t) y with G cached per stage time.
template <typename Generator, typename Project, typename Record>
void integrate_linear(double t_in, double t_out, int steps, Matrix y, Generator&& generator,
                      Project&& project, Record&& record) {
  const double h = (t_out - t_in) / steps;
  Matrix g0 = generator(t_in);
  record(0, t_in, y);
  for (int i = 0; i < steps; ++i) {
    const double t = t_in + i * h;
    const double t1 = (i + 1 == steps) ? t_out : t + h;
    const Matrix gm = generator(t + 0.5 * h);
    const Matrix g1 = generator(t1);
    const Matrix k1 = g0 * y;
    const Matrix k2 = gm * (y + 0.5 * h * k1);
    const Matrix k3 = gm * (y + 0.5 * h * k2);
    const Matrix k4 = g1 * (y + h * k3);
    y += (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    y = project(t1, y);
    record(i + 1, t1, y);
    g0 = g1;
  }
}

DensityOperator checked_state(const DensityCurve& curve, double t, Eigen::Index rank) {
  DensityOperator rho(curve.at(t));
  if (rho.rank() != rank)
    throw RankChanged("transport: rank changes from " + std::to_string(rank) + " to " +
                      std::to_string(rho.rank()) + " at t = " + std::to_string(t));
  return rho;
}

}  // namespace

int resolve_steps(double t_in, double t_out, int steps) {
  if (steps > 0) return steps;
  const double span = std::abs(t_out - t_in);
  return std::max(1, static_cast<int>(std::ceil(kStepsPerUnit * span - 1e-9)));
}

Matrix DensityCurve::at(double t) const {
  if (!sampler) throw ValidationError("DensityCurve: no sampler");
  return sampler(t);
}

Matrix DensityCurve::velocity(double t) const {
  if (derivative) return derivative(t);
  const double span = t_out - t_in;
  if (span == 0.0) throw ValidationError("DensityCurve: empty parameter interval");
  return central_difference([this](double s) { return at(s); }, t, 1e-4 * std::abs(span));
}

TransportResult transport_ode(const ConnectionFunction& conn, const DensityCurve& curve,
                              const PurificationVector& w0, const TransportOptions& options) {
  const int steps = resolve_steps(curve.t_in, curve.t_out, curve.steps);
  const DensityOperator rho0(curve.at(curve.t_in));
  require_same_shape(rho0.matrix(), w0.matrix(), "transport_ode");
  const double start_defect = projection_defect(w0.matrix(), rho0.matrix());
  if (start_defect > tol::kReconstruct * std::max(1.0, rho0.matrix().norm()))
    throw BasePointMismatch("transport_ode: w0 w0* differs from rho(t_in) by " +
                            std::to_string(start_defect));
  const Eigen::Index rank = rho0.rank();
  if (!rho0.faithful() && !conn.bures)
    throw RankDeficient("transport_ode: curve is not faithful; only the Bures connection is "
                        "defined at rank " +
                        std::to_string(rank));

  TransportResult out;
  out.t = time_grid(curve.t_in, curve.t_out, steps);
  out.w.resize(out.t.size());
  out.v.resize(out.t.size());

  if (rho0.faithful()) {
    // v' = -A v with A = (1/2) (LR)^-1/2 (F(L/R) + (sqrt R - sqrt L)/(sqrt R + sqrt L)) rho'.
    auto generator = [&](double t) -> Matrix {
      const DensityOperator rho = checked_state(curve, t, rank);
      return -apply_state_kernel(
          rho,
          [&](double lj, double lk) {
            const double sj = std::sqrt(lj), sk = std::sqrt(lk);
            return (eval_ratio(conn.F, lj, lk) + (sk - sj) / (sk + sj)) / (2.0 * sj * sk);
          },
          curve.velocity(t));
    };
    auto project = [](double, const Matrix& v) { return nearest_unitary(v); };
    auto record = [&](int i, double t, const Matrix& v) {
      const DensityOperator rho(curve.at(t));
      out.v[static_cast<std::size_t>(i)] = v;
      out.w[static_cast<std::size_t>(i)] = sqrt_psd(rho) * v;
      out.projection_residual = std::max(
          out.projection_residual, projection_defect(out.w[static_cast<std::size_t>(i)], rho.matrix()));
    };
    integrate_linear(curve.t_in, curve.t_out, steps, w0.schmidt().phase, generator, project,
                     record);
  } else {
    // Bures at fixed rank: w' = g w with rho g + g rho = rho'.
    auto generator = [&](double t) -> Matrix {
      const DensityOperator rho = checked_state(curve, t, rank);
      return sylvester_solve(rho, StateTangent(rho, hermitian_part(curve.velocity(t))));
    };
    auto project = [&](double t, const Matrix& w) -> Matrix {
      const Matrix root = sqrt_psd(DensityOperator(curve.at(t)));
      return root * schmidt_decompose(root * w).phase;
    };
    auto record = [&](int i, double t, const Matrix& w) {
      const Matrix rho = curve.at(t);
      out.w[static_cast<std::size_t>(i)] = w;
      out.v[static_cast<std::size_t>(i)] = schmidt_decompose(w).phase;
      out.projection_residual = std::max(out.projection_residual, projection_defect(w, rho));
    };
    integrate_linear(curve.t_in, curve.t_out, steps, w0.matrix(), generator, project, record);
  }

  out.w_in = out.w.front();
  out.w_out = out.w.back();
  out.horizontality_residual = discrete_horizontality(conn, out);
  enforce_horizontality(out, options, "transport_ode");
  return out;
}

DensityCurve VonNeumannProblem::curve() const {
  const Matrix hh = h, rho = rho_in;
  const double t0 = t_in;
  DensityCurve c;
  c.sampler = [hh, rho, t0](double t) {
    const Matrix u = exp_i(hh, t - t0);
    return Matrix(u.adjoint() * rho * u);
  };
  c.derivative = [hh, rho, t0](double t) {
    const Matrix u = exp_i(hh, t - t0);
    const Matrix r = u.adjoint() * rho * u;
    return Matrix(-kI * commutator(hh, r));
  };
  c.t_in = t_in;
  c.t_out = t_out;
  c.steps = steps;
  return c;
}

Matrix vn_tilde_h(const ConnectionFunction& conn, const Matrix& rho_in, const Matrix& h) {
  const DensityOperator rho(rho_in);
  require_same_shape(rho.matrix(), h, "vn_tilde_h");
  if (!is_hermitian(h)) throw NonHermitianInput("vn_tilde_h: h is not Hermitian");
  std::optional<double> kappa;
  if (!rho.faithful()) {
    kappa = noise_kappa(conn);
    if (!kappa)
      throw RankDeficient("vn_tilde_h: rho_in is not faithful and the connection has no limit "
                          "kappa at the boundary");
  }
  const RFunction r = r_from_F(conn);
  const Matrix ht = apply_state_kernel(
      rho,
      [&](double lj, double lk) {
        if (lj > 0.0 && lk > 0.0)
          return std::sqrt(lk / lj) * r.r(lj / lk) + std::sqrt(lj / lk) * r.r(lk / lj);
        if (lj > 0.0 || lk > 0.0) return *kappa;
        return 0.0;
      },
      hermitian_part(h));
  return hermitian_part(ht);
}

TransportResult vn_transport(const VonNeumannProblem& problem, const ConnectionFunction& conn) {
  const DensityOperator rho_in(problem.rho_in);
  const Matrix ht = vn_tilde_h(conn, problem.rho_in, problem.h);
  const Matrix root = sqrt_psd(rho_in);
  const int steps = resolve_steps(problem.t_in, problem.t_out, problem.steps);
  const bool measurable = conn.bures || rho_in.faithful();

  TransportResult out;
  out.t = time_grid(problem.t_in, problem.t_out, steps);
  for (double t : out.t) {
    const double s = t - problem.t_in;
    const Matrix u_star = exp_i(problem.h, -s);
    const Matrix evolve = exp_i(ht, s);
    const Matrix w = u_star * root * evolve;
    out.w.push_back(w);
    out.v.push_back(rho_in.faithful() ? Matrix(u_star * evolve) : schmidt_decompose(w).phase);
    const Matrix rho_t = u_star * rho_in.matrix() * u_star.adjoint();
    out.projection_residual = std::max(out.projection_residual, projection_defect(w, rho_t));
    if (measurable) {
      const Matrix wdot = -kI * (problem.h * w - w * ht);
      out.horizontality_residual =
          std::max(out.horizontality_residual,
                   connection_eval(conn, PurificationVector(w), wdot).a.norm());
    }
  }
  if (!measurable) out.horizontality_residual = kNaN;
  out.w_in = out.w.front();
  out.w_out = out.w.back();
  return out;
}

std::vector<Complex> vn_holonomy_closed_form(const VonNeumannProblem& problem,
                                              const ConnectionFunction& conn, int m_max) {
  const double T = problem.t_out - problem.t_in;
  const Matrix ht = vn_tilde_h(conn, problem.rho_in, problem.h);
  const Matrix x = problem.rho_in * exp_i(problem.h, -T) * exp_i(ht, T);
  std::vector<Complex> out;
  Matrix power = x;
  for (int m = 1; m <= m_max; ++m) {
    out.push_back(power.trace());
    power = power * x;
  }
  return out;
}

Complex relative_phase(const Matrix& w_in, const Matrix& w_out) {
  require_same_shape(w_in, w_out, "relative_phase");
  return hs_inner(w_in, w_out);
}

std::vector<Complex> holonomy_invariants(const Matrix& w_in, const Matrix& w_out, int m_max,
                                         double tol) {
  require_same_shape(w_in, w_out, "holonomy_invariants");
  if (m_max < 1) throw ValidationError("holonomy_invariants: m_max must be positive");
  const Matrix rho_in = w_in * w_in.adjoint();
  const double gap = (rho_in - w_out * w_out.adjoint()).norm();
  if (gap > tol * std::max(1.0, rho_in.norm()))
    throw NotCyclic("holonomy_invariants: end points project to states " + std::to_string(gap) +
                    " apart");
  const Matrix x = w_out * w_in.adjoint();
  std::vector<Complex> out;
  Matrix power = x;
  for (int m = 1; m <= m_max; ++m) {
    out.push_back(power.trace());
    power = power * x;
  }
  return out;
}

ComplexVector PureCurve::at(double t) const {
  if (!psi) throw ValidationError("PureCurve: no sampler");
  const ComplexVector v = psi(t);
  if (std::abs(v.squaredNorm() - 1.0) > 1e-12)
    throw ValidationError("PureCurve: psi is not a unit vector at t = " + std::to_string(t));
  return v;
}

ComplexVector PureCurve::velocity(double t) const {
  if (derivative) return derivative(t);
  const double span = t_out - t_in;
  if (span == 0.0) throw ValidationError("PureCurve: empty parameter interval");
  return central_difference([this](double s) { return psi(s); }, t, 1e-4 * std::abs(span));
}

PureCurve spin_half_loop(double theta, int steps) {
  const double c = std::cos(0.5 * theta), s = std::sin(0.5 * theta);
  PureCurve curve;
  curve.psi = [c, s](double phi) {
    ComplexVector v(2);
    v << c, std::exp(kI * phi) * s;
    return v;
  };
  curve.derivative = [s](double phi) {
    ComplexVector v(2);
    v << 0.0, kI * std::exp(kI * phi) * s;
    return v;
  };
  curve.t_in = 0.0;
  curve.t_out = 2.0 * M_PI;
  curve.steps = steps;
  return curve;
}

DensityCurve NoiseModel::density_curve() const {
  const PureCurve c = curve;
  const double a = alpha, b = beta;
  DensityCurve out;
  out.sampler = [c, a, b](double t) {
    const ComplexVector psi = c.at(t);
    const Eigen::Index n = psi.size();
    return Matrix(a * psi * psi.adjoint() + b * Matrix::Identity(n, n));
  };
  out.derivative = [c, a](double t) {
    const ComplexVector psi = c.at(t), dpsi = c.velocity(t);
    const Matrix x = dpsi * psi.adjoint();
    return Matrix(a * (x + x.adjoint()));
  };
  out.t_in = c.t_in;
  out.t_out = c.t_out;
  out.steps = c.steps;
  return out;
}

double noise_mu(const ConnectionFunction& conn, double alpha, double beta) {
  if (!(alpha > 0.0) || !(beta > 0.0))
    throw ValidationError("noise_mu: alpha and beta must be positive");
  const double s = beta / (alpha + beta);
  return ((1.0 + s) + (1.0 - s) * conn.F(s)) / (2.0 * std::sqrt(s));
}

std::optional<double> noise_kappa(const ConnectionFunction& conn) {
  const auto& declared = conn.F.boundary().at_zero;
  const double f0 = declared ? *declared : conn.F(1e-14);
  const double allowed = declared ? 1e-12 : 1e-5;
  if (!(std::abs(f0 + 1.0) <= allowed)) return std::nullopt;

  constexpr int kPoints = 7;
  double q[kPoints];
  for (int j = 0; j < kPoints; ++j) {
    const double l = std::pow(10.0, -4.0 - j);
    q[j] = (1.0 + conn.F(l)) / (2.0 * std::sqrt(l));
    if (!std::isfinite(q[j])) return std::nullopt;
  }
  double d[kPoints - 1];
  for (int j = 0; j + 1 < kPoints; ++j) d[j] = q[j + 1] - q[j];
  for (int j = 0; j + 2 < kPoints; ++j) {
    if (std::abs(d[j + 1]) > std::abs(d[j]) + 1e-14) return std::nullopt;
  }
  // Aitken's delta-squared on consecutive triples.
  double est[kPoints - 2];
  for (int j = 0; j + 2 < kPoints; ++j) {
    const double denom = d[j + 1] - d[j];
    est[j] = denom == 0.0 ? q[j + 2] : q[j + 2] - d[j + 1] * d[j + 1] / denom;
  }
  const int last = kPoints - 3;
  if (std::abs(est[last] - est[last - 1]) > 1e-5) return std::nullopt;
  return est[last];
}

TransportResult noise_transport(const NoiseModel& model, const ConnectionFunction& conn,
                                const TransportOptions& options) {
  if (!(model.alpha > 0.0) || !(model.beta >= 0.0))
    throw ValidationError("noise_transport: need alpha > 0 and beta >= 0");
  double coefficient;
  if (model.beta > 0.0) {
    coefficient = noise_mu(conn, model.alpha, model.beta) - 1.0;
  } else {
    const auto kappa = noise_kappa(conn);
    if (!kappa)
      throw PureLimitUndefined("noise_transport: beta = 0 but the connection has no limit kappa");
    coefficient = *kappa - 1.0;
  }

  const PureCurve& curve = model.curve;
  const int steps = resolve_steps(curve.t_in, curve.t_out, curve.steps);
  const Eigen::Index n = curve.at(curve.t_in).size();
  const double top = std::sqrt(model.alpha + model.beta), floor = std::sqrt(model.beta);
  auto root_at = [&](double t) {
    const ComplexVector psi = curve.at(t);
    const Matrix p = psi * psi.adjoint();
    return Matrix(floor * (Matrix::Identity(n, n) - p) + top * p);
  };

  TransportResult out;
  out.t = time_grid(curve.t_in, curve.t_out, steps);
  out.w.resize(out.t.size());
  out.v.resize(out.t.size());

  auto generator = [&](double t) -> Matrix {
    const ComplexVector psi = curve.at(t), dpsi = curve.velocity(t);
    const Matrix p = psi * psi.adjoint();
    const Matrix x = dpsi * psi.adjoint();
    const Matrix pdot = x + x.adjoint();
    return coefficient * commutator(p, pdot);
  };
  auto project = [](double, const Matrix& v) { return nearest_unitary(v); };
  auto record = [&](int i, double t, const Matrix& v) {
    const Matrix root = root_at(t);
    const std::size_t k = static_cast<std::size_t>(i);
    out.v[k] = v;
    out.w[k] = root * v;
    out.projection_residual =
        std::max(out.projection_residual, projection_defect(out.w[k], root * root));
  };
  integrate_linear(curve.t_in, curve.t_out, steps, Matrix::Identity(n, n), generator, project,
                   record);

  out.w_in = out.w.front();
  out.w_out = out.w.back();
  out.horizontality_residual =
      (model.beta > 0.0 || conn.bures) ? discrete_horizontality(conn, out) : kNaN;
  enforce_horizontality(out, options, "noise_transport");
  return out;
}

double noise_line_element(const MetricFunction& k, double alpha, double beta, double bures_ds2) {
  if (!(alpha > 0.0) || !(beta > 0.0))
    throw ValidationError("noise_line_element: alpha and beta must be positive");
  const double tau = beta / (alpha + beta);
  return alpha * (1.0 - tau) / (tau * k.k(1.0 / tau) + k.k(tau)) * bures_ds2;
}

DensityCurve random_smooth_curve(int n, std::uint64_t seed, double floor, double t_in,
                                 double t_out) {
  if (n < 1) throw ValidationError("random_smooth_curve: n must be positive");
  if (!(floor >= 0.0)) throw ValidationError("random_smooth_curve: floor must be >= 0");
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  auto gaussian = [&](double scale) {
    Matrix a(n, n);
    for (Eigen::Index j = 0; j < n; ++j)
      for (Eigen::Index k = 0; k < n; ++k) a(j, k) = Complex(normal(rng), normal(rng)) * scale;
    return a;
  };
  const double base = 1.0 / std::sqrt(2.0 * n);
  const Matrix a0 = gaussian(base), a1 = gaussian(0.5 * base), a2 = gaussian(0.5 * base);
  const double omega = 2.0 * M_PI;

  auto raw = [=](double t) {
    const Matrix a = a0 + std::cos(omega * t) * a1 + std::sin(omega * t) * a2;
    return Matrix(a * a.adjoint() + floor * Matrix::Identity(n, n));
  };
  auto raw_dot = [=](double t) {
    const Matrix a = a0 + std::cos(omega * t) * a1 + std::sin(omega * t) * a2;
    const Matrix da = omega * (std::cos(omega * t) * a2 - std::sin(omega * t) * a1);
    const Matrix x = da * a.adjoint();
    return Matrix(x + x.adjoint());
  };

  DensityCurve curve;
  curve.sampler = [raw](double t) {
    const Matrix m = raw(t);
    return Matrix(m / m.trace().real());
  };
  curve.derivative = [raw, raw_dot](double t) {
    const Matrix m = raw(t), dm = raw_dot(t);
    const double tr = m.trace().real(), dtr = dm.trace().real();
    return Matrix(dm / tr - m * (dtr / (tr * tr)));
  };
  curve.t_in = t_in;
  curve.t_out = t_out;
  return curve;
}

}  // namespace purgeom
