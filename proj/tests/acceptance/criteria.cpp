#include "criteria.hpp"

#include <cmath>
#include <cstdio>
#include <exception>
#include <ostream>

#include "oracles.hpp"
#include "purgeom/errors.hpp"
#include "purgeom/metrics.hpp"
#include "purgeom/transport.hpp"

namespace purgeom::acceptance {

namespace {

// Worst error against a tolerance, plus extra conditions that must hold.
class Tracker {
 public:
  Tracker(int id, std::string name, double tol) : id_(id), name_(std::move(name)), tol_(tol) {}

  void error(double e, const std::string& where) {
    if (!(e <= worst_)) {
      worst_ = std::isnan(e) ? INFINITY : e;
      worst_where_ = where;
    }
  }
  void require(bool ok, const std::string& what) {
    if (!ok && detail_.empty()) detail_ = what;
    if (!ok) failed_ = true;
  }
  CriterionResult done() const {
    CriterionResult r;
    r.id = id_;
    r.name = name_;
    r.measured = worst_;
    r.tolerance = tol_;
    r.pass = !failed_ && worst_ < tol_;
    r.detail = detail_;
    if (!(worst_ < tol_) && r.detail.empty()) r.detail = "worst at " + worst_where_;
    return r;
  }

 private:
  int id_;
  std::string name_;
  double tol_;
  double worst_ = 0.0;
  std::string worst_where_;
  std::string detail_;
  bool failed_ = false;
};

const Grid& grid() {
  static const Grid g = Grid::log_uniform();
  return g;
}

ScalarFunction fn(std::function<double(double)> f) { return ScalarFunction(std::move(f)); }

Matrix root_of(const Matrix& rho) {
  return matfun(DensityOperator(rho).eig(), [](double l) { return std::sqrt(std::max(l, 0.0)); });
}

Matrix diag(const Eigen::VectorXd& d) { return d.cast<Complex>().asDiagonal(); }

double rel(double a, double b) { return std::abs(a - b) / std::max(1.0, std::abs(b)); }

const char* const kConnections[] = {"bures", "canonical", "global_section", "power(0.3)",
                                    "power(2.5)"};

CriterionResult golden_values() {
  Tracker t(1, "function-layer golden values", 1e-12);
  const auto [r, F] = rF_from_k(metric_catalog("hs"));
  t.error(max_abs_difference(F.F, fn([](double x) { return (x - 1) / (x + 1); }), grid()), "F of k=1");
  t.error(max_abs_difference(r.r, fn([](double x) { return x / (1 + x); }), grid()), "r of k=1");
  const auto bures = connection_catalog("bures");
  t.error(max_abs_difference(k_from_F_HS(bures).k, ScalarFunction::constant(1.0), grid()), "k of Bures");
  t.error(max_abs_difference(fs_from_F_HS(bures).f, fn([](double x) { return (1 + x) / 2; }), grid()),
          "f_s of Bures");
  const ConnectionFunction zero{ScalarFunction::constant(0.0)};
  const auto expect = fn([](double x) { return 2 * x / (1 + x); });
  t.error(max_abs_difference(k_from_F_HS(zero).k, expect, grid()), "k of F=0");
  t.error(max_abs_difference(fs_from_F_HS(zero).f, expect, grid()), "f_s of F=0");
  return t.done();
}

CriterionResult round_trips() {
  Tracker t(2, "round trips F<->r, k<->f, F<->k, f_s<->(k,F)", 1e-10);
  for (const char* name : kConnections) {
    const auto F = connection_catalog(name);
    t.error(max_abs_difference(F_from_r(r_from_F(F)).F, F.F, grid()), std::string("F<->r ") + name);
    t.error(max_abs_difference(rF_from_k(k_from_F_HS(F)).second.F, F.F, grid()),
            std::string("F<->k ") + name);
  }
  for (const char* name : {"hs", "canonical", "sqrt", "wigner_yanase", "kubo_mori", "power(0.7)"}) {
    const auto k = metric_catalog(name);
    t.error(max_abs_difference(k_from_f(f_from_k(k)).k, k.k, grid()), std::string("k<->f ") + name);
  }
  for (const char* name : {"bures", "canonical", "wigner_yanase", "kubo_mori", "measure(0.3:1)"}) {
    const auto fs = monotone_catalog(name);
    const auto sol = hs_solve(fs);
    t.error(max_abs_difference(fs_from_k(sol.k).f, fs.f, grid()), std::string("f_s<->k ") + name);
    t.error(max_abs_difference(fs_from_F_HS(sol.F).f, fs.f, grid()), std::string("f_s<->F ") + name);
  }
  return t.done();
}

CriterionResult hs_constraint() {
  Tracker t(3, "Condition HS holds for k_from_F_HS", 1e-10);
  for (const char* name : kConnections) {
    const auto k = k_from_F_HS(connection_catalog(name));
    t.error(hs_defect(k, grid()), name);
    t.require(check_HS(k, grid(), 1e-10), std::string("check_HS rejected ") + name);
  }
  const MetricFunction perturbed{fn([](double x) { return 1.0 + 0.01 * std::log(x); })};
  t.require(!check_HS(perturbed, grid(), 1e-10), "perturbed k passed check_HS");
  return t.done();
}

CriterionResult bures_below_canonical() {
  Tracker t(4, "Bures <= canonical, equal on commuting pairs", 1e-9);
  oracle::Rng rng(404);
  for (int trial = 0; trial < 100; ++trial) {
    const int n = 2 + trial % 4;
    const DensityOperator rho(rng.density(n));
    const Matrix xi = rng.hermitian(n);
    const StateTangent tan(rho, xi);
    const double b = bures_inner(rho, tan, tan), c = canonical_inner(rho, tan, tan);
    t.require(b <= c * (1 + 1e-12), "Bures exceeds canonical");
    t.require(c - b > 1e-9 * c, "equality on a non-commuting pair");

    const Matrix u = rng.unitary(n);
    Eigen::VectorXd l(n), d(n);
    for (int j = 0; j < n; ++j) {
      l(j) = rng.uniform(0.1, 1.0);
      d(j) = rng.normal();
    }
    l /= l.sum();
    const DensityOperator commuting(u * diag(l) * u.adjoint());
    const StateTangent ct(commuting, u * diag(d) * u.adjoint());
    const double bc = bures_inner(commuting, ct, ct), cc = canonical_inner(commuting, ct, ct);
    t.error(std::abs(bc - cc) / cc, "commuting pair");
  }
  return t.done();
}

CriterionResult fisher_restriction() {
  Tracker t(5, "Bures on diagonal families is a quarter of Fisher", 1e-12);
  oracle::Rng rng(505);
  for (int trial = 0; trial < 50; ++trial) {
    Eigen::VectorXd l(3), d(3);
    for (int j = 0; j < 3; ++j) {
      l(j) = rng.uniform(0.05, 1.0);
      d(j) = rng.normal();
    }
    l /= l.sum();
    d.array() -= d.mean();
    const DensityOperator rho(diag(l));
    const StateTangent xi(rho, diag(d));
    double fisher = 0.0;
    for (int j = 0; j < 3; ++j) fisher += 0.25 * d(j) * d(j) / l(j);
    t.error(std::abs(bures_inner(rho, xi, xi) - fisher) / fisher, "diagonal family");
  }
  return t.done();
}

CriterionResult lift_length() {
  Tracker t(6, "Bures length equals HS length of the horizontal lift", 1e-4);
  const auto bures = connection_catalog("bures");
  constexpr int kSteps = 2000;
  for (int n = 2; n <= 3; ++n) {
    for (std::uint64_t seed : {61u, 62u, 63u}) {
      auto c = random_smooth_curve(n, seed);
      c.steps = kSteps;
      const auto r = transport_ode(bures, c, PurificationVector(root_of(c.at(0))));
      double lift = 0.0;
      for (std::size_t i = 0; i + 1 < r.w.size(); ++i) lift += (r.w[i + 1] - r.w[i]).norm();
      double length = 0.0;
      const double h = 1.0 / kSteps;
      for (int i = 0; i <= kSteps; ++i) {
        const DensityOperator rho(c.at(i * h));
        const Matrix drho = c.velocity(i * h);
        const double speed = std::sqrt(oracle::bures_dense(rho.matrix(), drho, drho));
        length += ((i == 0 || i == kSteps) ? 1.0 : (i % 2 ? 4.0 : 2.0)) * speed;
      }
      length *= h / 3;
      t.error(std::abs(lift - length) / length, "n=" + std::to_string(n));
    }
  }
  return t.done();
}

CriterionResult dual_path_metric() {
  Tracker t(7, "induced metric closed form vs lift-and-measure", 1e-9);
  oracle::Rng rng(707);
  for (const char* name : {"hs", "canonical", "wigner_yanase"}) {
    const auto k = metric_catalog(name);
    for (int n = 2; n <= 4; ++n) {
      for (int trial = 0; trial < 5; ++trial) {
        const DensityOperator rho(rng.density(n));
        const Matrix a = rng.hermitian(n), b = rng.hermitian(n);
        const Complex closed = induced_inner(k, rho, a, b).hermitian_value;
        const Complex lifted = induced_inner_lifted(k, rho, a, b);
        t.error(std::abs(closed - lifted) / std::max(1.0, std::abs(closed)), name);
      }
    }
  }
  return t.done();
}

CriterionResult connection_properties() {
  Tracker t(8, "connection equivariance, rescaling, reproduction, commuting tangents", 1e-9);
  oracle::Rng rng(808);
  for (int trial = 0; trial < 100; ++trial) {
    const int n = 2 + trial % 3;
    const auto conn = connection_catalog(kConnections[trial % 5]);
    const Matrix w = rng.invertible(n), x = rng.gaussian(n, n);
    const Matrix a = connection_eval(conn, PurificationVector(w), x).a;

    const Matrix h = rng.hermitian(n), u0 = rng.unitary(n);
    const Matrix du = kI * h * u0;
    const Matrix moved = connection_eval(conn, PurificationVector(w * u0), x * u0 + w * du).a;
    t.error(oracle::rel_diff(moved, u0.adjoint() * a * u0 + u0.adjoint() * du), "equivariance");

    const double l = rng.uniform(0.2, 3.0), dl = rng.normal();
    t.error(oracle::rel_diff(connection_eval(conn, PurificationVector(l * w), dl * w + l * x).a, a),
            "rescaling");

    const Matrix a0 = rng.anti_hermitian(n);
    t.error(oracle::rel_diff(connection_eval(conn, PurificationVector(w), w * a0).a, a0),
            "reproduction");

    // tangent whose state part commutes with rho
    const Matrix u = rng.unitary(n);
    Eigen::VectorXd lam(n), dlam(n);
    for (int j = 0; j < n; ++j) {
      lam(j) = rng.uniform(0.1, 1.0);
      dlam(j) = rng.normal();
    }
    const Matrix rho = u * diag(lam) * u.adjoint(), drho = u * diag(dlam) * u.adjoint();
    const Matrix root = root_of(rho), v = rng.unitary(n);
    const Matrix wc = root * v, b = rng.anti_hermitian(n);
    const Matrix xc = 0.5 * root.inverse() * drho * v + wc * b;
    const Matrix z = wc.inverse() * xc;
    t.error(oracle::rel_diff(connection_eval(conn, PurificationVector(wc), xc).a,
                             0.5 * (z - z.adjoint())),
            "commuting tangent");
  }
  return t.done();
}

CriterionResult global_section() {
  Tracker t(9, "sqrt(rho_t) is horizontal for the global-section connection", 1e-8);
  const auto conn = connection_catalog("global_section");
  for (std::uint64_t seed = 900; seed < 910; ++seed) {
    const auto c = random_smooth_curve(2 + static_cast<int>(seed % 3), seed);
    for (double s : {0.05, 0.3, 0.55, 0.8, 0.95}) {
      const Matrix rho = c.at(s);
      const Matrix root = oracle::sqrt_denman_beavers(rho);
      // d/dt sqrt(rho) solves root X + X root = rho'
      const Matrix droot = oracle::sylvester_dense(0.5 * (root + root.adjoint()), c.velocity(s));
      t.error(connection_eval(conn, PurificationVector(root), droot).a.norm(),
              "seed " + std::to_string(seed));
    }
  }
  return t.done();
}

VonNeumannProblem tilted_period(int steps) {
  VonNeumannProblem p;
  p.h = Matrix::Zero(2, 2);
  p.h(0, 0) = 1.0;
  p.h(1, 1) = -1.0;
  p.rho_in = Matrix(2, 2);
  p.rho_in << 0.7, Complex(0.2, 0.1), Complex(0.2, -0.1), 0.3;
  p.t_in = 0.0;
  p.t_out = M_PI;
  p.steps = steps;
  return p;
}

double vn_ode_gap(const ConnectionFunction& conn, int steps) {
  const auto problem = tilted_period(steps);
  TransportOptions opts;
  opts.check_horizontality = false;
  const auto ode =
      transport_ode(conn, problem.curve(), PurificationVector(root_of(problem.rho_in)), opts);
  return (vn_transport(problem, conn).w_out - ode.w_out).norm();
}

CriterionResult transport_agreement() {
  Tracker t(10, "von Neumann closed form vs RK4 transport, observed order", 1e-6);
  for (const char* name : {"bures", "canonical", "global_section"})
    t.error(vn_ode_gap(connection_catalog(name), 2000), name);
  const auto bures = connection_catalog("bures");
  const double coarse = vn_ode_gap(bures, 100), fine = vn_ode_gap(bures, 200);
  char buf[96];
  std::snprintf(buf, sizeof buf, "error ratio %.3g when halving the step", coarse / fine);
  t.require(coarse / fine >= 12.0, buf);
  return t.done();
}

CriterionResult holonomy() {
  Tracker t(11, "holonomy of commuting cycles and in-point shifts", 1e-8);
  const char* const names[] = {"bures", "canonical", "global_section", "power(0.3)", "power(2.5)"};
  // commuting cycle through the ODE
  DensityCurve c;
  c.sampler = [](double s) {
    Eigen::VectorXd l(3);
    l << 0.5 + 0.2 * std::sin(s), 0.3 - 0.1 * std::sin(s), 0.2 - 0.1 * std::sin(s);
    return diag(l);
  };
  c.t_out = 2 * M_PI;
  c.steps = 1000;
  oracle::Rng rng(1111);
  const Matrix rho = c.at(0);
  for (const char* name : names) {
    const auto r = transport_ode(connection_catalog(name), c, PurificationVector(root_of(rho) * rng.unitary(3)));
    const auto inv = holonomy_invariants(r.w_in, r.w_out, 3);
    Matrix power = rho;
    for (int m = 0; m < 3; ++m) {
      t.error(std::abs(inv[static_cast<std::size_t>(m)] - power.trace()), std::string("commuting ") + name);
      power = power * rho;
    }
  }
  // in-point shifts along a von Neumann cycle
  const auto base = tilted_period(200);
  for (const char* name : names) {
    const auto conn = connection_catalog(name);
    const auto r0 = vn_transport(base, conn);
    const auto ref = holonomy_invariants(r0.w_in, r0.w_out, 3);
    for (double s : {0.4, 1.3, 2.6}) {
      VonNeumannProblem shifted = base;
      const Matrix u = exp_i(base.h, s);
      shifted.rho_in = u.adjoint() * base.rho_in * u;
      const auto r = vn_transport(shifted, conn);
      const auto inv = holonomy_invariants(r.w_in, r.w_out, 3);
      for (std::size_t m = 0; m < 3; ++m) t.error(std::abs(inv[m] - ref[m]), std::string("shift ") + name);
    }
  }
  return t.done();
}

CriterionResult noise_model() {
  Tracker t(12, "noise model: kappa, Berry phase, mu", 1e-4);
  const auto kb = noise_kappa(connection_catalog("bures"));
  t.require(kb.has_value() && std::abs(*kb) < 1e-5, "kappa(Bures) != 0");
  t.require(!noise_kappa(connection_catalog("canonical")).has_value(), "kappa(canonical) present");
  const auto kg = noise_kappa(connection_catalog("global_section"));
  t.require(kg.has_value() && std::abs(*kg - 1.0) < 1e-5, "kappa(global section) != 1");

  const double theta = M_PI / 3;
  const auto loop = spin_half_loop(theta, 2000);
  const auto r = noise_transport(NoiseModel{loop, 1.0, 0.0}, connection_catalog("bures"));
  const Complex hol = holonomy_invariants(r.w_in, r.w_out, 1)[0];
  const Complex brute = oracle::berry_factor(loop.psi, loop.derivative, 0.0, 2 * M_PI, 4000);
  t.error(std::abs(hol - brute), "holonomy vs brute-force Berry factor");
  t.error(std::abs(std::remainder(std::arg(hol) + M_PI * (1 - std::cos(theta)), 2 * M_PI)),
          "Berry phase");

  const double mu = noise_mu(connection_catalog("bures"), 1.0, 1.0);
  const double direct = 2.0 * std::sqrt(1.0 * 2.0) / 3.0;
  t.require(std::abs(mu - direct) < 1e-12, "mu(Bures, 1, 1) != 2 sqrt 2 / 3");
  return t.done();
}

CriterionResult tp06_blocks() {
  Tracker t(13, "h~ for noisy pure states: diagonal blocks kept, off-diagonal times mu", 1e-10);
  oracle::Rng rng(1313);
  for (int n = 2; n <= 5; ++n) {
    for (const char* name : {"bures", "canonical", "global_section", "power(0.3)"}) {
      const auto conn = connection_catalog(name);
      const Eigen::VectorXcd psi = rng.gaussian(n, 1).normalized();
      const Matrix p = psi * psi.adjoint(), q = Matrix::Identity(n, n) - p;
      const double alpha = rng.uniform(0.2, 1.0), beta = rng.uniform(0.05, 0.5);
      const Matrix rho = alpha * p + beta * Matrix::Identity(n, n);
      const Matrix h = rng.hermitian(n);
      const Matrix diff = vn_tilde_h(conn, rho, h) - h;
      const double mu = noise_mu(conn, alpha, beta);
      t.error((p * diff * p).norm() + (q * diff * q).norm(), std::string("diagonal ") + name);
      t.error((q * (h + diff) * p - mu * q * h * p).norm(), std::string("off-diagonal ") + name);
    }
  }
  return t.done();
}

CriterionResult root_rule() {
  Tracker t(14, "HS root rule for measure-generated f_s", 1.0);
  const std::vector<std::vector<RadonMeasureSpec::Atom>> measures = {
      {{0.5, 1.0}}, {{0.0, 0.5}, {1.0, 0.5}}, {{0.1, 0.3}, {0.9, 0.7}}, {{1.0, 1.0}},
      {{0.2, 0.25}, {0.4, 0.25}, {0.6, 0.25}, {0.8, 0.25}}};
  for (std::size_t i = 0; i < measures.size(); ++i) {
    const auto fs = fs_from_measure(RadonMeasureSpec{measures[i]});
    const auto sol = hs_solve(fs);
    double chosen = -INFINITY, opposite = -INFINITY;
    const auto other = hs_opposite_root(sol, fs);
    for (double x : grid().points) {
      chosen = std::max(chosen, sol.F.F(x));
      opposite = std::max(opposite, other.F(x));
    }
    // measured: the largest F of the selected root, which must stay below 1
    t.error(chosen, "measure " + std::to_string(i));
    t.require(opposite >= 1.0, "opposite root respects F < 1 for measure " + std::to_string(i));
  }
  return t.done();
}

}  // namespace

const std::vector<Criterion>& criteria() {
  static const std::vector<Criterion> all = {
      {1, "function-layer golden values", golden_values},
      {2, "round trips", round_trips},
      {3, "Condition HS", hs_constraint},
      {4, "Bures <= canonical", bures_below_canonical},
      {5, "Fisher restriction", fisher_restriction},
      {6, "lift-length equality", lift_length},
      {7, "dual-path metric", dual_path_metric},
      {8, "connection properties", connection_properties},
      {9, "global horizontal section", global_section},
      {10, "transport", transport_agreement},
      {11, "holonomy", holonomy},
      {12, "noise model", noise_model},
      {13, "noise h~ block structure", tp06_blocks},
      {14, "root rule", root_rule},
  };
  return all;
}

std::vector<CriterionResult> run_all() {
  std::vector<CriterionResult> out;
  for (const auto& c : criteria()) {
    try {
      out.push_back(c.run());
    } catch (const std::exception& e) {
      CriterionResult r;
      r.id = c.id;
      r.name = c.name;
      r.measured = INFINITY;
      r.detail = std::string("exception: ") + e.what();
      out.push_back(r);
    }
  }
  return out;
}

std::string format_line(const CriterionResult& r) {
  char buf[256];
  std::snprintf(buf, sizeof buf, "%s %2d %-72s measured=%.3e tol=%.1e", r.pass ? "PASS" : "FAIL",
                r.id, r.name.c_str(), r.measured, r.tolerance);
  std::string line = buf;
  if (!r.pass && !r.detail.empty()) line += "  (" + r.detail + ")";
  return line;
}

int run_and_print(std::ostream& out) {
  int failures = 0;
  for (const auto& c : criteria()) {
    CriterionResult r;
    try {
      r = c.run();
    } catch (const std::exception& e) {
      r.id = c.id;
      r.name = c.name;
      r.measured = INFINITY;
      r.detail = std::string("exception: ") + e.what();
    }
    if (!r.pass) ++failures;
    out << format_line(r) << '\n' << std::flush;
  }
  return failures;
}

}  // namespace purgeom::acceptance
