#include "jobs.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <limits>
#include <thread>

#include "criteria.hpp"
#include "purgeom/errors.hpp"
#include "purgeom/metrics.hpp"
#include "purgeom/transport.hpp"

namespace purgeom::cli {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

Json complex_json(Complex z) { return Json{{"re", z.real()}, {"im", z.imag()}}; }

Json complex_list(const std::vector<Complex>& zs) {
  Json out = Json::array();
  for (const auto& z : zs) out.push_back(complex_json(z));
  return out;
}

// NaN and inf are not JSON numbers.
Json number(double x) {
  if (std::isnan(x)) return nullptr;
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  return x;
}

Matrix root_of(const Matrix& rho) {
  return matfun(DensityOperator(rho).eig(), [](double l) { return std::sqrt(std::max(l, 0.0)); });
}

const Json& require(const Json& spec, const char* key, const std::string& command) {
  if (!spec.contains(key)) throw ParseError(command + ": spec needs \"" + key + "\"");
  return spec[key];
}

int effective_steps(const Json& spec, const JobOptions& options) {
  const int steps = options.steps ? *options.steps : get_int(spec, "steps", 0);
  if (steps < 0) throw ValidationError("steps must be non-negative");
  return steps;
}

std::uint64_t effective_seed(const Json& spec, const JobOptions& options) {
  if (options.seed) return *options.seed;
  if (spec.contains("seed")) {
    if (!spec["seed"].is_number_unsigned()) throw ParseError("seed: expected an unsigned integer");
    return spec["seed"].get<std::uint64_t>();
  }
  return 1;
}

Json options_json(const Json& spec, const JobOptions& options) {
  Json o;
  o["seed"] = effective_seed(spec, options);
  o["steps"] = effective_steps(spec, options);
  if (options.grid) o["grid"] = *options.grid;
  return o;
}

// ---------------------------------------------------------------- convert

struct Family {
  ScalarFunction F, r, k, fs, f, tau;
};

JobOutput convert(const Json& spec, const JobOptions& options) {
  const std::string from = require(spec, "from", "convert").get<std::string>();
  const Json& fj = require(spec, "function", "convert");
  const Grid grid = options.grid ? parse_grid_arg(*options.grid)
                    : spec.contains("grid") ? parse_grid(spec["grid"])
                                            : Grid::log_uniform();
  Family fam;
  Json diag;
  if (from == "fs") {
    const auto fs = parse_monotone(fj);
    if (!fs.selftransposed) throw NotSelftransposed("convert: f_s must be selftransposed");
    const auto sol = hs_solve(fs, grid);
    fam = {sol.F.F, r_from_F(sol.F).r, sol.k.k, fs.f, f_from_k(sol.k).f, sol.tau};
    diag["hs_defect"] = hs_defect(sol.k, grid);
    diag["round_trip_fs"] = max_abs_difference(fs_from_k(sol.k).f, fs.f, grid);
  } else if (from == "F" || from == "r") {
    ConnectionFunction conn;
    if (from == "F") {
      conn = parse_connection(fj);
    } else {
      RFunction r{fj.is_string() ? r_from_F(connection_catalog(fj.get<std::string>())).r
                                 : parse_function(fj, "function")};
      validate(r, grid, 1e-9);
      conn = F_from_r(r);
    }
    const auto k = k_from_F_HS(conn);
    fam = {conn.F, r_from_F(conn).r, k.k, fs_from_F_HS(conn).f, f_from_k(k).f, {}};
    diag["hs_defect"] = hs_defect(k, grid);
    diag["round_trip_F"] = max_abs_difference(rF_from_k(k).second.F, conn.F, grid);
  } else if (from == "k") {
    const auto k = parse_metric(fj);
    const auto [r, F] = rF_from_k(k);
    fam = {F.F, r.r, k.k, fs_from_k(k).f, f_from_k(k).f, {}};
    diag["hs_defect"] = hs_defect(k, grid);
    diag["satisfies_hs"] = check_HS(k, grid);
    diag["round_trip_k"] = max_abs_difference(k_from_f(f_from_k(k)).k, k.k, grid);
  } else if (from == "f") {
    const auto f = parse_monotone(fj);
    const auto k = k_from_f(f);
    const auto [r, F] = rF_from_f(f);
    fam = {F.F, r.r, k.k, fs_from_k(k).f, f.f, {}};
    diag["hs_defect"] = hs_defect(k, grid);
    diag["round_trip_f"] = max_abs_difference(f_from_k(k).f, f.f, grid);
  } else {
    throw ValidationError("convert: \"from\" must be one of fs, f, k, F, r");
  }
  diag["antisymmetry_defect_F"] = antisymmetry_defect(fam.F, grid);
  diag["complement_defect_r"] = complement_defect(fam.r, grid);
  diag["selftransposed_defect_fs"] = selftransposed_defect(fam.fs, grid);
  diag["bures_bound_excess_fs"] = bures_bound_excess(fam.fs, grid);

  Table table;
  table.header = {"t", "F", "r", "k", "f", "f_s"};
  if (!fam.tau.empty()) table.header.push_back("tau");
  for (double t : grid.points) {
    std::vector<double> row{t, fam.F(t), fam.r(t), fam.k(t), fam.f(t), fam.fs(t)};
    if (!fam.tau.empty()) row.push_back(fam.tau(t));
    table.rows.push_back(std::move(row));
  }
  JobOutput out;
  out.report["outputs"] = {{"points", grid.points.size()},
                           {"F_at_2", fam.F(2.0)},
                           {"k_at_2", fam.k(2.0)},
                           {"f_s_at_2", fam.fs(2.0)}};
  out.report["diagnostics"] = diag;
  out.table = std::move(table);
  return out;
}

// ----------------------------------------------------------------- metric

JobOutput metric(const Json& spec, const JobOptions&) {
  const std::string kind = require(spec, "kind", "metric").get<std::string>();
  JobOutput out;
  Json outputs, diag;
  Complex value;
  double real_value = kNaN, cross = kNaN;
  if (kind == "purification") {
    const Matrix w = parse_matrix(require(spec, "w", "metric"), "w");
    const Matrix x = parse_matrix(require(spec, "x", "metric"), "x", w.rows());
    const Matrix y = spec.contains("y") ? parse_matrix(spec["y"], "y", w.rows()) : x;
    const auto k = parse_metric(require(spec, "function", "metric"));
    value = purification_inner(k, PurificationVector(w), y, x);
    real_value = value.real();
    diag["condition_number"] = number(PurificationVector(w).condition_number());
  } else {
    const DensityOperator rho(parse_matrix(require(spec, "rho", "metric"), "rho"));
    const Matrix xi1 = parse_matrix(require(spec, "xi1", "metric"), "xi1", rho.dim());
    const Matrix xi2 = spec.contains("xi2") ? parse_matrix(spec["xi2"], "xi2", rho.dim()) : xi1;
    diag["rank"] = rho.rank();
    if (kind == "bures" || kind == "canonical") {
      const StateTangent t1(rho, xi1), t2(rho, xi2);
      real_value = kind == "bures" ? bures_inner(rho, t1, t2) : canonical_inner(rho, t1, t2);
      value = real_value;
      if (kind == "bures") {
        const Matrix g = sylvester_solve(rho, t1);
        diag["sylvester_residual"] = (rho.matrix() * g + g * rho.matrix() - xi1).norm();
      }
    } else if (kind == "monotone") {
      const auto f = parse_monotone(require(spec, "function", "metric"));
      value = monotone_inner(f, rho, xi2, xi1);
      real_value = value.real();
    } else if (kind == "induced") {
      const auto k = parse_metric(require(spec, "function", "metric"));
      const auto report = induced_inner(k, rho, xi2, xi1);
      value = report.hermitian_value;
      real_value = report.real_value;
      cross = report.cross_check;
      diag["cross_check"] = cross;
      outputs["metric_id"] = report.metric_id;
    } else {
      throw ValidationError(
          "metric: \"kind\" must be one of bures, canonical, monotone, induced, purification");
    }
  }
  outputs["value"] = complex_json(value);
  outputs["real_value"] = number(real_value);
  out.report["outputs"] = outputs;
  out.report["diagnostics"] = diag;
  Table table;
  table.header = {"value_re", "value_im", "real_value", "cross_check"};
  table.rows.push_back({value.real(), value.imag(), real_value, cross});
  out.table = std::move(table);
  return out;
}

// -------------------------------------------------------------- transport

VonNeumannProblem parse_vn(const Json& spec, const std::string& what, int steps) {
  VonNeumannProblem p;
  p.rho_in = parse_matrix(require(spec, "rho_in", what), "rho_in");
  p.h = parse_matrix(require(spec, "h", what), "h", p.rho_in.rows());
  p.t_in = get_number(spec, "t_in", 0.0);
  p.t_out = get_number(spec, "t_out", 1.0);
  p.steps = steps;
  if (!(p.t_out > p.t_in)) throw ValidationError(what + ": need t_out > t_in");
  return p;
}

DensityCurve parse_curve(const Json& spec, const JobOptions& options, int steps) {
  const Json& c = require(spec, "curve", "transport");
  const std::string type = require(c, "type", "curve").get<std::string>();
  if (type == "von_neumann") return parse_vn(c, "curve", steps).curve();
  DensityCurve curve;
  if (type == "linear") {
    const Matrix a = parse_matrix(require(c, "rho0", "curve"), "rho0");
    const Matrix b = parse_matrix(require(c, "rho1", "curve"), "rho1", a.rows());
    DensityOperator{a};
    DensityOperator{b};
    curve.sampler = [a, b](double t) { return Matrix((1 - t) * a + t * b); };
    curve.derivative = [a, b](double) { return Matrix(b - a); };
    curve.t_in = get_number(c, "t_in", 0.0);
    curve.t_out = get_number(c, "t_out", 1.0);
    if (curve.t_in < 0.0 || curve.t_out > 1.0 || !(curve.t_out > curve.t_in))
      throw ValidationError("curve: linear curves need 0 <= t_in < t_out <= 1");
  } else if (type == "random") {
    const int n = get_int(c, "n", 2);
    curve = random_smooth_curve(n, effective_seed(spec, options), get_number(c, "floor", 0.2),
                                get_number(c, "t_in", 0.0), get_number(c, "t_out", 1.0));
  } else {
    throw ValidationError("curve: \"type\" must be von_neumann, linear or random");
  }
  curve.steps = steps;
  return curve;
}

Table lift_table(const TransportResult& r) {
  Table table;
  const Eigen::Index n = r.w_in.rows();
  table.header = {"t"};
  const auto cols = matrix_columns("w", n);
  table.header.insert(table.header.end(), cols.begin(), cols.end());
  for (std::size_t i = 0; i < r.t.size(); ++i) {
    std::vector<double> row{r.t[i]};
    append_matrix(row, r.w[i]);
    table.rows.push_back(std::move(row));
  }
  return table;
}

Json transport_diagnostics(const TransportResult& r) {
  return Json{{"steps", r.t.size() - 1},
              {"projection_residual", r.projection_residual},
              {"horizontality_residual", number(r.horizontality_residual)}};
}

void add_holonomy(Json& outputs, const TransportResult& r, int m_max) {
  try {
    outputs["holonomy_invariants"] = complex_list(holonomy_invariants(r.w_in, r.w_out, m_max));
  } catch (const NotCyclic&) {
    outputs["holonomy_invariants"] = nullptr;
  }
}

JobOutput transport(const Json& spec, const JobOptions& options) {
  const int steps = effective_steps(spec, options);
  const auto conn = parse_connection(require(spec, "connection", "transport"));
  const DensityCurve curve = parse_curve(spec, options, steps);
  const Matrix rho0 = curve.at(curve.t_in);
  const Matrix w0 = spec.contains("w0") ? parse_matrix(spec["w0"], "w0", rho0.rows()) : root_of(rho0);
  TransportOptions topt;
  topt.ode_tol = get_number(spec, "ode_tol", kDefaultOdeTol);
  const auto r = transport_ode(conn, curve, PurificationVector(w0), topt);

  JobOutput out;
  Json outputs;
  outputs["w_out"] = matrix_to_json(r.w_out);
  outputs["relative_phase"] = complex_json(relative_phase(r.w_in, r.w_out));
  add_holonomy(outputs, r, get_int(spec, "m_max", 3));
  out.report["outputs"] = outputs;
  Json diag = transport_diagnostics(r);
  diag["ode_tol"] = topt.ode_tol;
  diag["w0_reconstruction"] = (w0 * w0.adjoint() - rho0).norm();
  out.report["diagnostics"] = diag;
  out.table = lift_table(r);
  return out;
}

// --------------------------------------------------------------------- vn

JobOutput vn(const Json& spec, const JobOptions& options) {
  const int steps = effective_steps(spec, options);
  const auto problem = parse_vn(spec, "vn", steps);
  const auto conn = parse_connection(require(spec, "connection", "vn"));
  const Matrix ht = vn_tilde_h(conn, problem.rho_in, problem.h);
  const auto r = vn_transport(problem, conn);

  Json outputs;
  outputs["h_tilde"] = matrix_to_json(ht);
  outputs["w_out"] = matrix_to_json(r.w_out);
  outputs["relative_phase"] = complex_json(relative_phase(r.w_in, r.w_out));
  add_holonomy(outputs, r, get_int(spec, "m_max", 3));
  Json diag = transport_diagnostics(r);
  // i w' = h w - w h~ at the end point, by central differences
  const double T = problem.t_out - problem.t_in, hfd = 1e-4 * T;
  const Matrix root = root_of(problem.rho_in);
  auto w_at = [&](double s) { return Matrix(exp_i(problem.h, -s) * root * exp_i(ht, s)); };
  const Matrix wdot = (w_at(T + hfd) - w_at(T - hfd)) / (2 * hfd);
  diag["schroedinger_residual"] = (kI * wdot - (problem.h * r.w_out - r.w_out * ht)).norm();
  if (spec.value("cross_check_ode", false)) {
    TransportOptions topt;
    topt.check_horizontality = false;
    const auto ode = transport_ode(conn, problem.curve(), PurificationVector(root), topt);
    diag["ode_gap"] = (ode.w_out - r.w_out).norm();
  }
  JobOutput out;
  out.report["outputs"] = outputs;
  out.report["diagnostics"] = diag;
  out.table = lift_table(r);
  return out;
}

// --------------------------------------------------------------- holonomy

JobOutput holonomy(const Json& spec, const JobOptions& options) {
  const int m_max = get_int(spec, "m_max", 3);
  JobOutput out;
  Json outputs, diag;
  std::vector<Complex> inv, closed;
  if (spec.contains("w_in")) {
    const Matrix w_in = parse_matrix(spec["w_in"], "w_in");
    const Matrix w_out = parse_matrix(require(spec, "w_out", "holonomy"), "w_out", w_in.rows());
    inv = holonomy_invariants(w_in, w_out, m_max, get_number(spec, "tol", 1e-6));
    outputs["relative_phase"] = complex_json(relative_phase(w_in, w_out));
  } else {
    const int steps = effective_steps(spec, options);
    const auto problem = parse_vn(spec, "holonomy", steps);
    const auto conn = parse_connection(require(spec, "connection", "holonomy"));
    const auto ode = transport_ode(conn, problem.curve(), PurificationVector(root_of(problem.rho_in)));
    inv = holonomy_invariants(ode.w_in, ode.w_out, m_max, get_number(spec, "tol", 1e-6));
    closed = vn_holonomy_closed_form(problem, conn, m_max);
    double gap = 0.0;
    for (std::size_t m = 0; m < inv.size(); ++m) gap = std::max(gap, std::abs(inv[m] - closed[m]));
    outputs["closed_form"] = complex_list(closed);
    outputs["relative_phase"] = complex_json(relative_phase(ode.w_in, ode.w_out));
    diag = transport_diagnostics(ode);
    diag["closed_form_gap"] = gap;
  }
  outputs["invariants"] = complex_list(inv);
  out.report["outputs"] = outputs;
  out.report["diagnostics"] = diag;
  Table table;
  table.header = {"m", "re", "im", "abs", "arg"};
  if (!closed.empty()) table.header.insert(table.header.end(), {"closed_re", "closed_im"});
  for (std::size_t m = 0; m < inv.size(); ++m) {
    std::vector<double> row{static_cast<double>(m + 1), inv[m].real(), inv[m].imag(),
                            std::abs(inv[m]), std::arg(inv[m])};
    if (!closed.empty()) row.insert(row.end(), {closed[m].real(), closed[m].imag()});
    table.rows.push_back(std::move(row));
  }
  out.table = std::move(table);
  return out;
}

// ------------------------------------------------------------------ noise

PureCurve parse_loop(const Json& spec, int steps) {
  const Json& c = require(spec, "loop", "noise");
  const std::string type = require(c, "type", "loop").get<std::string>();
  if (type == "spin_half") return spin_half_loop(get_number(c, "theta", "loop"), steps);
  if (type == "hamiltonian") {
    const Matrix h = parse_matrix(require(c, "h", "loop"), "h");
    if (!is_hermitian(h)) throw NonHermitianInput("loop: h is not Hermitian");
    Eigen::VectorXcd psi0 = parse_vector(require(c, "psi0", "loop"), "psi0");
    if (psi0.size() != h.rows()) throw ValidationError("loop: psi0 and h differ in dimension");
    if (std::abs(psi0.norm() - 1.0) > 1e-12) throw ValidationError("loop: psi0 is not a unit vector");
    PureCurve curve;
    curve.psi = [h, psi0](double t) { return ComplexVector(exp_i(h, -t) * psi0); };
    curve.derivative = [h, psi0](double t) { return ComplexVector(-kI * h * (exp_i(h, -t) * psi0)); };
    curve.t_in = get_number(c, "t_in", 0.0);
    curve.t_out = get_number(c, "t_out", 1.0);
    curve.steps = steps;
    return curve;
  }
  throw ValidationError("loop: \"type\" must be spin_half or hamiltonian");
}

struct NoisePoint {
  double alpha, beta;
};

struct NoiseRow {
  double mu = kNaN, line_factor = kNaN;
  Complex holonomy;
  TransportResult result;
};

std::vector<NoisePoint> sweep_points(const Json& spec) {
  std::vector<NoisePoint> pts;
  if (spec.contains("sweep")) {
    if (!spec["sweep"].is_array() || spec["sweep"].empty())
      throw ParseError("noise: \"sweep\" must be a non-empty array");
    for (const auto& p : spec["sweep"])
      pts.push_back({get_number(p, "alpha", "sweep"), get_number(p, "beta", "sweep")});
  } else if (spec.contains("betas")) {
    const double alpha = get_number(spec, "alpha", 1.0);
    for (const auto& b : spec["betas"]) {
      if (!b.is_number()) throw ParseError("noise: betas must be numbers");
      pts.push_back({alpha, b.get<double>()});
    }
  } else {
    pts.push_back({get_number(spec, "alpha", 1.0), get_number(spec, "beta", "noise")});
  }
  for (const auto& p : pts)
    if (!(p.alpha > 0.0) || !(p.beta >= 0.0))
      throw ValidationError("noise: need alpha > 0 and beta >= 0 at every point");
  return pts;
}

// Runs fn(i) for i in [0, n) on a small pool; the first exception by index wins.
template <typename Fn>
void parallel_for(std::size_t n, unsigned threads, Fn&& fn) {
  if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
  threads = static_cast<unsigned>(std::min<std::size_t>(threads, n));
  std::vector<std::exception_ptr> errors(n);
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i; (i = next.fetch_add(1)) < n;) {
      try {
        fn(i);
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  };
  std::vector<std::thread> pool;
  for (unsigned t = 1; t < threads; ++t) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);
}

JobOutput noise(const Json& spec, const JobOptions& options) {
  const int steps = effective_steps(spec, options);
  const auto conn = parse_connection(require(spec, "connection", "noise"));
  const PureCurve loop = parse_loop(spec, steps);
  std::optional<MetricFunction> k;
  if (spec.contains("metric")) k = parse_metric(spec["metric"]);
  const auto points = sweep_points(spec);
  const auto kappa = noise_kappa(conn);

  std::vector<NoiseRow> rows(points.size());
  parallel_for(points.size(), options.threads, [&](std::size_t i) {
    const auto [alpha, beta] = points[i];
    NoiseRow& row = rows[i];
    row.result = noise_transport(NoiseModel{loop, alpha, beta}, conn);
    row.holonomy = relative_phase(row.result.w_in, row.result.w_out);
    if (beta > 0.0) {
      row.mu = noise_mu(conn, alpha, beta);
      if (k) row.line_factor = noise_line_element(*k, alpha, beta, 1.0);
    }
  });

  Table table;
  table.header = {"alpha", "beta", "mu", "holonomy_re", "holonomy_im", "holonomy_arg",
                  "line_factor", "projection_residual", "horizontality_residual"};
  Json list = Json::array();
  double worst_proj = 0.0, worst_hor = 0.0;
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const auto& r = rows[i];
    table.rows.push_back({points[i].alpha, points[i].beta, r.mu, r.holonomy.real(), r.holonomy.imag(),
                          std::arg(r.holonomy), r.line_factor, r.result.projection_residual,
                          r.result.horizontality_residual});
    list.push_back({{"alpha", points[i].alpha},
                    {"beta", points[i].beta},
                    {"mu", number(r.mu)},
                    {"holonomy", complex_json(r.holonomy)},
                    {"line_factor", number(r.line_factor)}});
    worst_proj = std::max(worst_proj, r.result.projection_residual);
    if (!std::isnan(r.result.horizontality_residual))
      worst_hor = std::max(worst_hor, r.result.horizontality_residual);
  }
  JobOutput out;
  out.report["outputs"] = {{"kappa", kappa ? Json(*kappa) : Json(nullptr)}, {"points", list}};
  out.report["diagnostics"] = {{"steps", rows.front().result.t.size() - 1},
                               {"projection_residual", worst_proj},
                               {"horizontality_residual", worst_hor}};
  out.table = std::move(table);
  return out;
}

// --------------------------------------------------------------- selftest

JobOutput selftest(const Json&, const JobOptions&) {
  const auto results = acceptance::run_all();
  Json list = Json::array();
  Table table;
  table.header = {"criterion", "pass", "measured", "tolerance"};
  int failures = 0;
  for (const auto& r : results) {
    list.push_back({{"id", r.id},
                    {"name", r.name},
                    {"pass", r.pass},
                    {"measured", number(r.measured)},
                    {"tolerance", r.tolerance},
                    {"detail", r.detail}});
    table.rows.push_back({static_cast<double>(r.id), r.pass ? 1.0 : 0.0, r.measured, r.tolerance});
    if (!r.pass) ++failures;
  }
  JobOutput out;
  out.report["outputs"] = {{"criteria", list}, {"failures", failures}};
  out.report["diagnostics"] = {{"criteria_run", results.size()}};
  out.table = std::move(table);
  out.exit_code = failures == 0 ? 0 : 1;
  return out;
}

}  // namespace

const std::vector<std::string>& command_names() {
  static const std::vector<std::string> names = {"convert", "metric", "transport", "vn",
                                                 "holonomy", "noise", "selftest"};
  return names;
}

JobOutput run_job(const std::string& command, const Json& spec, const JobOptions& options) {
  if (!spec.is_object()) throw ParseError("spec must be a JSON object");
  if (spec.contains("command") && spec["command"] != command)
    throw ValidationError("spec is for command '" + spec["command"].dump() + "', not '" + command + "'");
  JobOutput out;
  if (command == "convert") out = convert(spec, options);
  else if (command == "metric") out = metric(spec, options);
  else if (command == "transport") out = transport(spec, options);
  else if (command == "vn") out = vn(spec, options);
  else if (command == "holonomy") out = holonomy(spec, options);
  else if (command == "noise") out = noise(spec, options);
  else if (command == "selftest") out = selftest(spec, options);
  else throw ValidationError("unknown command '" + command + "'");

  Json report;
  report["command"] = command;
  report["status"] = out.exit_code == 0 ? "ok" : "failed";
  report["inputs"] = {{"spec", spec}, {"options", options_json(spec, options)}};
  report["outputs"] = out.report["outputs"];
  report["diagnostics"] = out.report["diagnostics"];
  out.report = std::move(report);
  return out;
}

int exit_code_for(const std::exception& e) {
  if (const auto* err = dynamic_cast<const Error*>(&e))
    return err->kind() == ErrorKind::Validation ? 1 : 2;
  if (dynamic_cast<const nlohmann::json::exception*>(&e)) return 1;
  return 2;
}

std::string error_type(const std::exception& e) {
#define PURGEOM_NAME(T) \
  if (dynamic_cast<const T*>(&e)) return #T;
  PURGEOM_NAME(NonHermitianInput)
  PURGEOM_NAME(MissingBoundaryValue)
  PURGEOM_NAME(UnsolvableSupport)
  PURGEOM_NAME(BasePointMismatch)
  PURGEOM_NAME(NotSelftransposed)
  PURGEOM_NAME(ExceedsBuresBound)
  PURGEOM_NAME(NotCyclic)
  PURGEOM_NAME(PureLimitUndefined)
  PURGEOM_NAME(ParseError)
  PURGEOM_NAME(ValidationError)
  PURGEOM_NAME(DomainError)
  PURGEOM_NAME(RankDeficient)
  PURGEOM_NAME(RankChanged)
  PURGEOM_NAME(StepTooLarge)
#undef PURGEOM_NAME
  if (dynamic_cast<const nlohmann::json::exception*>(&e)) return "ParseError";
  return "InternalError";
}

Json error_report(const std::string& command, const std::exception& e) {
  const int code = exit_code_for(e);
  return Json{{"command", command},
              {"status", "error"},
              {"error",
               {{"kind", code == 1 ? "validation" : "numerical"},
                {"type", error_type(e)},
                {"message", e.what()}}}};
}

}  // namespace purgeom::cli
