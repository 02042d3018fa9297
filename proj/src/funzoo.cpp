#include "purgeom/funzoo.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <limits>
#include <string>

#include "purgeom/errors.hpp"

namespace purgeom {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// |t - 1| below which tau is evaluated from a local expansion instead of the
// cancelling quotient.
constexpr double kTauGuard = 1e-3;
constexpr double kTauStep = 2e-3;

double scale_of(double value) { return std::max(1.0, std::abs(value)); }

std::optional<double> map_boundary(const std::optional<double>& v, double (*fn)(double)) {
  if (!v) return std::nullopt;
  return fn(*v);
}

}  // namespace

Grid Grid::log_uniform(double lo, double hi, int n) {
  if (!(lo > 0.0) || !(hi > lo) || n < 2) throw ValidationError("Grid: need 0 < lo < hi and n >= 2");
  Grid g;
  g.points.reserve(static_cast<std::size_t>(n));
  const double a = std::log(lo), b = std::log(hi);
  for (int i = 0; i < n; ++i) g.points.push_back(std::exp(a + (b - a) * i / (n - 1)));
  return g;
}

void RadonMeasureSpec::validate() const {
  if (atoms.empty()) throw ValidationError("RadonMeasureSpec: no atoms");
  double total = 0.0;
  for (const auto& a : atoms) {
    if (!(a.x >= 0.0 && a.x <= 1.0)) throw ValidationError("RadonMeasureSpec: atom outside [0, 1]");
    if (!(a.weight > 0.0)) throw ValidationError("RadonMeasureSpec: weights must be positive");
    total += a.weight;
  }
  if (std::abs(total - 1.0) > 1e-12)
    throw ValidationError("RadonMeasureSpec: weights sum to " + std::to_string(total) + ", not 1");
}

// ---------------------------------------------------------------------------
// Invariant checks

double antisymmetry_defect(const ScalarFunction& F, const Grid& grid) {
  double worst = 0.0;
  for (double t : grid.points) worst = std::max(worst, std::abs(F(t) + F(1.0 / t)));
  return worst;
}

double complement_defect(const ScalarFunction& r, const Grid& grid) {
  double worst = 0.0;
  for (double t : grid.points) worst = std::max(worst, std::abs(r(t) + r(1.0 / t) - 1.0));
  return worst;
}

double selftransposed_defect(const ScalarFunction& f, const Grid& grid) {
  double worst = 0.0;
  for (double t : grid.points) {
    const double ft = f(t);
    worst = std::max(worst, std::abs(ft - t * f(1.0 / t)) / scale_of(ft));
  }
  return worst;
}

double bures_bound_excess(const ScalarFunction& f, const Grid& grid) {
  double worst = -kInf;
  for (double t : grid.points) worst = std::max(worst, (f(t) - 0.5 * (1.0 + t)) / scale_of(t));
  return worst;
}

double min_value(const ScalarFunction& f, const Grid& grid) {
  double lowest = kInf;
  for (double t : grid.points) lowest = std::min(lowest, f(t));
  return lowest;
}

double max_abs_difference(const ScalarFunction& a, const ScalarFunction& b, const Grid& grid) {
  double worst = 0.0;
  for (double t : grid.points) worst = std::max(worst, std::abs(a(t) - b(t)));
  return worst;
}

void validate(const ConnectionFunction& conn, const Grid& grid, double tol,
              bool metric_compatible) {
  if (std::abs(conn.F(1.0)) > tol) throw ValidationError("ConnectionFunction: F(1) != 0");
  if (antisymmetry_defect(conn.F, grid) > tol)
    throw ValidationError("ConnectionFunction: F(t) + F(1/t) != 0");
  if (metric_compatible) {
    for (double t : grid.points) {
      const double v = conn.F(t);
      if (!(v > -1.0 && v < 1.0))
        throw ValidationError("ConnectionFunction: -1 < F(t) < 1 violated at t = " +
                              std::to_string(t));
    }
  }
}

void validate(const RFunction& r, const Grid& grid, double tol) {
  if (std::abs(r.r(1.0) - 0.5) > tol) throw ValidationError("RFunction: r(1) != 1/2");
  if (complement_defect(r.r, grid) > tol) throw ValidationError("RFunction: r(t) + r(1/t) != 1");
}

void validate(const MetricFunction& k, const Grid& grid) {
  if (!(min_value(k.k, grid) > 0.0)) throw ValidationError("MetricFunction: k must be positive");
}

void validate(const MonotoneFunction& f, const Grid& grid, double tol) {
  if (std::abs(f.f(1.0) - 1.0) > tol) throw ValidationError("MonotoneFunction: f(1) != 1");
  if (!(min_value(f.f, grid) > 0.0)) throw ValidationError("MonotoneFunction: f must be positive");
  if (f.selftransposed) {
    if (selftransposed_defect(f.f, grid) > tol)
      throw NotSelftransposed("MonotoneFunction: f(t) != t f(1/t)");
    if (bures_bound_excess(f.f, grid) > tol)
      throw ExceedsBuresBound("MonotoneFunction: f(t) > (1+t)/2");
  }
}

// ---------------------------------------------------------------------------
// Conversions

RFunction r_from_F(const ConnectionFunction& conn) {
  const ScalarFunction F = conn.F;
  auto half = [](double v) { return 0.5 * (1.0 + v); };
  BoundaryValues b{map_boundary(F.boundary().at_zero, +half),
                   map_boundary(F.boundary().at_infinity, +half)};
  return {ScalarFunction([F](double t) { return 0.5 * (1.0 + F(t)); }, b, "r[" + F.label() + "]")};
}

ConnectionFunction F_from_r(const RFunction& rf) {
  const ScalarFunction r = rf.r;
  auto twice = [](double v) { return 2.0 * v - 1.0; };
  BoundaryValues b{map_boundary(r.boundary().at_zero, +twice),
                   map_boundary(r.boundary().at_infinity, +twice)};
  return {ScalarFunction([r](double t) { return 2.0 * r(t) - 1.0; }, b, "F[" + r.label() + "]")};
}

std::pair<RFunction, ConnectionFunction> rF_from_k(const MetricFunction& metric) {
  const ScalarFunction k = metric.k;
  RFunction r{ScalarFunction(
      [k](double t) {
        const double tk = t * k(1.0 / t);
        return tk / (k(t) + tk);
      },
      {}, "r[k=" + k.label() + "]")};
  ConnectionFunction F{ScalarFunction(
      [k](double t) {
        const double tk = t * k(1.0 / t), kt = k(t);
        return (tk - kt) / (tk + kt);
      },
      {}, "F[k=" + k.label() + "]")};
  return {r, F};
}

MetricFunction k_family_from_F(const ConnectionFunction& conn, const ScalarFunction& q) {
  const ScalarFunction F = conn.F;
  return {ScalarFunction([F, q](double t) { return std::sqrt(t) * (1.0 - F(t)) * q(t); }, {},
                         "k[F=" + F.label() + ",q=" + q.label() + "]")};
}

MonotoneFunction f_from_k(const MetricFunction& metric) {
  const ScalarFunction k = metric.k;
  return {ScalarFunction(
              [k](double t) {
                const double kt = k(t), s = kt + t * k(1.0 / t);
                return s * s / (4.0 * kt);
              },
              {}, "f[k=" + k.label() + "]"),
          false};
}

MetricFunction k_from_f(const MonotoneFunction& mf) {
  const ScalarFunction f = mf.f;
  return {ScalarFunction(
      [f](double t) {
        const double ft = f(t), fi = f(1.0 / t), s = ft + t * fi;
        return 4.0 * t * t * ft * fi * fi / (s * s);
      },
      {}, "k[f=" + f.label() + "]")};
}

std::pair<RFunction, ConnectionFunction> rF_from_f(const MonotoneFunction& mf) {
  const ScalarFunction f = mf.f;
  RFunction r{ScalarFunction(
      [f](double t) {
        const double ft = f(t);
        return ft / (ft + t * f(1.0 / t));
      },
      {}, "r[f=" + f.label() + "]")};
  ConnectionFunction F{ScalarFunction(
      [f](double t) {
        const double ft = f(t), tf = t * f(1.0 / t);
        return (ft - tf) / (ft + tf);
      },
      {}, "F[f=" + f.label() + "]")};
  return {r, F};
}

MonotoneFunction fs_from_k(const MetricFunction& metric) {
  const ScalarFunction k = metric.k;
  return {ScalarFunction([k](double t) { return 0.5 * (k(t) + t * k(1.0 / t)); }, {},
                         "fs[k=" + k.label() + "]"),
          true};
}

double hs_defect(const MetricFunction& metric, const Grid& grid) {
  double worst = 0.0;
  for (double t : grid.points) {
    const double kt = metric.k(t), ki = metric.k(1.0 / t);
    const double lhs = kt + t * ki, rhs = kt * kt + t * ki * ki;
    worst = std::max(worst, std::abs(lhs - rhs) / scale_of(lhs));
  }
  return worst;
}

bool check_HS(const MetricFunction& metric, const Grid& grid, double tol) {
  return hs_defect(metric, grid) <= tol;
}

MetricFunction k_from_F_HS(const ConnectionFunction& conn) {
  const ScalarFunction F = conn.F;
  return {ScalarFunction(
      [F](double t) {
        const double p = 1.0 + F(t), m = 1.0 - F(t);
        return 2.0 * t * m / (p * p + t * m * m);
      },
      {}, "k_HS[F=" + F.label() + "]")};
}

MonotoneFunction fs_from_F_HS(const ConnectionFunction& conn) {
  const ScalarFunction F = conn.F;
  return {ScalarFunction(
              [F](double t) {
                const double p = 1.0 + F(t), m = 1.0 - F(t);
                return 2.0 * t / (p * p + t * m * m);
              },
              {}, "fs_HS[F=" + F.label() + "]"),
          true};
}

namespace {

// ((1+t)/2 - f_s(t)) / (t-1)^2, clamping rounding noise below zero.
double tau_squared_quotient(const ScalarFunction& fs, double t) {
  double radicand = 0.5 * (1.0 + t) - fs(t);
  if (radicand < 0.0) {
    if (radicand < -1e-10 * scale_of(t))
      throw ExceedsBuresBound("hs_solve: f_s(" + std::to_string(t) + ") > (1+t)/2");
    radicand = 0.0;
  }
  const double d = t - 1.0;
  return radicand / (d * d);
}

double tau_of(const ScalarFunction& fs, double t) {
  const double d = t - 1.0;
  if (std::abs(d) >= kTauGuard) return std::sqrt(tau_squared_quotient(fs, t));
  // Near t = 1 the quotient is analytic: cubic Taylor polynomial with
  // Richardson-extrapolated coefficients from samples at distance h, h/2.
  auto sym = [&](double h) {
    return 0.5 * (tau_squared_quotient(fs, 1.0 + h) + tau_squared_quotient(fs, 1.0 - h));
  };
  auto anti = [&](double h) {
    return (tau_squared_quotient(fs, 1.0 + h) - tau_squared_quotient(fs, 1.0 - h)) / (2.0 * h);
  };
  const double h = kTauStep;
  const double s1 = sym(h), s2 = sym(0.5 * h), a1 = anti(h), a2 = anti(0.5 * h);
  const double q0 = (4.0 * s2 - s1) / 3.0;
  const double q1 = (4.0 * a2 - a1) / 3.0;
  const double q2 = (s1 - s2) / (0.75 * h * h);
  const double q3 = (a1 - a2) / (0.75 * h * h);
  return std::sqrt(std::max(0.0, q0 + d * (q1 + d * (q2 + d * q3))));
}

}  // namespace

HSsolution hs_solve(const MonotoneFunction& mf, const Grid& grid) {
  const ScalarFunction fs = mf.f;
  constexpr double kTol = 1e-10;
  if (std::abs(fs(1.0) - 1.0) > kTol) throw ValidationError("hs_solve: f_s(1) != 1");
  if (selftransposed_defect(fs, grid) > kTol)
    throw NotSelftransposed("hs_solve: f_s(t) != t f_s(1/t)");
  if (bures_bound_excess(fs, grid) > kTol) throw ExceedsBuresBound("hs_solve: f_s(t) > (1+t)/2");
  for (double t : grid.points) {
    if (!(fs(t) > 0.0)) throw ValidationError("hs_solve: f_s must be positive");
  }

  ScalarFunction tau([fs](double t) { return tau_of(fs, t); }, {}, "tau[" + fs.label() + "]");
  MetricFunction k{ScalarFunction(
      [fs, tau](double t) {
        const double f = fs(t);
        return 2.0 * f / (1.0 + t) * (1.0 + (t - 1.0) * tau(t) / std::sqrt(fs(1.0 / t)));
      },
      {}, "k_HS[" + fs.label() + "]")};
  ConnectionFunction F{ScalarFunction(
      [fs, tau](double t) {
        return (t - 1.0) / (t + 1.0) * (1.0 - 2.0 * tau(t) / std::sqrt(fs(1.0 / t)));
      },
      {}, "F_HS[" + fs.label() + "]")};
  return {tau, k, F};
}

ConnectionFunction hs_opposite_root(const HSsolution& solution, const MonotoneFunction& mf) {
  const ScalarFunction fs = mf.f, tau = solution.tau;
  return {ScalarFunction(
      [fs, tau](double t) {
        return (t - 1.0) / (t + 1.0) * (1.0 + 2.0 * tau(t) / std::sqrt(fs(1.0 / t)));
      },
      {}, "F_HS-[" + fs.label() + "]")};
}

MonotoneFunction fs_from_measure(const RadonMeasureSpec& measure) {
  measure.validate();
  double at_zero = 0.0, at_inf = 0.0;
  bool infinite = false;
  for (const auto& a : measure.atoms) {
    if (a.x == 0.0) {
      at_zero += 0.5 * a.weight;
      infinite = true;
    } else {
      at_inf += a.weight * 0.5 * (1.0 + a.x) * (1.0 + 1.0 / a.x);
    }
  }
  auto atoms = measure.atoms;
  ScalarFunction f(
      [atoms](double t) {
        double sum = 0.0;
        for (const auto& a : atoms) {
          if (a.x == 0.0) {
            sum += a.weight * 0.5 * (1.0 + t);
          } else {
            sum += a.weight * 0.5 * (1.0 + a.x) * (t / (t + a.x) + t / (t * a.x + 1.0));
          }
        }
        return sum;
      },
      {at_zero, infinite ? kInf : at_inf}, "measure");
  return {f, true};
}

// ---------------------------------------------------------------------------
// Catalog

namespace {

double parse_number(std::string_view text, std::string_view context) {
  double value = 0.0;
  const auto* begin = text.data();
  const auto* end = text.data() + text.size();
  while (begin < end && *begin == ' ') ++begin;
  while (end > begin && *(end - 1) == ' ') --end;
  const auto [ptr, ec] = std::from_chars(begin, end, value);
  if (ec != std::errc() || ptr != end)
    throw ValidationError("catalog: cannot parse number '" + std::string(text) + "' in " +
                          std::string(context));
  return value;
}

// "name(args)" -> args, or nullopt when `name` does not match.
std::optional<std::string_view> call_args(std::string_view text, std::string_view name) {
  if (text.size() < name.size() + 2 || text.substr(0, name.size()) != name) return std::nullopt;
  if (text[name.size()] != '(' || text.back() != ')') return std::nullopt;
  return text.substr(name.size() + 1, text.size() - name.size() - 2);
}

RadonMeasureSpec parse_measure(std::string_view args) {
  RadonMeasureSpec m;
  while (!args.empty()) {
    const auto comma = args.find(',');
    const std::string_view item = args.substr(0, comma);
    const auto colon = item.find(':');
    if (colon == std::string_view::npos)
      throw ValidationError("catalog: measure atoms are written x:weight");
    m.atoms.push_back({parse_number(item.substr(0, colon), "measure"),
                       parse_number(item.substr(colon + 1), "measure")});
    if (comma == std::string_view::npos) break;
    args.remove_prefix(comma + 1);
  }
  return m;
}

ScalarFunction power_connection(double s) {
  const double lim = s > 0 ? -1.0 : (s < 0 ? 1.0 : 0.0);
  return ScalarFunction(
      [s](double t) {
        const double ts = std::pow(t, s);
        return (ts - 1.0) / (ts + 1.0);
      },
      {lim, -lim}, "power(" + std::to_string(s) + ")");
}

}  // namespace

MonotoneFunction monotone_catalog(std::string_view name) {
  if (name == "bures")
    return {ScalarFunction([](double t) { return 0.5 * (1.0 + t); }, {0.5, kInf}, "bures"), true};
  if (name == "canonical")
    return {ScalarFunction([](double t) { return 2.0 * t / (1.0 + t); }, {0.0, 2.0}, "canonical"),
            true};
  if (name == "wigner_yanase")
    return {ScalarFunction(
                [](double t) {
                  const double s = 0.5 * (1.0 + std::sqrt(t));
                  return s * s;
                },
                {0.25, kInf}, "wigner_yanase"),
            true};
  if (name == "kubo_mori")
    return {ScalarFunction(
                [](double t) {
                  const double u = t - 1.0;
                  if (std::abs(u) < 1e-5) return 1.0 + u / 2.0 - u * u / 12.0;
                  return u / std::log(t);
                },
                {0.0, kInf}, "kubo_mori"),
            true};
  if (auto args = call_args(name, "measure")) {
    auto f = fs_from_measure(parse_measure(*args));
    f.f = f.f.with_label(std::string(name));
    return f;
  }
  throw ValidationError("catalog: unknown monotone function '" + std::string(name) + "'");
}

ConnectionFunction connection_catalog(std::string_view name) {
  if (name == "bures" || name == "geo") {
    auto F = ScalarFunction([](double t) { return (t - 1.0) / (t + 1.0); }, {-1.0, 1.0}, "bures");
    return {F, true};
  }
  if (name == "canonical" || name == "can")
    return {ScalarFunction([](double) { return 0.0; }, {0.0, 0.0}, "canonical")};
  if (name == "global_section")
    return {ScalarFunction(
        [](double t) {
          const double s = std::sqrt(t);
          return -(1.0 - s) / (1.0 + s);
        },
        {-1.0, 1.0}, "global_section")};
  if (auto args = call_args(name, "power")) {
    const double s = parse_number(*args, "power");
    return {power_connection(s), s == 1.0};
  }
  throw ValidationError("catalog: unknown connection function '" + std::string(name) + "'");
}

MetricFunction metric_catalog(std::string_view name) {
  if (name == "hs" || name == "bures") return {ScalarFunction::constant(1.0).with_label("hs")};
  if (name == "canonical")
    return {ScalarFunction([](double t) { return 2.0 * t / (1.0 + t); }, {0.0, 2.0}, "canonical")};
  if (name == "sqrt")
    return {ScalarFunction([](double t) { return std::sqrt(t); }, {0.0, kInf}, "sqrt")};
  if (auto args = call_args(name, "power")) {
    const double s = parse_number(*args, "power");
    BoundaryValues b{s > 0 ? 0.0 : (s < 0 ? kInf : 1.0), s > 0 ? kInf : (s < 0 ? 0.0 : 1.0)};
    return {ScalarFunction([s](double t) { return std::pow(t, s); }, b, std::string(name))};
  }
  if (auto args = call_args(name, "constant")) {
    const double c = parse_number(*args, "constant");
    if (!(c > 0.0)) throw ValidationError("catalog: constant metric function must be positive");
    return {ScalarFunction::constant(c)};
  }
  return hs_solve(monotone_catalog(name)).k;
}

std::vector<std::string> monotone_catalog_names() {
  return {"bures", "canonical", "wigner_yanase", "kubo_mori", "measure(x:m,...)"};
}

std::vector<std::string> connection_catalog_names() {
  return {"bures", "canonical", "global_section", "power(s)"};
}

}  // namespace purgeom
