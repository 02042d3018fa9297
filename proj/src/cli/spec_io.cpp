#include "spec_io.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <limits>
#include <ostream>

// pchip.hpp in Boost 1.74 calls isnan unqualified
#include <boost/math/special_functions/fpclassify.hpp>
#include <boost/math/interpolators/pchip.hpp>

#include "purgeom/errors.hpp"

namespace purgeom::cli {

namespace {

double as_double(const Json& j, const std::string& what) {
  if (j.is_number()) return j.get<double>();
  if (j.is_string()) {
    const auto s = j.get<std::string>();
    if (s == "inf" || s == "+inf") return std::numeric_limits<double>::infinity();
    if (s == "-inf") return -std::numeric_limits<double>::infinity();
  }
  throw ParseError(what + ": expected a number");
}

std::vector<std::vector<double>> as_rows(const Json& j, const std::string& what) {
  if (!j.is_array() || j.empty()) throw ParseError(what + ": expected a non-empty nested array");
  std::vector<std::vector<double>> rows;
  for (const auto& row : j) {
    if (!row.is_array()) throw ParseError(what + ": rows must be arrays");
    std::vector<double> r;
    for (const auto& x : row) r.push_back(as_double(x, what));
    if (!rows.empty() && r.size() != rows.front().size())
      throw ParseError(what + ": ragged rows");
    rows.push_back(std::move(r));
  }
  return rows;
}

ScalarFunction tabulated(const Json& j, const std::string& what) {
  if (!j.contains("table")) throw ParseError(what + ": object needs a \"table\"");
  if (!j.contains("at_zero") || !j.contains("at_infinity"))
    throw MissingBoundaryValue(what + ": tabulated functions need explicit at_zero and at_infinity");
  const auto rows = as_rows(j["table"], what + ".table");
  if (rows.front().size() != 2) throw ParseError(what + ".table: entries are [t, value] pairs");
  if (rows.size() < 4) throw ValidationError(what + ".table: need at least four points");
  std::vector<double> x, y;
  for (const auto& r : rows) {
    if (!(r[0] > 0.0) || !std::isfinite(r[0]) || !std::isfinite(r[1]))
      throw ValidationError(what + ".table: t must be positive and values finite");
    if (!x.empty() && !(std::log(r[0]) > x.back()))
      throw ValidationError(what + ".table: t must be strictly increasing");
    x.push_back(std::log(r[0]));
    y.push_back(r[1]);
  }
  const double lo = x.front(), hi = x.back();
  const double t_lo = rows.front()[0], t_hi = rows.back()[0];
  auto spline = std::make_shared<boost::math::interpolators::pchip<std::vector<double>>>(
      std::move(x), std::move(y));
  BoundaryValues b{as_double(j["at_zero"], what + ".at_zero"),
                   as_double(j["at_infinity"], what + ".at_infinity")};
  auto fn = [spline, lo, hi, t_lo, t_hi, what](double t) {
    const double u = std::log(t);
    // tolerate rounding at the table ends
    const double slack = 1e-12 * std::max(1.0, std::max(std::abs(lo), std::abs(hi)));
    if (u < lo - slack || u > hi + slack) {
      char buf[160];
      std::snprintf(buf, sizeof buf, ": t = %.6g lies outside the table [%.6g, %.6g]", t, t_lo,
                    t_hi);
      throw ValidationError(what + buf);
    }
    return (*spline)(std::clamp(u, lo, hi));
  };
  return ScalarFunction(fn, b, j.value("label", std::string("table")));
}

}  // namespace

Matrix parse_matrix(const Json& j, const std::string& what, Eigen::Index expect_dim) {
  std::vector<std::vector<double>> re, im;
  if (j.is_object()) {
    if (!j.contains("re")) throw ParseError(what + ": matrix object needs \"re\"");
    re = as_rows(j["re"], what + ".re");
    if (j.contains("im")) im = as_rows(j["im"], what + ".im");
  } else {
    re = as_rows(j, what);
  }
  const auto n = static_cast<Eigen::Index>(re.size());
  if (static_cast<Eigen::Index>(re.front().size()) != n) throw ParseError(what + ": matrix is not square");
  if (!im.empty() && (im.size() != re.size() || im.front().size() != re.front().size()))
    throw ParseError(what + ": re and im differ in shape");
  if (expect_dim >= 0 && n != expect_dim)
    throw ValidationError(what + ": expected dimension " + std::to_string(expect_dim) + ", got " +
                          std::to_string(n));
  Matrix m(n, n);
  for (Eigen::Index r = 0; r < n; ++r)
    for (Eigen::Index c = 0; c < n; ++c)
      m(r, c) = Complex(re[static_cast<std::size_t>(r)][static_cast<std::size_t>(c)],
                        im.empty() ? 0.0 : im[static_cast<std::size_t>(r)][static_cast<std::size_t>(c)]);
  return m;
}

Json matrix_to_json(const Matrix& m) {
  Json re = Json::array(), im = Json::array();
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    Json rr = Json::array(), ii = Json::array();
    for (Eigen::Index c = 0; c < m.cols(); ++c) {
      rr.push_back(m(r, c).real());
      ii.push_back(m(r, c).imag());
    }
    re.push_back(rr);
    im.push_back(ii);
  }
  return Json{{"re", re}, {"im", im}};
}

Eigen::VectorXcd parse_vector(const Json& j, const std::string& what) {
  std::vector<double> re, im;
  auto read = [&](const Json& a, std::vector<double>& out, const std::string& w) {
    if (!a.is_array() || a.empty()) throw ParseError(w + ": expected a non-empty array");
    for (const auto& x : a) out.push_back(as_double(x, w));
  };
  if (j.is_object()) {
    if (!j.contains("re")) throw ParseError(what + ": vector object needs \"re\"");
    read(j["re"], re, what + ".re");
    if (j.contains("im")) read(j["im"], im, what + ".im");
  } else {
    read(j, re, what);
  }
  if (!im.empty() && im.size() != re.size()) throw ParseError(what + ": re and im differ in length");
  Eigen::VectorXcd v(static_cast<Eigen::Index>(re.size()));
  for (std::size_t i = 0; i < re.size(); ++i)
    v(static_cast<Eigen::Index>(i)) = Complex(re[i], im.empty() ? 0.0 : im[i]);
  return v;
}

ScalarFunction parse_function(const Json& j, const std::string& what) {
  if (j.is_object()) return tabulated(j, what);
  throw ParseError(what + ": expected a catalog name or a table");
}

ConnectionFunction parse_connection(const Json& j) {
  if (j.is_string()) return connection_catalog(j.get<std::string>());
  ConnectionFunction c{parse_function(j, "connection")};
  c.bures = false;
  validate(c, Grid::log_uniform(), 1e-9);
  return c;
}

MetricFunction parse_metric(const Json& j) {
  if (j.is_string()) return metric_catalog(j.get<std::string>());
  MetricFunction k{parse_function(j, "metric")};
  validate(k, Grid::log_uniform());
  return k;
}

MonotoneFunction parse_monotone(const Json& j) {
  if (j.is_string()) return monotone_catalog(j.get<std::string>());
  MonotoneFunction f{parse_function(j, "monotone"), false};
  f.selftransposed = selftransposed_defect(f.f, Grid::log_uniform()) < 1e-9;
  return f;
}

Grid parse_grid_arg(const std::string& arg) {
  double v[3];
  std::size_t pos = 0;
  for (int i = 0; i < 3; ++i) {
    const std::size_t end = i < 2 ? arg.find(',', pos) : arg.size();
    if (end == std::string::npos) throw ParseError("--grid: expected lo,hi,n");
    const char* first = arg.data() + pos;
    const char* last = arg.data() + end;
    const auto res = std::from_chars(first, last, v[i]);
    if (res.ec != std::errc() || res.ptr != last) throw ParseError("--grid: bad number in '" + arg + "'");
    pos = end + 1;
  }
  if (v[2] != std::floor(v[2])) throw ParseError("--grid: n must be an integer");
  return Grid::log_uniform(v[0], v[1], static_cast<int>(v[2]));
}

Grid parse_grid(const Json& j) {
  if (j.is_string()) return parse_grid_arg(j.get<std::string>());
  return Grid::log_uniform(get_number(j, "lo", 1e-3), get_number(j, "hi", 1e3), get_int(j, "n", 200));
}

double get_number(const Json& j, const char* key, const std::string& what) {
  if (!j.contains(key)) throw ParseError(what + ": missing \"" + key + "\"");
  return as_double(j[key], what + "." + key);
}

double get_number(const Json& j, const char* key, double fallback) {
  return j.contains(key) ? as_double(j[key], key) : fallback;
}

int get_int(const Json& j, const char* key, int fallback) {
  if (!j.contains(key)) return fallback;
  if (!j[key].is_number_integer()) throw ParseError(std::string(key) + ": expected an integer");
  return j[key].get<int>();
}

void Table::write_csv(std::ostream& out) const {
  for (std::size_t i = 0; i < header.size(); ++i) out << (i ? "," : "") << header[i];
  out << '\n';
  for (const auto& row : rows) {
    for (std::size_t i = 0; i < row.size(); ++i) out << (i ? "," : "") << format_double(row[i]);
    out << '\n';
  }
}

std::vector<std::string> matrix_columns(const std::string& prefix, Eigen::Index n) {
  std::vector<std::string> out;
  for (Eigen::Index r = 0; r < n; ++r)
    for (Eigen::Index c = 0; c < n; ++c) {
      const std::string idx = std::to_string(r) + "_" + std::to_string(c);
      out.push_back(prefix + "_re_" + idx);
      out.push_back(prefix + "_im_" + idx);
    }
  return out;
}

void append_matrix(std::vector<double>& row, const Matrix& m) {
  for (Eigen::Index r = 0; r < m.rows(); ++r)
    for (Eigen::Index c = 0; c < m.cols(); ++c) {
      row.push_back(m(r, c).real());
      row.push_back(m(r, c).imag());
    }
}

std::string format_double(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", x == 0.0 ? 0.0 : x);
  return buf;
}

}  // namespace purgeom::cli
