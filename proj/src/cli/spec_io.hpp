#pragma once

// JSON job specs in, CSV tables out.

#include <iosfwd>
#include <string>
#include <vector>

#include <json.hpp>

#include "purgeom/funzoo.hpp"

namespace purgeom::cli {

using Json = nlohmann::ordered_json;

/// {"re": [[..]], "im": [[..]]}; "im" may be omitted. A bare nested array is
/// read as the real part. Throws ParseError.
Matrix parse_matrix(const Json& j, const std::string& what, Eigen::Index expect_dim = -1);
Json matrix_to_json(const Matrix& m);

Eigen::VectorXcd parse_vector(const Json& j, const std::string& what);

/// Catalog name, or {"table": [[t, v], ...], "at_zero": v, "at_infinity": v}.
/// Tables are interpolated monotone-cubically in log t and refuse to
/// extrapolate.
ScalarFunction parse_function(const Json& j, const std::string& what);

ConnectionFunction parse_connection(const Json& j);
MetricFunction parse_metric(const Json& j);
MonotoneFunction parse_monotone(const Json& j);

/// "lo,hi,n".
Grid parse_grid_arg(const std::string& arg);
Grid parse_grid(const Json& j);

double get_number(const Json& j, const char* key, const std::string& what);
double get_number(const Json& j, const char* key, double fallback);
int get_int(const Json& j, const char* key, int fallback);

struct Table {
  std::vector<std::string> header;
  std::vector<std::vector<double>> rows;

  void write_csv(std::ostream& out) const;
};

/// Column names for a flattened n x n complex matrix: prefix_re_j_k, prefix_im_j_k.
std::vector<std::string> matrix_columns(const std::string& prefix, Eigen::Index n);
void append_matrix(std::vector<double>& row, const Matrix& m);

/// Fixed-format number; keeps reports byte-stable.
std::string format_double(double x);

}  // namespace purgeom::cli
