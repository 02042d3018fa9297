#pragma once

// Reference computations for the tests. They avoid the library's spectral
// frames: superoperators are built as dense n^2 x n^2 Kronecker matrices,
// exponentials come from a power series and linear equations from
// least-squares solves.

#include <complex>
#include <cstdint>
#include <functional>
#include <random>
#include <vector>

#include <Eigen/Dense>

namespace oracle {

using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;

class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}
  double normal() { return normal_(engine_); }
  double uniform(double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(engine_); }
  Matrix gaussian(int n, int m);
  Matrix hermitian(int n);
  Matrix anti_hermitian(int n);
  Matrix unitary(int n);
  Matrix invertible(int n);                    // well-conditioned
  Matrix density(int n, int rank = -1);        // trace one; rank n by default
  Matrix diagonal_density(int n);

 private:
  std::mt19937_64 engine_;
  std::normal_distribution<double> normal_{0.0, 1.0};
};

Vector vec(const Matrix& x);
Matrix unvec(const Vector& v, int n);

// vec(a x) and vec(x b) as n^2 x n^2 matrices.
Matrix left_mult(const Matrix& a);
Matrix right_mult(const Matrix& b);

/// f applied to a diagonalizable superoperator through a general complex
/// eigensolver; eigenvalues are taken as real.
Matrix superop_function(const std::function<double(double)>& f, const Matrix& s);

/// L_{ww*} R_{w*w}^{-1}, for invertible w.
Matrix modular_operator(const Matrix& w);
/// L_rho R_rho^{-1}, for invertible rho.
Matrix ratio_operator(const Matrix& rho);

Matrix exp_series(const Matrix& a);

/// Minimal-norm solution of rho g + g rho = xi.
Matrix sylvester_dense(const Matrix& rho, const Matrix& xi);

/// Square root of a PSD matrix via Denman-Beavers iteration.
Matrix sqrt_denman_beavers(const Matrix& a);

/// con04 with dense superoperators, for invertible w.
Matrix connection_dense(const std::function<double(double)>& F, const Matrix& w, const Matrix& x);

/// 1/2 Tr xi2 (L + R)^-1 xi1 through sylvester_dense.
double bures_dense(const Matrix& rho, const Matrix& xi1, const Matrix& xi2);

/// 4th-order central difference of a matrix-valued function.
Matrix derivative(const std::function<Matrix(double)>& f, double t, double h);

/// RK4 for c' = -<psi, psi'> c, c(t0) = 1; returns c(t1).
Complex berry_factor(const std::function<Vector(double)>& psi,
                     const std::function<Vector(double)>& dpsi, double t0, double t1, int steps);

struct Atom {
  double x;
  double weight;
};
/// tau^2 for the f_s generated by an atomic measure.
double measure_tau_squared(const std::vector<Atom>& atoms, double t);

/// Relative difference ||a - b|| / max(1, ||b||).
double rel_diff(const Matrix& a, const Matrix& b);

}  // namespace oracle
