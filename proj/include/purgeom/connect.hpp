#pragma once

// Vertical and horizontal geometry of the purification bundle: the Bures
// decomposition (valid at any rank), the F-indexed connection forms at
// invertible w and horizontal lifts.

#include "purgeom/funzoo.hpp"
#include "purgeom/purify.hpp"

namespace purgeom {

/// x = g w + x0 + w a with g Hermitian, a anti-Hermitian and x0 neutral
/// (w* x0 = 0, x0 w* = 0). g and a vanish on the joint null block.
struct BuresSplit {
  Matrix g;
  Matrix a;
  Matrix x0;
};

struct ConnectionValue {
  Matrix a;                        // anti-Hermitian
  double condition_number = 1.0;   // of w; large values flag a near-boundary evaluation
};

/// g with rho g + g rho = xi, minimal support. Throws UnsolvableSupport if xi
/// has weight on the null space of rho.
Matrix sylvester_solve(const DensityOperator& rho, const StateTangent& xi);

BuresSplit bures_decompose(const PurificationVector& w, const Matrix& x);

/// a(x) = a_can(x) + F(Lt/Rt) (w^-1 x + (w^-1 x)*) / 2. Bures connections are
/// evaluated through bures_decompose at any rank; any other F throws
/// RankDeficient unless w is invertible.
ConnectionValue connection_eval(const ConnectionFunction& conn, const PurificationVector& w,
                                const Matrix& x);

/// x^Ver = w a(x) and x^hor = x - x^Ver. Throw RankDeficient.
Matrix vertical_part(const ConnectionFunction& conn, const PurificationVector& w, const Matrix& x);
Matrix horizontal_part(const ConnectionFunction& conn, const PurificationVector& w,
                       const Matrix& x);

/// The same vertical part from the modular operator:
/// x - r(Delta^-1)(x + w x* (w*)^-1).
Matrix vertical_part_modular(const ConnectionFunction& conn, const PurificationVector& w,
                             const Matrix& x);

/// (r(R/L) xi)(w*)^-1. Throws RankDeficient, or BasePointMismatch when
/// ww* differs from the base point of xi.
Matrix horizontal_lift(const ConnectionFunction& conn, const PurificationVector& w,
                       const StateTangent& xi);

/// xi = parallel + perp with [parallel, rho] = 0 and perp = i[b, rho].
struct TangentSplit {
  Matrix parallel;
  Matrix perp;
  Matrix b;
};

/// Eigenvalues closer than degeneracy_tol * lambda_max form one block.
TangentSplit tangent_split(const DensityOperator& rho, const Matrix& xi,
                           double degeneracy_tol = 1e-10);

}  // namespace purgeom
