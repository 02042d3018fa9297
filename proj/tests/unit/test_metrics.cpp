#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "oracles.hpp"
#include "purgeom/errors.hpp"
#include "purgeom/metrics.hpp"

using namespace purgeom;

namespace {

Matrix diag(std::initializer_list<double> values) {
  Eigen::VectorXd d(static_cast<Eigen::Index>(values.size()));
  Eigen::Index i = 0;
  for (double v : values) d(i++) = v;
  return d.cast<Complex>().asDiagonal();
}

Matrix sigma_x() {
  Matrix s(2, 2);
  s << 0, 1, 1, 0;
  return s;
}

Matrix sqrt_of(const Matrix& rho) {
  return matfun(DensityOperator(rho).eig(), [](double l) { return std::sqrt(l); });
}

double bures(const Matrix& rho, const Matrix& a, const Matrix& b) {
  const DensityOperator s(rho);
  return bures_inner(s, StateTangent(s, a), StateTangent(s, b));
}

double canonical(const Matrix& rho, const Matrix& a, const Matrix& b) {
  const DensityOperator s(rho);
  return canonical_inner(s, StateTangent(s, a), StateTangent(s, b));
}

}  // namespace

TEST_CASE("Bures metric special values") {
  const Matrix rho = diag({0.7, 0.3}), xi = diag({0.2, -0.2});
  CHECK(bures(rho, xi, xi) == doctest::Approx(0.25 * (0.04 / 0.7 + 0.04 / 0.3)).epsilon(1e-14));
  CHECK(bures(diag({0.5, 0.5}), diag({0.1, -0.1}), diag({0.1, -0.1})) ==
        doctest::Approx(0.01).epsilon(1e-14));
  oracle::Rng rng(41);
  for (int n = 2; n <= 4; ++n) {
    const Matrix r = rng.density(n), a = rng.hermitian(n), b = rng.hermitian(n);
    CHECK(bures(r, a, b) == doctest::Approx(oracle::bures_dense(r, a, b)).epsilon(1e-10));
    CHECK(bures(r, a, b) == doctest::Approx(bures(r, b, a)).epsilon(1e-12));
    CHECK(bures(r, a, a) > 0.0);
  }
}

TEST_CASE("Bures metric at rank-deficient states") {
  // pure state: 1/2 Tr xi^2 of the off-diagonal part
  const Matrix p = diag({1, 0});
  CHECK(bures(p, sigma_x(), sigma_x()) == doctest::Approx(1.0));
  CHECK_THROWS_AS(bures(p, sigma_x(), diag({0, 1})), UnsolvableSupport);
  CHECK_THROWS_AS(bures(p, diag({0, 1}), sigma_x()), UnsolvableSupport);
}

TEST_CASE("Bures length equals the HS length of the horizontal lift") {
  oracle::Rng rng(42);
  const auto conn = connection_catalog("bures");
  for (int n = 2; n <= 4; ++n) {
    const Matrix r = rng.density(n), xi = rng.hermitian(n);
    const PurificationVector w(sqrt_of(r) * rng.unitary(n));
    const Matrix x = horizontal_lift(conn, w, StateTangent(DensityOperator(r), xi));
    CHECK(hs_norm(x) * hs_norm(x) == doctest::Approx(bures(r, xi, xi)).epsilon(1e-10));
  }
}

TEST_CASE("Bures is dominated by the canonical metric") {
  oracle::Rng rng(43);
  const Matrix rho = diag({2.0 / 3, 1.0 / 3});
  CHECK(canonical(rho, sigma_x(), sigma_x()) > bures(rho, sigma_x(), sigma_x()) + 1e-3);
  for (int n = 2; n <= 4; ++n) {
    const Matrix flat = Matrix::Identity(n, n) / n, xi = rng.hermitian(n);
    CHECK(canonical(flat, xi, xi) == doctest::Approx(bures(flat, xi, xi)).epsilon(1e-12));
    const Matrix r = rng.density(n);
    CHECK(canonical(r, xi, xi) > bures(r, xi, xi));
    const Matrix par = tangent_split(DensityOperator(r), xi).parallel;
    CHECK(canonical(r, par, par) == doctest::Approx(bures(r, par, par)).epsilon(1e-10));
  }
  CHECK_THROWS_AS(canonical(diag({1, 0}), sigma_x(), sigma_x()), RankDeficient);
}

TEST_CASE("monotone metrics") {
  oracle::Rng rng(44);
  const auto bures_f = monotone_catalog("bures");
  const auto canon_f = monotone_catalog("canonical");
  for (int n = 2; n <= 4; ++n) {
    const Matrix r = rng.density(n), a = rng.hermitian(n), b = rng.hermitian(n);
    const DensityOperator s(r);
    CHECK(monotone_inner(bures_f, s, a, b).real() == doctest::Approx(bures(r, a, b)).epsilon(1e-10));
    CHECK(monotone_inner(canon_f, s, a, b).real() == doctest::Approx(canonical(r, a, b)).epsilon(1e-10));
    for (const char* name : {"bures", "canonical", "wigner_yanase", "kubo_mori"}) {
      CAPTURE(name);
      const auto f = monotone_catalog(name);
      // selftransposed f give symmetric, real forms on Hermitian tangents
      CHECK(std::abs(monotone_inner(f, s, a, b) - monotone_inner(f, s, b, a)) < 1e-12);
      CHECK(std::abs(monotone_inner(f, s, a, b).imag()) < 1e-12);
    }
    // f(t) = t^0.3 is not selftransposed: the form is Hermitian but not real
    const MonotoneFunction skew{ScalarFunction([](double t) { return std::pow(t, 0.3); })};
    const Complex ab = monotone_inner(skew, s, a, b), ba = monotone_inner(skew, s, b, a);
    CHECK(std::abs(ab - std::conj(ba)) < 1e-12);
    CHECK(std::abs(ab.imag()) > 1e-6);
    // on diagonal tangents every f gives the Fisher form
    Matrix d = Matrix::Zero(n, n);
    for (int j = 0; j < n; ++j) d(j, j) = 0.1 * (j % 2 ? -1.0 : 1.0) / (j + 1);
    const DensityOperator ds(rng.diagonal_density(n));
    double fisher = 0.0;
    for (int j = 0; j < n; ++j) fisher += 0.25 * std::norm(d(j, j)) / ds.matrix()(j, j).real();
    CHECK(monotone_inner(skew, ds, d, d).real() == doctest::Approx(fisher).epsilon(1e-12));
  }
  CHECK_THROWS_AS(monotone_inner(bures_f, DensityOperator(diag({1, 0})), sigma_x(), sigma_x()),
                  RankDeficient);
}

TEST_CASE("purification metric") {
  oracle::Rng rng(45);
  for (int n = 2; n <= 4; ++n) {
    const PurificationVector w(rng.invertible(n));
    const Matrix x = rng.gaussian(n, n), y = rng.gaussian(n, n);
    CHECK(std::abs(purification_inner(metric_catalog("hs"), w, y, x) - hs_inner(y, x)) < 1e-12);
    const auto k = metric_catalog("canonical");
    const auto& s = w.schmidt();
    for (int j = 0; j < n; ++j) {
      const Matrix v = s.left.col(j) * s.right.col((j + 1) % n).adjoint();
      CHECK(purification_inner(k, w, v, v).real() ==
            doctest::Approx(1.0 / k.k(s.lambdas(j) / s.lambdas((j + 1) % n))).epsilon(1e-12));
    }
    // Gram matrix on a random real frame is positive definite
    std::vector<Matrix> frame;
    for (int i = 0; i < 6; ++i) frame.push_back(rng.gaussian(n, n));
    Eigen::MatrixXd gram(6, 6);
    for (int i = 0; i < 6; ++i)
      for (int j = 0; j < 6; ++j) gram(i, j) = purification_inner(k, w, frame[i], frame[j]).real();
    CHECK(Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd>(gram).eigenvalues().minCoeff() > 0.0);
    // invariance under w -> u w v and rescaling
    const Matrix u = rng.unitary(n), v = rng.unitary(n);
    const PurificationVector moved(u * w.matrix() * v);
    CHECK(std::abs(purification_inner(k, moved, u * y * v, u * x * v) - purification_inner(k, w, y, x)) <
          1e-10);
    const PurificationVector scaled(2.5 * w.matrix());
    CHECK(std::abs(purification_inner(k, scaled, y, x) - purification_inner(k, w, y, x)) < 1e-10);
  }
  const PurificationVector deficient(diag({1, 0}));
  CHECK_THROWS_AS(purification_inner(metric_catalog("hs"), deficient, sigma_x(), sigma_x()),
                  RankDeficient);
}

TEST_CASE("induced metric closed form and lifted evaluation") {
  oracle::Rng rng(46);
  for (const char* name : {"hs", "canonical", "sqrt", "wigner_yanase", "power(0.4)"}) {
    CAPTURE(name);
    const auto k = metric_catalog(name);
    const auto fs = fs_from_k(k);
    for (int n = 2; n <= 4; ++n) {
      const Matrix r = rng.density(n), a = rng.hermitian(n), b = rng.hermitian(n);
      const DensityOperator s(r);
      const auto report = induced_inner(k, s, a, b);
      CHECK(report.cross_check < 1e-9);
      CHECK(std::abs(report.hermitian_value - induced_inner_lifted(k, s, a, b)) < 1e-9);
      CHECK(report.real_value == doctest::Approx(induced_real_inner(k, s, a, b)).epsilon(1e-10));
      CHECK(report.real_value == doctest::Approx(monotone_inner(fs, s, a, b).real()).epsilon(1e-10));
    }
  }
  const Matrix r = rng.density(3), a = rng.hermitian(3);
  const DensityOperator s(r);
  CHECK(induced_inner(metric_catalog("hs"), s, a, a).real_value ==
        doctest::Approx(bures(r, a, a)).epsilon(1e-10));
  CHECK(induced_inner(metric_catalog("canonical"), s, a, a).real_value ==
        doctest::Approx(canonical(r, a, a)).epsilon(1e-10));
}

TEST_CASE("Condition HS makes the induced real metric the HS product on horizontal lifts") {
  oracle::Rng rng(47);
  const Matrix r = rng.density(3), a = rng.hermitian(3), b = rng.hermitian(3);
  const DensityOperator s(r);
  const PurificationVector w(sqrt_of(r));
  for (const char* name : {"bures", "canonical", "global_section"}) {
    CAPTURE(name);
    const auto conn = connection_catalog(name);
    const auto k = k_from_F_HS(conn);
    const Matrix x = horizontal_lift(conn, w, StateTangent(s, a));
    const Matrix y = horizontal_lift(conn, w, StateTangent(s, b));
    CHECK(purification_inner(k, w, y, x).real() == doctest::Approx(hs_inner(y, x).real()).epsilon(1e-10));
  }
  // sqrt violates Condition HS
  const auto k = metric_catalog("sqrt");
  const auto conn = rF_from_k(k).second;
  const Matrix x = horizontal_lift(conn, w, StateTangent(s, a));
  CHECK(std::abs(purification_inner(k, w, x, x).real() - hs_inner(x, x).real()) > 1e-6);
}

TEST_CASE("state metrics are unitarily invariant") {
  oracle::Rng rng(48);
  const Matrix r = rng.density(3), a = rng.hermitian(3), b = rng.hermitian(3), u = rng.unitary(3);
  auto rot = [&](const Matrix& m) { return Matrix(u * m * u.adjoint()); };
  CHECK(bures(rot(r), rot(a), rot(b)) == doctest::Approx(bures(r, a, b)).epsilon(1e-10));
  CHECK(canonical(rot(r), rot(a), rot(b)) == doctest::Approx(canonical(r, a, b)).epsilon(1e-10));
  const auto f = monotone_catalog("kubo_mori");
  CHECK(std::abs(monotone_inner(f, DensityOperator(rot(r)), rot(a), rot(b)) -
                 monotone_inner(f, DensityOperator(r), a, b)) < 1e-10);
  const auto k = metric_catalog("sqrt");
  CHECK(std::abs(induced_inner(k, DensityOperator(rot(r)), rot(a), rot(b)).hermitian_value -
                 induced_inner(k, DensityOperator(r), a, b).hermitian_value) < 1e-10);
}
