#include <cmath>
#include <numbers>
#include <random>

#include "doctest.h"
#include "oracles.hpp"
#include "shearstab/errors.hpp"
#include "shearstab/resolvent.hpp"

using namespace shearstab;

namespace {

Eigen::MatrixXcd random_matrix(std::mt19937_64& rng, int n) {
  std::normal_distribution<double> N01;
  Eigen::MatrixXcd A(n, n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) A(i, j) = N01(rng);
  }
  // Spectral radius scaled to 2.
  const double rho = Eigen::ComplexEigenSolver<Eigen::MatrixXcd>(A).eigenvalues().cwiseAbs().maxCoeff();
  return A * (2.0 / rho);
}

Potential sech2(double nu) {
  return [nu](double x) {
    const double s = 1.0 / std::cosh(x);
    return cplx(2.0 * nu * s * s);
  };
}

}  // namespace

TEST_SUITE("resolvent") {
  TEST_CASE("rotation and diagonal semigroups") {
    Eigen::MatrixXcd R(2, 2);
    R << 0, 1, -1, 0;
    const auto r = semigroup_apply(R, Eigen::Vector2cd(1, 0), std::numbers::pi / 2);
    CHECK(std::abs(r.value[0]) < 1e-8);
    CHECK(std::abs(r.value[1] + 1.0) < 1e-8);

    Eigen::MatrixXcd D = Eigen::MatrixXcd::Zero(2, 2);
    D(0, 0) = 1;
    D(1, 1) = -2;
    const auto d = semigroup_apply(D, Eigen::Vector2cd(1, 1), 1.0);
    CHECK(std::abs(d.value[0] - std::exp(1.0)) < 1e-8);
    CHECK(std::abs(d.value[1] - std::exp(-2.0)) < 1e-8);
  }

  TEST_CASE("random matrices against the scaling-and-squaring oracle") {
    std::mt19937_64 rng(11);
    for (int s = 0; s < 5; ++s) {
      const Eigen::MatrixXcd A = random_matrix(rng, 4);
      const Eigen::VectorXcd x0 = Eigen::VectorXcd::Ones(4);
      for (double t : {0.5, 1.0, 2.0}) {
        const auto r = semigroup_apply(A, x0, t);
        const Eigen::VectorXcd ref = oracle::expm(A, t) * x0;
        CHECK((r.value - ref).norm() <= 1e-8 * std::max(1.0, ref.norm()));
      }
      const auto half = semigroup_apply(A, x0, 0.5);
      const auto twice = semigroup_apply(A, half.value, 0.5);
      const auto whole = semigroup_apply(A, x0, 1.0);
      CHECK((twice.value - whole.value).norm() <= 1e-7 * std::max(1.0, whole.value.norm()));
    }
  }

  TEST_CASE("t = 0 returns the initial vector") {
    Eigen::MatrixXcd A(2, 2);
    A << -1, 3, 0, -2;
    const Eigen::Vector2cd x0(0.3, -0.7);
    CHECK((semigroup_apply(A, x0, 0.0).value - x0).norm() < 1e-10);
  }

  TEST_CASE("contour must enclose the spectrum") {
    Eigen::MatrixXcd A = Eigen::MatrixXcd::Zero(2, 2);
    A(0, 0) = 3.0;
    try {
      semigroup_apply(A, Eigen::Vector2cd(1, 1), 1.0, ContourSpec::three_segment(1.0, 1.0));
      FAIL("expected a contour error");
    } catch (const Error& e) {
      CHECK(e.kind() == ErrorKind::ContourCrossesSpectrum);
    }
  }

  TEST_CASE("growth bound constant stable under t doubling") {
    std::mt19937_64 rng(5);
    const Eigen::MatrixXcd A = random_matrix(rng, 4);
    const ContourSpec c = ContourSpec::enclosing(A);
    const Eigen::VectorXcd x0 = Eigen::VectorXcd::Ones(4);
    double cp1 = 0.0, cp2 = 0.0;
    for (double t : {0.25, 0.5, 1.0, 2.0}) {
      cp1 = std::max(cp1, semigroup_apply(A, x0, t, c).value.norm() / (std::exp(c.P * t) * x0.norm()));
      cp2 = std::max(cp2, semigroup_apply(A, x0, 2 * t, c).value.norm() / (std::exp(c.P * 2 * t) * x0.norm()));
    }
    CHECK(cp2 <= cp1 * 1.0001);
  }

  TEST_CASE("heat kernel closed forms") {
    CHECK(heat_green(1.0, 0.0, 0.0, 1.0).value == doctest::Approx(0.2820948).epsilon(1e-6));
    CHECK(heat_green(1.0, 2.0, 0.0, 1.0).value == doctest::Approx(std::exp(-1.0) / std::sqrt(4 * std::numbers::pi)).epsilon(1e-6));
    for (double t : {0.1, 0.7, 2.0}) {
      for (double d : {0.0, 1.3, 4.0}) {
        const auto r = heat_green(t, d, 0.0, 0.5);
        const double ref = oracle::heat_gaussian(t, d, 0.5);
        CHECK(std::abs(r.value - ref) <= 1e-6 * ref);
        CHECK(r.value <= r.gaussian_bound + 1e-9);
      }
    }
  }

  TEST_CASE("parabolic Green function with zero potential") {
    const Potential zero = [](double) { return cplx(0.0); };
    const double nu = 0.7;
    for (cplx tau : {cplx(-1.0, 0.0), cplx(2.0, -0.5)}) {
      const cplx lambda = cplx(0.0, 1.0) * tau;
      for (double x : {-1.5, 0.0, 0.4, 2.0}) {
        const cplx g = parabolic_green(zero, tau, x, 0.3, nu);
        const cplx ref = -std::exp(-std::abs(x - 0.3) * std::sqrt(lambda / nu)) / (2.0 * std::sqrt(lambda * nu));
        CHECK(std::abs(g - ref) < 1e-8);
      }
    }
  }

  TEST_CASE("derivative jump and symmetry with the sech^2 potential") {
    const double nu = 1.0;
    const Potential A = sech2(nu);
    const cplx tau(-3.0, 0.5);  // lambda = i tau away from nu
    const double y = 0.2, h = 1e-5;
    const cplx right = (parabolic_green(A, tau, y + 2 * h, y, nu) - parabolic_green(A, tau, y + h, y, nu)) / h;
    const cplx left = (parabolic_green(A, tau, y - h, y, nu) - parabolic_green(A, tau, y - 2 * h, y, nu)) / h;
    CHECK(std::abs(std::abs(right - left) - 1.0 / nu) < 1e-3);
    for (double x : {-1.0, 0.5, 1.7}) {
      const cplx g1 = parabolic_green(A, tau, x, -0.4, nu);
      const cplx g2 = parabolic_green(A, tau, -0.4, x, nu);
      CHECK(std::abs(g1 - g2) < 1e-8);
    }
  }

  TEST_CASE("Evans function zeros") {
    const double nu = 1.0;
    const auto found = evans_locate(sech2(nu), {0.5, 1.5, -0.5, 0.5}, nu);
    REQUIRE(found.zeros.size() == 1);
    CHECK(found.winding == 1);
    CHECK(std::abs(found.zeros[0] - 1.0) < 1e-6);

    const auto empty = evans_locate(sech2(nu), {0.1, 0.6, -0.4, 0.4}, nu);
    CHECK(empty.winding == 0);
    CHECK(empty.zeros.empty());

    const Potential flat = [](double) { return cplx(0.5); };
    const auto none = evans_locate(flat, {1.0, 2.0, -0.5, 0.5}, nu);
    CHECK(none.winding == 0);
  }

  TEST_CASE("essential spectrum rejected") {
    const Potential zero = [](double) { return cplx(0.0); };
    try {
      evans_matrix(zero, -1.0, 0.0, 1.0);
      FAIL("expected an essential-spectrum error");
    } catch (const Error& e) {
      CHECK(e.kind() == ErrorKind::EssentialSpectrum);
    }
  }
}
