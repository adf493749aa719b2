#include <cmath>
#include <numbers>

#include "doctest.h"
#include "shearstab/errors.hpp"
#include "shearstab/instability.hpp"

using namespace shearstab;

namespace {

// phi' = phi + phi^2, exact phi_j = eps^j e^t (e^t - 1)^{j-1}.
struct ScalarModel {
  Eigen::MatrixXcd A = Eigen::MatrixXcd::Ones(1, 1);
  Bilinear Q = [](const Eigen::VectorXcd& a, const Eigen::VectorXcd& b) {
    return Eigen::VectorXcd(a.cwiseProduct(b));
  };
  Eigen::VectorXcd v0 = Eigen::VectorXcd::Ones(1);
};

}  // namespace

TEST_SUITE("instability") {
  TEST_CASE("bootstrap terms of the scalar Riccati model") {
    const ScalarModel m;
    const double eps = 1e-3;
    BootstrapOptions opt;
    opt.order = 4;
    const auto r = ode_bootstrap(m.A, m.Q, m.v0, 1.0, eps, opt);
    REQUIRE(r.terms.size() == 4);
    double err1 = 0.0, err2 = 0.0, err3 = 0.0;
    for (std::size_t i = 0; i < r.t.size(); ++i) {
      const double e = std::exp(r.t[i]);
      err1 = std::max(err1, std::abs(r.terms[0][i][0] - eps * e) / (eps * e));
      err2 = std::max(err2, std::abs(r.terms[1][i][0] - eps * eps * e * (e - 1)) / (eps * eps * e * e));
      err3 = std::max(err3, std::abs(r.terms[2][i][0] - std::pow(eps, 3) * e * (e - 1) * (e - 1)) /
                                (std::pow(eps, 3) * e * e * e));
    }
    CHECK(err1 < 1e-10);
    CHECK(err2 < 1e-9);
    CHECK(err3 < 1e-8);
    for (double c : r.C) {
      CHECK(c <= 1.0 + 1e-8);
      CHECK(c >= 0.9);
    }
    CHECK(r.residual_slope == doctest::Approx(5.0).epsilon(0.05));
    CHECK(r.energy_condition == (2 * 5 * 1.0 > r.energy_constant));
    REQUIRE(r.sigma.has_value());
    CHECK(r.T1 > 0.0);
    CHECK(r.escape_time == doctest::Approx(std::log(r.sigma0 * (1 + eps) / (eps * (1 + r.sigma0)))).epsilon(1e-6));
  }

  TEST_CASE("bootstrap preconditions") {
    const ScalarModel m;
    try {
      ode_bootstrap(m.A, m.Q, m.v0, -1.0, 1e-3);
      FAIL("expected a precondition error");
    } catch (const Error& e) {
      CHECK(e.kind() == ErrorKind::Precondition);
    }
    try {
      ode_bootstrap(m.A, m.Q, m.v0, 2.0, 1e-3);
      FAIL("expected an input error");
    } catch (const Error& e) {
      CHECK(e.kind() == ErrorKind::Input);
    }
  }

  TEST_CASE("escape times grow like -log(eps) / Re(lambda)") {
    const ScalarModel m;
    const auto fit = escape_time_fit(m.A, m.Q, m.v0, 0.1, {1e-3, 1e-4, 1e-5, 1e-6});
    CHECK(fit.slope == doctest::Approx(1.0).epsilon(1e-3));
  }

  TEST_CASE("Riccati closed forms") {
    const auto lim = riccati_exact(1.0, -10.0, 0.5, 50.0);
    REQUIRE(lim.limit.has_value());
    CHECK(*lim.limit == doctest::Approx(0.1));
    CHECK(lim.value == doctest::Approx(0.1).epsilon(1e-12));

    CHECK(riccati_exact(0.3, 0.0, 2.0, 1.5).value == doctest::Approx(2.0 * std::exp(0.45)));

    const auto blow = riccati_exact(0.1, 1.0, 0.01, 30.0);
    REQUIRE(blow.blowup_time.has_value());
    CHECK(*blow.blowup_time == doctest::Approx(10.0 * std::log(11.0)).epsilon(1e-12));
    CHECK(blow.blown_up);
    CHECK_FALSE(riccati_exact(0.1, 1.0, 0.01, 20.0).blown_up);

    // ODE residual by central differences.
    const double eps = 0.2, alpha = 0.7, phi0 = 0.05, h = 1e-5;
    for (double t : {0.5, 3.0, 8.0}) {
      const double p = riccati_exact(eps, alpha, phi0, t).value;
      const double dp =
          (riccati_exact(eps, alpha, phi0, t + h).value - riccati_exact(eps, alpha, phi0, t - h).value) / (2 * h);
      CHECK(std::abs(dp - eps * p - alpha * p * p) < 1e-6 * std::max(1.0, std::abs(dp)));
    }
  }

  TEST_CASE("Hopf series coefficients") {
    const auto s = hopf_series(TrigPoly::cosine(1), 1.0, 8);
    const TrigPoly expected = TrigPoly::sine(2, 0.5);
    for (int k = -2; k <= 2; ++k) CHECK(std::abs(s.u[1][k] - expected[k]) < 1e-14);
    for (double r : s.residuals) CHECK(r <= 1e-10);
    CHECK(s.sup_norms[0] == doctest::Approx(1.0));

    const auto zero = hopf_series(TrigPoly(), 1.0, 4);
    for (const auto& u : zero.u) CHECK(u.is_zero());
  }

  TEST_CASE("Hopf majorant inequality and characteristics") {
    const auto s = hopf_series(TrigPoly::cosine(1), 1.0, 6);
    const auto rep = hopf_majorant(s);
    CHECK(rep.inequality_residual <= 1e-12);
    CHECK(rep.phi_at_T == doctest::Approx(0.5));
    CHECK(rep.max_K_increase <= 1e-9);
    CHECK(rep.residual_slope == doctest::Approx(7.0).epsilon(0.02));

    const auto zero = hopf_series(TrigPoly(), 1.0, 3);
    try {
      hopf_majorant(zero);
      FAIL("expected a precondition error");
    } catch (const Error& e) {
      CHECK(e.kind() == ErrorKind::Precondition);
    }
  }

  TEST_CASE("Kolmogorov flow eigenvalue") {
    const auto U = kolmogorov_profile();
    const cplx l16 = euler_eigenvalue(U, 0.5, 1, 16);
    const cplx l32 = euler_eigenvalue(U, 0.5, 1, 32);
    CHECK(std::abs(l16 - l32) < 1e-8);
    CHECK(l16.real() == doctest::Approx(0.2612492396).epsilon(1e-8));
    CHECK(std::abs(l16.imag()) < 1e-8);
    try {
      euler_eigenvalue(U, 1.5, 1, 16);
      FAIL("expected a not-unstable error");
    } catch (const Error& e) {
      CHECK(e.kind() == ErrorKind::NotUnstable);
    }
  }

  TEST_CASE("Euler nonlinear series") {
    EulerOptions opt;
    opt.order = 3;
    opt.modes = 12;
    const auto rep = euler_series(kolmogorov_profile(), opt);
    CHECK(rep.eigen_residual < 1e-10);
    REQUIRE(rep.omega.size() == 3);
    for (std::size_t n = 0; n < rep.gen_norms.size(); ++n) {
      CHECK(rep.gen_norms[n] >= rep.wiener_norms[n]);
    }
    for (double h : rep.h1_ratios) CHECK(std::isfinite(h));
    CHECK(rep.partial_sum_change.back() < 0.1);
  }
}
