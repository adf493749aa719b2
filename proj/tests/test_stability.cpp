#include <algorithm>
#include <cmath>

#include "doctest.h"
#include "shearstab/errors.hpp"
#include "shearstab/stability.hpp"

using namespace shearstab;

namespace {

SpectralDiscretization half(int N, double L) { return build_grid(N, {DomainKind::HalfLine, L}); }

cplx leading(const EigenSolution& s) {
  REQUIRE(!s.modes.empty());
  return s.modes.front().c;
}

void check_invariants(const EigenSolution& s) {
  for (const auto& m : s.modes) {
    CHECK(m.residual <= 1e-6);
    CHECK(m.bc_residual <= 1e-10);
  }
}

}  // namespace

TEST_SUITE("stability") {
  TEST_CASE("exponential profile is Rayleigh stable") {
    const auto s = rayleigh_spectrum(make_profile("exponential"), 1.0, half(96, 2.0));
    CHECK(s.max_growth() <= 1e-6);
    check_invariants(s);
  }

  TEST_CASE("tanh profile unstable at alpha 0.5, stable at alpha 20") {
    const ShearProfile p = make_profile("tanh", {{"z0", 1.0}});
    const auto a = rayleigh_spectrum(p, 0.5, half(128, 1.0));
    const auto b = rayleigh_spectrum(p, 0.5, half(256, 1.0));
    check_invariants(a);
    const cplx ca = leading(a), cb = leading(b);
    CHECK(ca.imag() > 0.0);
    CHECK(std::abs(ca - cb) < 1e-6);
    CHECK(ca.real() == doctest::Approx(0.6769347836).epsilon(1e-6));
    CHECK(ca.imag() == doctest::Approx(0.1076420553).epsilon(1e-5));
    const int unstable = static_cast<int>(
        std::count_if(a.modes.begin(), a.modes.end(), [](const EigenPair& m) { return m.c.imag() > 1e-6; }));
    CHECK(unstable == 1);

    const auto s20 = rayleigh_spectrum(p, 20.0, half(96, 1.0));
    const auto s20b = rayleigh_spectrum(p, 20.0, half(192, 1.0));
    CHECK(s20.max_growth() <= 1e-6);
    CHECK(s20b.max_growth() <= 1e-6);
  }

  TEST_CASE("Rayleigh resolvent manufactured solution") {
    const ShearProfile unit(ProfileKind::Custom, DomainKind::HalfLine, [](double) { return 1.0; },
                            [](double) { return 0.0; }, [](double) { return 0.0; });
    const auto g = half(64, 2.0);
    Eigen::VectorXcd src(g.size());
    for (int j = 0; j <= g.N; ++j) src[j] = std::isinf(g.nodes[j]) ? 0.0 : -2.0 * std::exp(-g.nodes[j]);
    const Eigen::VectorXcd phi = rayleigh_resolvent(unit, 1.0, 0.0, src, g);
    for (int j = 1; j <= g.N; ++j) CHECK(std::abs(phi[j] - g.nodes[j] * std::exp(-g.nodes[j])) < 1e-8);
    const Eigen::VectorXcd phi2 = rayleigh_resolvent(unit, 1.0, 0.0, 2.0 * src, g);
    CHECK((phi2 - 2.0 * phi).cwiseAbs().maxCoeff() < 1e-12);
  }

  TEST_CASE("critical layer rejected") {
    const ShearProfile p = make_profile("exponential");
    const auto g = half(32, 2.0);
    const double c = p.U(g.nodes[20]);
    try {
      rayleigh_resolvent(p, 1.0, c, Eigen::VectorXcd::Ones(g.size()), g);
      FAIL("expected a critical-layer error");
    } catch (const Error& e) {
      CHECK(e.kind() == ErrorKind::CriticalLayer);
    }
  }

  TEST_CASE("Orr-Sommerfeld Poiseuille leading eigenvalue") {
    const ShearProfile p = make_profile("poiseuille");
    const auto a = os_spectrum(p, 1.0, 1e4, build_grid(128, {}));
    const auto b = os_spectrum(p, 1.0, 1e4, build_grid(256, {}));
    check_invariants(a);
    CHECK(std::abs(leading(a) - leading(b)) < 1e-5);
    CHECK(leading(a).real() == doctest::Approx(0.2375264888).epsilon(1e-7));
    CHECK(leading(a).imag() == doctest::Approx(0.0037396705).epsilon(1e-5));
    for (const auto& m : a.modes) {
      CHECK(std::abs(m.phi[128]) + std::abs(m.phi[0]) <= 1e-10);
    }
  }

  TEST_CASE("Orr-Sommerfeld strongly damped at Re 1") {
    const ShearProfile p = make_profile("poiseuille");
    for (int N : {48, 96}) {
      const auto s = os_spectrum(p, 1.0, 1.0, build_grid(N, {}));
      for (const auto& m : s.modes) CHECK(m.c.imag() < 0.0);
    }
  }

  TEST_CASE("resolution guidance") {
    CHECK(os_resolution_ok(128, 1e4));
    CHECK_FALSE(os_resolution_ok(16, 1e6));
    const auto s = os_spectrum(make_profile("poiseuille"), 1.0, 1e6, build_grid(16, {}));
    CHECK(s.resolution_warning);
  }

  TEST_CASE("neutral curve near criticality") {
    const ShearProfile p = make_profile("poiseuille");
    const auto g = build_grid(96, {});
    NeutralOptions opt;
    opt.scan_points = 16;
    const NeutralCurve curve = neutral_curve(p, {4000, 6000, 8000, 10000}, {0.6, 1.4}, g, opt);
    REQUIRE(curve.rows.size() == 4);
    CHECK_FALSE(curve.rows[0].supercritical);
    CHECK(curve.rows[1].supercritical);
    for (const auto& r : curve.rows) {
      if (!r.supercritical) continue;
      CHECK(r.alpha_low < r.alpha_up);
      CHECK(r.low_bracket.second - r.low_bracket.first <= 2e-4);
    }
    const double crossing = 0.5 * (curve.rows[1].alpha_low + curve.rows[1].alpha_up);
    CHECK(crossing == doctest::Approx(1.0).epsilon(0.1));
  }

  TEST_CASE("narrow window reported") {
    const GrowthFunction g = [](double a, double) { return 0.1 - (a - 1.0) * (a - 1.0) * 0.01; };
    try {
      neutral_point(g, 1.0, {0.9, 1.1}, {});
      FAIL("expected a window error");
    } catch (const Error& e) {
      CHECK(e.kind() == ErrorKind::WindowTooNarrow);
    }
  }

  TEST_CASE("synthetic neutral band and exponent fit") {
    // Band [Re^{-1/7}, 2 Re^{-1/11}] in closed form.
    const GrowthFunction g = [](double a, double Re) {
      return (a - std::pow(Re, -1.0 / 7)) * (2.0 * std::pow(Re, -1.0 / 11) - a);
    };
    std::vector<double> Res;
    for (int i = 0; i < 6; ++i) Res.push_back(std::pow(10.0, 5.0 + 0.2 * i));
    NeutralOptions opt;
    opt.alpha_tol = 1e-8;
    const NeutralCurve c = neutral_curve(g, Res, {0.05, 5.0}, opt);
    const ExponentFit lo = fit_exponents(c.lower, {1e5, 1e6});
    const ExponentFit up = fit_exponents(c.upper, {1e5, 1e6});
    CHECK(lo.slope == doctest::Approx(-1.0 / 7).epsilon(1e-4));
    CHECK(up.slope == doctest::Approx(-1.0 / 11).epsilon(1e-4));
    NeutralBranch few{BranchSide::Lower, {c.lower.points.begin(), c.lower.points.begin() + 3}};
    CHECK_THROWS_AS(fit_exponents(few, {1e5, 1e6}), Error);
  }

  TEST_CASE("inviscid limit of the tanh Orr-Sommerfeld mode") {
    const ShearProfile p = make_profile("tanh", {{"z0", 1.0}});
    const cplx cr = leading(rayleigh_spectrum(p, 0.5, half(128, 2.0)));
    std::vector<double> gaps;
    for (double Re : {1e3, 1e4, 1e5}) {
      const auto s = os_spectrum(p, 0.5, Re, half(128, 2.0));
      gaps.push_back(std::abs(leading(s) - cr));
    }
    CHECK(gaps[1] < gaps[0]);
    CHECK(gaps[2] < gaps[1]);
  }
}
