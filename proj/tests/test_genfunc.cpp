#include <cmath>

#include "doctest.h"
#include "shearstab/errors.hpp"
#include "shearstab/genfunc.hpp"

using namespace shearstab;

namespace {

double constant_of(const std::vector<InequalityReport>& reports, const std::string& name) {
  for (const auto& r : reports) {
    if (r.inequality == name) return r.measured_constant;
  }
  FAIL("missing report " << name);
  return 0.0;
}

ModeFamily cos_x_exp() {
  return {{-1, ModeProfile::exponential(0.5, 1.0)}, {1, ModeProfile::exponential(0.5, 1.0)}};
}

}  // namespace

TEST_SUITE("genfunc") {
  TEST_CASE("boundary-layer weights") {
    BLNormParams p;
    p.delta = 0.1;
    const YGrid grid = YGrid::for_params(p);
    const auto& y = grid.y();
    CHECK(y.front() == 0.0);
    CHECK(y.back() == doctest::Approx(40.0));

    std::vector<cplx> layer(y.size()), one(y.size(), 1.0);
    for (std::size_t i = 0; i < y.size(); ++i) layer[i] = std::exp(-y[i] / p.delta) / p.delta;
    CHECK(bl_norm(y, layer, 0, p, NormFlavor::WithBL) == doctest::Approx(1.0 / (1.0 + p.delta)).epsilon(1e-12));
    CHECK(bl_norm(y, one, 0, p, NormFlavor::WithBL) == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(bl_norm(y, one, 0, p, NormFlavor::WithoutBL) == doctest::Approx(1.0));
    CHECK(bl_weight(0.0, 3, p, NormFlavor::WithoutBL) == 0.0);

    const auto adaptive = bl_norm_adaptive([](double yy) { return cplx(yy * std::exp(-yy)); }, 0, p,
                                           NormFlavor::WithoutBL);
    CHECK(adaptive.value == doctest::Approx(std::exp(-1.0)).epsilon(1e-6));
  }

  TEST_CASE("norm parameters") {
    const auto p = BLNormParams::from_viscosity(2.0, 1e-4);
    CHECK(p.delta == doctest::Approx(0.2));
    BLNormParams bad;
    bad.delta = 0.0;
    CHECK_THROWS_AS(bad.validate(), Error);
  }

  TEST_CASE("mode profile derivatives") {
    const auto g = ModeProfile::gaussian(1.0, 0.5, 0.7);
    cplx d[5];
    const double y = 1.1, h = 1e-4;
    g.derivatives(y, 4, d);
    CHECK(std::abs(d[1] - (g.value(y + h) - g.value(y - h)) / (2 * h)) < 1e-7);
    cplx dp[5], dm[5];
    g.derivatives(y + h, 4, dp);
    g.derivatives(y - h, 4, dm);
    CHECK(std::abs(d[4] - (dp[3] - dm[3]) / (2 * h)) < 1e-5);

    const auto prod = ModeProfile::exponential(2.0, 1.0) * ModeProfile::gaussian(1.0, 0.0, 1.0);
    cplx pd[3];
    prod.derivatives(y, 2, pd);
    CHECK(std::abs(pd[0] - 2.0 * std::exp(-y - y * y)) < 1e-14);
    CHECK(std::abs(pd[1] - 2.0 * (-1.0 - 2 * y) * std::exp(-y - y * y)) < 1e-13);

    const ModeProfile capped([](double, int, cplx* out) { out[0] = 1.0; out[1] = 0.0; }, 1);
    cplx tmp[3];
    CHECK_THROWS_AS(capped.derivatives(0.0, 2, tmp), Error);
  }

  TEST_CASE("generator of cos x e^{-y}") {
    BLNormParams p;
    p.delta = 0.1;
    const YGrid grid = YGrid::for_params(p);
    const GenSeries s = gen_series(cos_x_exp(), p, {8, 12}, NormFlavor::WithoutBL, grid);
    CHECK(s(0.0, 0.0) == doctest::Approx(1.0).epsilon(1e-12));
    double prev = 0.0;
    for (double z : {0.0, 0.1, 0.2, 0.4}) {
      const double v = s(z, z);
      CHECK(v >= prev);
      prev = v;
    }
  }

  TEST_CASE("dz1 of a single mode and the unit product") {
    Eigen::MatrixXd c(1, 4);
    c << 1.0, 0.5, 0.25, 0.125;
    const GenSeries s(NormFlavor::WithoutBL, {3}, c);
    for (double z1 : {0.0, 0.3}) {
      for (double z2 : {0.0, 0.2}) {
        CHECK(s.dz1()(z1, z2) == doctest::Approx(3.0 * s(z1, z2)).epsilon(1e-14));
        CHECK(s.partial(1, 0, z1, z2) == doctest::Approx(3.0 * s(z1, z2)).epsilon(1e-14));
        CHECK(s.dz2()(z1, z2) == doctest::Approx(s.partial(0, 1, z1, z2)).epsilon(1e-12));
      }
    }
    Eigen::MatrixXd u = Eigen::MatrixXd::Zero(1, 4);
    u(0, 0) = 1.0;
    const GenSeries unit(NormFlavor::WithoutBL, {0}, u);
    const GenSeries prod = product_bound(s, unit);
    CHECK(prod(0.2, 0.3) == doctest::Approx(s(0.2, 0.3)).epsilon(1e-14));

    Eigen::MatrixXd neg(1, 2);
    neg << 1.0, -1.0;
    CHECK_THROWS_AS(GenSeries(NormFlavor::WithoutBL, {0}, neg), Error);
  }

  TEST_CASE("product bound dominates products of generators") {
    BLNormParams p;
    p.delta = 0.1;
    const YGrid grid = YGrid::for_params(p);
    const ModeFamily f = cos_x_exp();
    const ModeFamily g = {{2, ModeProfile::gaussian(1.0, 1.0, 0.8)}, {-1, ModeProfile::exponential(0.3, 2.0)}};
    const GenSeries fg = gen_series(family_product(f, g), p, {8, 10}, NormFlavor::WithoutBL, grid);
    const GenSeries bound = product_bound(gen_series(f, p, {8, 10}, NormFlavor::WithoutBL, grid),
                                          gen_series(g, p, {8, 10}, NormFlavor::WithoutBL, grid));
    for (double z1 : {0.0, 0.25, 0.5}) {
      for (double z2 : {0.0, 0.25, 0.5}) CHECK(fg(z1, z2) <= bound(z1, z2) * (1.0 + 1e-12));
    }
  }

  TEST_CASE("Laplace solve against a manufactured solution") {
    BLNormParams p;
    p.delta = 0.1;
    const YGrid grid = YGrid::for_params(p);
    for (int alpha : {1, 2, -3}) {
      const double a2 = alpha * alpha;
      const auto f = [a2](double y) { return cplx((y - 2.0 - a2 * y) * std::exp(-y)); };
      const auto sol = laplace_solve_1d(alpha, f, p, grid);
      double err = 0.0, derr = 0.0;
      for (std::size_t i = 0; i < sol.y.size(); ++i) {
        const double y = sol.y[i];
        err = std::max(err, std::abs(sol.phi[i] - y * std::exp(-y)));
        derr = std::max(derr, std::abs(sol.dphi[i] - (1.0 - y) * std::exp(-y)));
      }
      CHECK(err < 1e-8);
      CHECK(derr < 1e-8);
    }
  }

  TEST_CASE("Laplace solve is linear") {
    BLNormParams p;
    p.delta = 0.1;
    const YGrid grid = YGrid::for_params(p);
    const auto f1 = [](double y) { return cplx(std::exp(-(y - 1) * (y - 1))); };
    const auto f2 = [](double y) { return cplx(0.0, std::exp(-2 * y)); };
    const auto s1 = laplace_solve_1d(2, f1, p, grid);
    const auto s2 = laplace_solve_1d(2, f2, p, grid);
    const auto s12 = laplace_solve_1d(2, [&](double y) { return 2.0 * f1(y) - f2(y); }, p, grid);
    double err = 0.0;
    for (std::size_t i = 0; i < s12.phi.size(); ++i) {
      err = std::max(err, std::abs(s12.phi[i] - 2.0 * s1.phi[i] + s2.phi[i]));
    }
    CHECK(err < 1e-12);
  }

  TEST_CASE("Laplace preconditions") {
    BLNormParams p;
    p.delta = 0.5;
    const YGrid grid = YGrid::for_params(p);
    const auto f = [](double y) { return cplx(std::exp(-y)); };
    try {
      laplace_solve_1d(2, f, p, grid);
      FAIL("expected a precondition error");
    } catch (const Error& e) {
      CHECK(e.kind() == ErrorKind::Precondition);
    }
    CHECK_NOTHROW(laplace_solve_1d(2, f, p, grid, false));
    try {
      laplace_solve_1d(0, f, p, grid);
      FAIL("expected a configuration error");
    } catch (const Error& e) {
      CHECK(e.kind() == ErrorKind::Configuration);
    }
  }

  TEST_CASE("elliptic estimate constants") {
    BLNormParams p;
    p.delta = 0.1;
    const ModeFamily zero = {{1, ModeProfile::constant(0.0)}};
    for (const auto& r : elliptic_gen_estimate(zero, p)) CHECK(r.measured_constant == 0.0);

    const ModeFamily layer = {{1, ModeProfile::exponential(1.0 / p.delta, 1.0 / p.delta)}};
    EllipticOptions opt;
    opt.trunc = {8, 8};
    opt.z_samples = 5;
    const auto reports = elliptic_gen_estimate(layer, p, opt);
    REQUIRE(reports.size() == 4);
    for (const auto& r : reports) {
      CHECK(r.pass);
      CHECK(std::isfinite(r.measured_constant));
    }
    CHECK(constant_of(reports, "elliptic_mode") > 0.0);
  }

  TEST_CASE("divergence-free bilinear checks") {
    BLNormParams p;
    p.delta = 0.1;
    DivfreeOptions opt;
    opt.trunc = {4, 6};
    opt.z_samples = 4;
    const ModeFamily u = {{0, ModeProfile::constant(1.0)}};
    const ModeFamily v0;
    const ModeFamily g = {{1, ModeProfile::gaussian(1.0, 2.0, 1.0)}};
    CHECK(constant_of(divfree_bilinear(u, v0, g, p, opt), "divfree_vdyg") == 0.0);

    const ModeFamily u1 = {{1, ModeProfile::exponential(1.0, 1.0)}};
    const ModeFamily v1 = {{1, ModeProfile::constant(cplx(0, -1)) + ModeProfile::exponential(cplx(0, 1), 1.0)}};
    const ModeFamily g2 = {{1, ModeProfile::gaussian(2.0, 2.0, 1.0)}};
    const double c1 = constant_of(divfree_bilinear(u1, v1, g, p, opt), "divfree_vdyg");
    const double c2 = constant_of(divfree_bilinear(u1, v1, g2, p, opt), "divfree_vdyg");
    CHECK(c1 > 0.0);
    CHECK(c2 == doctest::Approx(c1).epsilon(1e-10));

    try {
      divfree_bilinear(u1, v0, g, p, opt);
      FAIL("expected an input error");
    } catch (const Error& e) {
      CHECK(e.kind() == ErrorKind::Input);
    }
  }

  TEST_CASE("strip norms") {
    const HoloFn e = [](cplx z) { return std::exp(cplx(0, 1) * z); };
    StripDomain d;
    d.rho = 0.5;
    d.nx = 201;
    CHECK(strip_norm(e, d) == doctest::Approx(std::exp(0.5)).epsilon(1e-12));

    // |e^{iz}|^2 = |e^{2iz}|: the product inequality is an equality here.
    const auto r = strip_norms(e, e, d);
    CHECK(r.product_ratio == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(r.derivative_constant <= 2.0);

    const HoloFn bump = [](cplx z) { return 1.0 / (1.0 + z * z); };
    const auto rb = strip_norms(bump, e, d);
    CHECK(rb.product_ratio <= 1.0 + 1e-12);
    CHECK(rb.derivative_constant <= 2.0);

    StripDomain pencil;
    pencil.pencil = true;
    pencil.nx = 401;
    const auto rp = strip_norms(bump, bump, pencil);
    CHECK(rp.product_ratio <= 1.0 + 1e-12);
    CHECK(rp.derivative_constant <= 2.0);

    const HoloFn pole = [](cplx z) { return 1.0 / z; };
    StripDomain through;
    through.nx = 3;
    through.ny = 3;
    through.x_extent = 1.0;
    CHECK_THROWS_AS(strip_norm(pole, through), Error);
  }
}
