#include <algorithm>
#include <cmath>
#include <random>

#include "shearstab/genfunc.hpp"
#include "shearstab/sweep.hpp"

namespace shearstab {

namespace {

ModeFamily random_family(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> amp(-1.0, 1.0), center(0.5, 3.0), width(0.5, 2.0);
  ModeFamily f;
  for (int a = -2; a <= 2; ++a) {
    const double c = center(rng), w = width(rng);
    f.emplace(a, ModeProfile::gaussian(cplx(amp(rng), amp(rng)), c, w));
  }
  return f;
}

double relative_spread(const std::vector<double>& v) {
  const double base = v.front();
  double worst = 0.0;
  for (double x : v) worst = std::max(worst, std::abs(x - base) / std::max(std::abs(base), 1e-300));
  return worst;
}

InequalityReport make(std::string name, int samples, double constant, bool pass) {
  InequalityReport r;
  r.inequality = std::move(name);
  r.samples = samples;
  r.measured_constant = constant;
  r.pass = pass && std::isfinite(constant);
  return r;
}

}  // namespace

std::vector<InequalityReport> genfunc_corpus(const CorpusOptions& opt) {
  std::vector<InequalityReport> out;
  BLNormParams params;
  params.delta = 0.1;
  const YGrid grid = YGrid::for_params(params);
  const Truncation trunc{8, 12};

  // Product inequality with C0 = 1.
  std::mt19937_64 rng(opt.seed);
  std::vector<std::pair<ModeFamily, ModeFamily>> pairs;
  for (int s = 0; s < opt.samples; ++s) {
    ModeFamily f = random_family(rng);
    ModeFamily g = random_family(rng);
    pairs.emplace_back(std::move(f), std::move(g));
  }
  std::vector<double> worst(pairs.size(), 0.0);
  std::vector<double> dz1_err(pairs.size(), 0.0);
  parallel_for(pairs.size(), true, [&](std::size_t i) {
    const auto& [f, g] = pairs[i];
    const GenSeries lhs = gen_series(family_product(f, g), params, trunc, NormFlavor::WithBL, grid);
    const GenSeries f0 = gen_series(f, params, trunc, NormFlavor::WithoutBL, grid);
    const GenSeries gd = gen_series(g, params, trunc, NormFlavor::WithBL, grid);
    for (int a = 0; a <= 5; ++a) {
      for (int b = 0; b <= 5; ++b) {
        const double z1 = 0.1 * a, z2 = 0.1 * b;
        worst[i] = std::max(worst[i], lhs(z1, z2) / (f0(z1, z2) * gd(z1, z2)));
      }
    }
    const GenSeries dx = gen_series(family_dx(f), params, trunc, NormFlavor::WithBL, grid);
    const GenSeries fd = gen_series(f, params, trunc, NormFlavor::WithBL, grid).dz1();
    for (std::size_t r = 0; r < fd.keys().size(); ++r) {
      for (int l = 0; l <= trunc.n_ell; ++l) {
        const double ref = fd.coeffs()(static_cast<Eigen::Index>(r), l);
        const double err = std::abs(dx.coeff(fd.keys()[r], l) - ref) / std::max(ref, 1e-300);
        dz1_err[i] = std::max(dz1_err[i], ref == 0.0 ? dx.coeff(fd.keys()[r], l) : err);
      }
    }
  });
  const double c0 = *std::max_element(worst.begin(), worst.end());
  out.push_back(make("product", opt.samples * 36, c0, c0 <= 1.0 + 1e-12));
  const double dz1 = *std::max_element(dz1_err.begin(), dz1_err.end());
  out.push_back(make("dz1_identity", opt.samples, dz1, dz1 <= 1e-12));

  // Laplace bundle over alpha = 1..32.
  {
    const auto f = [](double y) { return cplx(std::exp(-(y - 1.0) * (y - 1.0))); };
    double lo = INFINITY, hi = 0.0;
    for (int a = 1; a <= 32; ++a) {
      const LaplaceSolution s = laplace_solve_1d(a, f, params, grid, false);
      const double r = (s.norms.alpha2_phi_00 + s.norms.alpha_dphi_00 + s.norms.d2phi_00) / s.norms.f_00;
      lo = std::min(lo, r);
      hi = std::max(hi, r);
    }
    out.push_back(make("laplace_bundle", 32, hi / lo, hi / lo < 20.0));
  }

  // Elliptic estimates for a boundary-layer vorticity.
  {
    ModeFamily omega;
    omega.emplace(1, ModeProfile::exponential(1.0 / params.delta, 1.0 / params.delta));
    EllipticOptions base;
    auto reports = elliptic_gen_estimate(omega, params, base);
    if (opt.stability) {
      EllipticOptions tr = base, gr = base;
      tr.trunc.n_ell *= 2;
      gr.refine = 1;
      const auto r2 = elliptic_gen_estimate(omega, params, tr);
      const auto r3 = elliptic_gen_estimate(omega, params, gr);
      for (std::size_t i = 0; i < reports.size(); ++i) {
        const double spread = relative_spread(
            {reports[i].measured_constant, r2[i].measured_constant, r3[i].measured_constant});
        reports[i].pass = reports[i].pass && spread <= 0.1;
      }
    }
    out.insert(out.end(), reports.begin(), reports.end());
  }

  // Divergence-free bilinear estimates.
  {
    ModeFamily u, v, g;
    u.emplace(1, ModeProfile::exponential(1.0, 1.0));
    v.emplace(1, ModeProfile::constant(cplx(0.0, -1.0)) + ModeProfile::exponential(cplx(0.0, 1.0), 1.0));
    g.emplace(1, ModeProfile::gaussian(1.0, 2.0, 1.0));
    DivfreeOptions base;
    auto reports = divfree_bilinear(u, v, g, params, base);
    if (opt.stability) {
      DivfreeOptions tr = base, gr = base;
      tr.trunc.n_ell *= 2;
      gr.refine = 1;
      const auto r2 = divfree_bilinear(u, v, g, params, tr);
      const auto r3 = divfree_bilinear(u, v, g, params, gr);
      for (std::size_t i = 0; i < reports.size(); ++i) {
        const double spread = relative_spread(
            {reports[i].measured_constant, r2[i].measured_constant, r3[i].measured_constant});
        reports[i].pass = reports[i].pass && spread <= 0.1;
      }
    }
    out.insert(out.end(), reports.begin(), reports.end());
  }

  // Strip and pencil norms.
  {
    const std::vector<HoloFn> fs{[](cplx z) { return std::exp(cplx(0.0, 1.0) * z); },
                                 [](cplx z) { return 1.0 / (z * z + 4.0); },
                                 [](cplx z) { return std::sin(z) * std::exp(-z * z / 10.0); }};
    StripDomain strip;
    StripDomain pencil;
    pencil.pencil = true;
    double cs = 0.0, cp = 0.0, prod = 0.0;
    for (const auto& f : fs) {
      for (const auto& g : fs) {
        const StripReport r = strip_norms(f, g, strip);
        cs = std::max(cs, r.derivative_constant);
        prod = std::max(prod, r.product_ratio);
      }
      cp = std::max(cp, strip_norms(f, f, pencil).derivative_constant);
    }
    out.push_back(make("strip_cauchy", static_cast<int>(fs.size()), cs, cs <= 2.0));
    out.push_back(make("strip_product", static_cast<int>(fs.size() * fs.size()), prod, prod <= 1.0 + 1e-12));
    out.push_back(make("pencil_cauchy", static_cast<int>(fs.size()), cp, cp <= 2.0));
  }
  return out;
}

}  // namespace shearstab
