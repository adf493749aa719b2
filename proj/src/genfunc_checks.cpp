#include <algorithm>
#include <cmath>
#include <limits>

#include "shearstab/errors.hpp"
#include "shearstab/genfunc.hpp"

namespace shearstab {

namespace {

YGrid make_grid(const BLNormParams& params, double y_max, int refine) {
  YGrid grid = YGrid::for_params(params, y_max);
  for (int r = 0; r < refine; ++r) grid = grid.refined();
  return grid;
}

std::vector<double> samples(double max, int n, bool include_zero) {
  std::vector<double> s;
  if (include_zero) {
    for (int k = 0; k < n; ++k) s.push_back(n == 1 ? 0.0 : max * k / (n - 1));
  } else {
    for (int k = 1; k <= n; ++k) s.push_back(max * k / n);
  }
  return s;
}

double ratio(double lhs, double rhs) {
  if (lhs <= 0.0) return 0.0;
  if (rhs <= 0.0) return std::numeric_limits<double>::infinity();
  return lhs / rhs;
}

// Per-mode quantities of the elliptic estimate, l = 0..n_ell.
struct EllipticMode {
  int alpha;
  Eigen::VectorXd second;  // ||grad^2 phi||_{l,delta}
  Eigen::VectorXd first;   // ||grad phi||_{l,0}
  Eigen::VectorXd omega;   // ||d^l omega||_{l,delta}
};

EllipticMode elliptic_mode(int alpha, const ModeProfile& omega, const BLNormParams& params, const YGrid& grid,
                           int n_ell) {
  const auto f = [&](double y) { return omega.value(y); };
  const LaplaceSolution sol = laplace_solve_1d(alpha, f, params, grid, true);
  const auto w = tabulate(omega, grid, n_ell);
  const double a = std::abs(alpha), a2 = a * a;
  std::vector<std::vector<cplx>> d(n_ell + 3);
  d[0] = sol.phi;
  d[1] = sol.dphi;
  for (int n = 2; n <= n_ell + 2; ++n) {
    d[n].resize(grid.size());
    for (std::size_t i = 0; i < grid.size(); ++i) d[n][i] = a2 * d[n - 2][i] + w[n - 2][i];
  }
  EllipticMode m{alpha, Eigen::VectorXd(n_ell + 1), Eigen::VectorXd(n_ell + 1), Eigen::VectorXd(n_ell + 1)};
  const auto& y = grid.y();
  for (int l = 0; l <= n_ell; ++l) {
    const auto nd = [&](int k) { return bl_norm(y, d[k], l, params, NormFlavor::WithBL); };
    const auto n0 = [&](int k) { return bl_norm(y, d[k], l, params, NormFlavor::WithoutBL); };
    m.second[l] = a2 * nd(l) + a * nd(l + 1) + nd(l + 2);
    m.first[l] = a * n0(l) + n0(l + 1);
    m.omega[l] = bl_norm(y, w[l], l, params, NormFlavor::WithBL);
  }
  return m;
}

GenSeries series_of(const std::vector<EllipticMode>& modes, Eigen::VectorXd EllipticMode::*field, NormFlavor flavor,
                    int n_ell) {
  std::vector<int> keys;
  Eigen::MatrixXd c(static_cast<Eigen::Index>(modes.size()), n_ell + 1);
  for (std::size_t r = 0; r < modes.size(); ++r) {
    keys.push_back(modes[r].alpha);
    c.row(static_cast<Eigen::Index>(r)) = (modes[r].*field).transpose();
  }
  return GenSeries(flavor, keys, c);
}

double single(const Eigen::VectorXd& c, double z2) {
  double s = 0.0, term = 1.0;
  for (Eigen::Index l = 0; l < c.size(); ++l) {
    s += c[l] * term;
    term *= z2 / static_cast<double>(l + 1);
  }
  return s;
}

InequalityReport finish(std::string name, int count, double constant) {
  InequalityReport r;
  r.inequality = std::move(name);
  r.samples = count;
  r.measured_constant = constant;
  r.pass = std::isfinite(constant);
  return r;
}

}  // namespace

std::vector<InequalityReport> elliptic_gen_estimate(const ModeFamily& omega, const BLNormParams& params,
                                                    const EllipticOptions& options) {
  params.validate();
  if (!(options.z2_max > 0.0) || !(options.z1_max >= 0.0) || options.z_samples < 1) {
    fail(ErrorKind::Configuration, "elliptic sample window must be positive");
  }
  for (const auto& [alpha, w] : omega) {
    if (alpha == 0) fail(ErrorKind::Precondition, "elliptic estimate needs nonzero modes");
    if (std::abs(params.delta * alpha * alpha) > 1.0) {
      fail(ErrorKind::Precondition, "mode " + std::to_string(alpha) + " violates |delta alpha^2| <= 1");
    }
  }
  const int n_ell = options.trunc.n_ell;
  const YGrid grid = make_grid(params, options.y_max, options.refine);
  std::vector<EllipticMode> modes;
  for (const auto& [alpha, w] : omega) {
    if (std::abs(alpha) > options.trunc.n_alpha) continue;
    modes.push_back(elliptic_mode(alpha, w, params, grid, n_ell));
  }
  const auto z2s = samples(options.z2_max, options.z_samples, false);
  const auto z1s = samples(options.z1_max, options.z_samples, true);

  double c_mode = 0.0;
  int n_mode = 0;
  for (const auto& m : modes) {
    for (double z2 : z2s) {
      c_mode = std::max(c_mode, ratio(single(m.second, z2) + single(m.first, z2), single(m.omega, z2)));
      ++n_mode;
    }
  }

  const GenSeries grad = series_of(modes, &EllipticMode::first, NormFlavor::WithoutBL, n_ell);
  const GenSeries om = series_of(modes, &EllipticMode::omega, NormFlavor::WithBL, n_ell);
  double c_sum = 0.0, c_dz1 = 0.0, c_dz2 = 0.0;
  int n_grid = 0;
  for (double z1 : z1s) {
    for (double z2 : z2s) {
      c_sum = std::max(c_sum, ratio(grad(z1, z2), om(z1, z2)));
      c_dz1 = std::max(c_dz1, ratio(grad.partial(1, 0, z1, z2), om.partial(1, 0, z1, z2)));
      const double excess = grad.partial(0, 1, z1, z2) - om(z1, z2);
      c_dz2 = std::max(c_dz2, ratio(std::max(excess, 0.0), om.partial(0, 1, z1, z2)));
      ++n_grid;
    }
  }
  return {finish("elliptic_mode", n_mode, c_mode), finish("elliptic_sum", n_grid, c_sum),
          finish("elliptic_dz1", n_grid, c_dz1), finish("elliptic_dz2", n_grid, c_dz2)};
}

std::vector<InequalityReport> divfree_bilinear(const ModeFamily& u, const ModeFamily& v, const ModeFamily& g,
                                               const BLNormParams& params, const DivfreeOptions& options) {
  params.validate();
  if (!(options.z2_max > 0.0) || options.z2_max > 1.0 || !(options.z1_max >= 0.0) || options.z_samples < 1) {
    fail(ErrorKind::Configuration, "bilinear sample window must satisfy 0 < z2_max <= 1");
  }
  const YGrid grid = make_grid(params, options.y_max, options.refine);
  const ModeProfile zero = ModeProfile::constant(0.0);
  std::vector<int> keys;
  for (const auto& [a, p] : u) keys.push_back(a);
  for (const auto& [a, p] : v) keys.push_back(a);
  for (int alpha : keys) {
    const ModeProfile ua = u.count(alpha) ? u.at(alpha) : zero;
    const ModeProfile va = v.count(alpha) ? v.at(alpha) : zero;
    const auto ut = tabulate(ua, grid, 0);
    const auto vt = tabulate(va, grid, 1);
    double scale = 1.0;
    for (const cplx& x : ut[0]) scale = std::max(scale, std::abs(alpha) * std::abs(x));
    if (std::abs(vt[0][0]) > 1e-10 * scale) {
      fail(ErrorKind::Input, "v_" + std::to_string(alpha) + "(0) != 0");
    }
    for (std::size_t i = 0; i < grid.size(); ++i) {
      if (std::abs(vt[1][i] + cplx(0.0, alpha) * ut[0][i]) > 1e-10 * scale) {
        fail(ErrorKind::Input, "divergence residual above 1e-10 for mode " + std::to_string(alpha));
      }
    }
  }

  const Truncation t = options.trunc;
  const Truncation t2{t.n_alpha, t.n_ell + 2};
  const auto gen0 = [&](const ModeFamily& f, Truncation tr) {
    return gen_series(f, params, tr, NormFlavor::WithoutBL, grid);
  };
  const auto gend = [&](const ModeFamily& f, Truncation tr) {
    return gen_series(f, params, tr, NormFlavor::WithBL, grid);
  };
  const GenSeries lhs1 = gend(family_product(v, family_dy(g)), t);
  const GenSeries U = gen0(u, t2), V = gen0(v, t2), G = gend(g, t2);
  const ModeFamily transport = family_sum(family_product(u, family_dx(g)), family_product(v, family_dy(g)));
  const GenSeries T = gend(transport, Truncation{t.n_alpha, t.n_ell + 1});

  const auto z2s = samples(options.z2_max, options.z_samples, true);
  const auto z1s = samples(options.z1_max, options.z_samples, true);
  double c1 = 0.0, c2 = 0.0;
  int count = 0;
  for (double z1 : z1s) {
    for (double z2 : z2s) {
      const double rhs1 = (V(z1, z2) + U.partial(1, 0, z1, z2)) * G.partial(0, 1, z1, z2);
      c1 = std::max(c1, ratio(lhs1(z1, z2), rhs1));

      const double a_t = T(z1, z2) + T.partial(1, 0, z1, z2) + T.partial(0, 1, z1, z2);
      const auto p = [&](const GenSeries& s, int a, int b) { return s.partial(a, b, z1, z2); };
      const double b = p(U, 0, 0) + p(V, 0, 0) + p(U, 1, 0) + p(G, 0, 0) + p(G, 1, 0) + p(G, 0, 1);
      const double b1 = p(U, 1, 0) + p(V, 1, 0) + p(U, 2, 0) + p(G, 1, 0) + p(G, 2, 0) + p(G, 1, 1);
      const double b2 = p(U, 0, 1) + p(V, 0, 1) + p(U, 1, 1) + p(G, 0, 1) + p(G, 1, 1) + p(G, 0, 2);
      c2 = std::max(c2, ratio(a_t, b * b1 + b * b2));
      ++count;
    }
  }
  return {finish("divfree_vdyg", count, c1), finish("divfree_transport", count, c2)};
}

namespace {

template <class F>
double sup_over(const StripDomain& d, double width_scale, double beta, F&& value) {
  double best = 0.0;
  const double x0 = d.pencil ? 0.0 : -d.x_extent;
  for (int i = 0; i < d.nx; ++i) {
    const double x = x0 + (d.x_extent - x0) * i / std::max(1, d.nx - 1);
    const double half = width_scale * (d.pencil ? std::min(d.sigma * x, d.sigma * d.r) : d.rho);
    for (int j = 0; j < d.ny; ++j) {
      const double s = d.ny == 1 ? 0.0 : -half + 2.0 * half * j / (d.ny - 1);
      const double v = std::abs(value(cplx(x, s)));
      if (!std::isfinite(v)) fail(ErrorKind::Domain, "function not finite on the sampled domain");
      best = std::max(best, v * std::exp(beta * std::abs(x)));
    }
  }
  return best;
}

cplx complex_derivative(const HoloFn& f, cplx z) {
  const double h = 1e-3;
  const cplx i(0.0, 1.0);
  return (f(z + h) - f(z - h) - i * f(z + i * h) + i * f(z - i * h)) / (4.0 * h);
}

}  // namespace

double strip_norm(const HoloFn& f, const StripDomain& domain, double beta) {
  if (domain.nx < 1 || domain.ny < 1 || !(domain.x_extent > 0.0)) {
    fail(ErrorKind::Configuration, "strip sampling must be nonempty");
  }
  if (domain.pencil ? !(domain.sigma > 0.0 && domain.r > 0.0) : !(domain.rho > 0.0)) {
    fail(ErrorKind::Configuration, "strip width must be positive");
  }
  return sup_over(domain, 1.0, beta, f);
}

StripReport strip_norms(const HoloFn& f, const HoloFn& g, const StripDomain& domain, double beta,
                        double inner_fraction) {
  if (!(inner_fraction > 0.0 && inner_fraction < 1.0)) {
    fail(ErrorKind::Configuration, "inner fraction must lie in (0, 1)");
  }
  StripReport r;
  r.norm = strip_norm(f, domain, beta);
  const double gap = (1.0 - inner_fraction) * (domain.pencil ? domain.sigma : domain.rho);
  const double dnorm = sup_over(domain, inner_fraction, beta, [&](cplx z) {
    const cplx d = complex_derivative(f, z);
    return domain.pencil ? d * z / (1.0 + z) : d;
  });
  r.derivative_constant = r.norm > 0.0 ? dnorm * gap / r.norm : 0.0;
  const double gnorm = strip_norm(g, domain, beta);
  const double fg = sup_over(domain, 1.0, beta, [&](cplx z) { return f(z) * g(z); });
  r.product_ratio = (r.norm > 0.0 && gnorm > 0.0) ? fg / (r.norm * gnorm) : 0.0;
  return r;
}

}  // namespace shearstab
