#include <Eigen/Eigenvalues>
#include <Eigen/SVD>
#include <cmath>
#include <numbers>
#include <sstream>

#include "shearstab/errors.hpp"
#include "shearstab/ode.hpp"
#include "shearstab/quadrature.hpp"
#include "shearstab/resolvent.hpp"

namespace shearstab {

namespace {

constexpr cplx I(0.0, 1.0);

// Decay rate sqrt((lambda - a)/nu) with Re > 0, or an error when the
// spectral parameter sits on the essential spectrum of the far field.
cplx decay_rate(cplx lambda, cplx a_far, double nu) {
  const cplx k = std::sqrt((lambda - a_far) / nu);
  if (!(k.real() > 1e-12 * std::max(1.0, std::abs(k)))) {
    std::ostringstream os;
    os << "lambda=" << lambda << " gives non-decaying far-field solutions (far-field potential " << a_far << ")";
    fail(ErrorKind::EssentialSpectrum, os.str());
  }
  return k;
}

struct Psi {
  Eigen::Vector2cd plus, minus;  // (psi, psi') at the requested point
};

Eigen::Vector2cd integrate_psi(const Potential& A, cplx lambda, double nu, double from, const Eigen::Vector2cd& init,
                               double to, const ParabolicOptions& opt) {
  OdeOptions o;
  o.rtol = opt.rtol;
  o.atol = 1e-300;
  auto rhs = [&](double x, const Eigen::Vector2cd& s) {
    return Eigen::Vector2cd(s[1], (lambda - A(x)) / nu * s[0]);
  };
  return dopri5<Eigen::Vector2cd>(rhs, from, init, to, o);
}

Eigen::Vector2cd psi_plus(const Potential& A, cplx lambda, double nu, double X, double at, const ParabolicOptions& opt) {
  const cplx k = decay_rate(lambda, A(X), nu);
  return integrate_psi(A, lambda, nu, X, Eigen::Vector2cd(1.0, -k), at, opt);
}

Eigen::Vector2cd psi_minus(const Potential& A, cplx lambda, double nu, double X, double at, const ParabolicOptions& opt) {
  const cplx k = decay_rate(lambda, A(-X), nu);
  return integrate_psi(A, lambda, nu, -X, Eigen::Vector2cd(1.0, k), at, opt);
}

}  // namespace

double settle_distance(const Potential& A, const ParabolicOptions& opt) {
  if (opt.x_far > 0.0) return opt.x_far;
  for (double X = 10.0; X <= 640.0; X *= 2.0) {
    if (std::abs(A(X) - A(2.0 * X)) < 1e-10 && std::abs(A(-X) - A(-2.0 * X)) < 1e-10) return X;
  }
  fail(ErrorKind::Precondition, "potential does not settle to 1e-10 within |x| <= 640");
}

EvansEvaluation evans_matrix(const Potential& A, cplx lambda, double y, double nu, const ParabolicOptions& opt) {
  if (!(nu > 0.0)) fail(ErrorKind::Configuration, "nu must be positive");
  const double X = settle_distance(A, opt);
  if (std::abs(y) >= X) fail(ErrorKind::Configuration, "evaluation point outside the settled interval");
  const Eigen::Vector2cd p = psi_plus(A, lambda, nu, X, y, opt);
  const Eigen::Vector2cd m = psi_minus(A, lambda, nu, X, y, opt);
  EvansEvaluation ev;
  ev.lambda = lambda;
  ev.tau = -I * lambda;
  ev.M << p[0], m[0], p[1], m[1];
  ev.detM = ev.M.determinant();
  Eigen::JacobiSVD<Eigen::Matrix2cd> svd(ev.M);
  const auto sv = svd.singularValues();
  ev.cond = sv[0] > 0 ? sv[1] / sv[0] : 0.0;
  ev.flagged = sv[1] < 1e-12 * sv[0];
  ev.inv_norm = sv[1] > 0 ? 1.0 / (nu * sv[1]) : std::numeric_limits<double>::infinity();
  return ev;
}

cplx parabolic_green(const Potential& A, cplx tau, double x, double y, double nu, const ParabolicOptions& opt) {
  const cplx lambda = I * tau;
  const EvansEvaluation ev = evans_matrix(A, lambda, y, nu, opt);
  if (ev.flagged) fail(ErrorKind::Numerical, "decaying solutions are dependent: lambda is (near) an eigenvalue");
  // Continuity and the 1/nu derivative jump at x = y.
  const Eigen::Vector2cd coef = ev.M.fullPivLu().solve(Eigen::Vector2cd(0.0, 1.0 / nu));
  const cplx b = coef[0], a = -coef[1];
  const double X = settle_distance(A, opt);
  if (std::abs(x) >= X) fail(ErrorKind::Configuration, "evaluation point outside the settled interval");
  if (x >= y) return b * psi_plus(A, lambda, nu, X, x, opt)[0];
  return a * psi_minus(A, lambda, nu, X, x, opt)[0];
}

namespace {

struct BoundarySample {
  cplx lambda;
  cplx D;
};

cplx corner(const Region& r, int k) {
  switch (k % 4) {
    case 0: return {r.re_lo, r.im_lo};
    case 1: return {r.re_hi, r.im_lo};
    case 2: return {r.re_hi, r.im_hi};
    default: return {r.re_lo, r.im_hi};
  }
}

}  // namespace

EvansLocateResult evans_locate(const Potential& A, const Region& region, double nu, const ParabolicOptions& opt) {
  if (!(region.re_hi > region.re_lo) || !(region.im_hi > region.im_lo)) {
    fail(ErrorKind::Configuration, "region must have positive width and height");
  }
  auto D = [&](cplx lam) { return evans_matrix(A, lam, 0.0, nu, opt).detM; };

  // Counterclockwise boundary with adaptive phase tracking.
  std::vector<BoundarySample> samples;
  double total_arg = 0.0;
  for (int e = 0; e < 4; ++e) {
    const cplx z0 = corner(region, e), z1 = corner(region, e + 1);
    const int base = 32;
    double s_prev = 0.0;
    cplx d_prev = samples.empty() ? D(z0) : samples.back().D;
    if (samples.empty()) samples.push_back({z0, d_prev});
    for (int i = 1; i <= base; ++i) {
      double target = static_cast<double>(i) / base;
      // Subdivide until the phase step is below pi/8.
      std::vector<double> pending{target};
      while (!pending.empty()) {
        const double s = pending.back();
        const cplx lam = z0 + s * (z1 - z0);
        const cplx d = D(lam);
        const double step = std::arg(d / d_prev);
        if (std::abs(step) > std::numbers::pi / 8 && s - s_prev > 1e-9) {
          pending.push_back(0.5 * (s_prev + s));
          continue;
        }
        total_arg += step;
        samples.push_back({lam, d});
        d_prev = d;
        s_prev = s;
        pending.pop_back();
      }
    }
  }
  double dmax = 0.0, dmin = std::numeric_limits<double>::infinity();
  for (const auto& s : samples) {
    dmax = std::max(dmax, std::abs(s.D));
    dmin = std::min(dmin, std::abs(s.D));
  }
  EvansLocateResult out;
  out.boundary_samples = static_cast<int>(samples.size());
  out.boundary_min_ratio = dmax > 0 ? dmin / dmax : 0.0;
  if (out.boundary_min_ratio < 1e-10) {
    fail(ErrorKind::Region, "det M nearly vanishes on the region boundary; perturb the rectangle");
  }
  const double w = total_arg / (2.0 * std::numbers::pi);
  out.winding = static_cast<int>(std::lround(w));
  if (std::abs(w - out.winding) > 0.05) {
    fail(ErrorKind::Region, "argument principle did not return an integer winding number");
  }
  if (out.winding <= 0) return out;

  // Power sums s_p = (1/2 pi i) \oint lambda^p D'/D, p = 1..k.
  const int k = out.winding;
  const GaussRule& g = gauss_legendre(16);
  std::vector<cplx> sums(k + 1, 0.0);
  const double scale = std::max({std::abs(region.re_hi - region.re_lo), std::abs(region.im_hi - region.im_lo)});
  const double h = 1e-6 * scale;
  for (int e = 0; e < 4; ++e) {
    const cplx z0 = corner(region, e), z1 = corner(region, e + 1);
    const int panels = 16;
    for (int p = 0; p < panels; ++p) {
      for (std::size_t q = 0; q < g.nodes.size(); ++q) {
        const double s = (p + 0.5 * (g.nodes[q] + 1.0)) / panels;
        const cplx lam = z0 + s * (z1 - z0);
        const cplx dD = (D(lam + h) - D(lam - h)) / (2.0 * h);
        const cplx ratio = dD / D(lam) * (z1 - z0) * (0.5 * g.weights[q] / panels);
        cplx pw = 1.0;
        for (int m = 0; m <= k; ++m) {
          sums[m] += pw * ratio;
          pw *= lam;
        }
      }
    }
  }
  for (auto& s : sums) s /= 2.0 * std::numbers::pi * I;
  // Newton identities -> monic polynomial -> companion eigenvalues.
  std::vector<cplx> e(k + 1, 0.0);
  e[0] = 1.0;
  for (int m = 1; m <= k; ++m) {
    cplx acc = 0.0;
    for (int i = 1; i <= m; ++i) acc += ((i % 2) ? 1.0 : -1.0) * e[m - i] * sums[i];
    e[m] = acc / static_cast<double>(m);
  }
  Eigen::MatrixXcd C = Eigen::MatrixXcd::Zero(k, k);
  for (int i = 1; i < k; ++i) C(i, i - 1) = 1.0;
  for (int i = 0; i < k; ++i) C(i, k - 1) = ((k - i) % 2 ? 1.0 : -1.0) * e[k - i];
  Eigen::ComplexEigenSolver<Eigen::MatrixXcd> es(C);
  for (int i = 0; i < k; ++i) {
    cplx z = es.eigenvalues()[i];
    for (int it = 0; it < 30; ++it) {
      const cplx hz = 1e-7 * std::max(1.0, std::abs(z));
      const cplx d0 = D(z);
      const cplx dz = (D(z + hz) - D(z - hz)) / (2.0 * hz);
      const cplx step = d0 / dz;
      z -= step;
      if (std::abs(step) < 1e-13 * std::max(1.0, std::abs(z))) break;
    }
    out.zeros.push_back(z);
  }
  return out;
}

}  // namespace shearstab
