#include <algorithm>
#include <cmath>
#include <numbers>

#include "shearstab/errors.hpp"
#include "shearstab/instability.hpp"

namespace shearstab {

TrigPoly TrigPoly::cosine(int k, double amp) {
  TrigPoly p(std::abs(k));
  p[k] += 0.5 * amp;
  p[-k] += 0.5 * amp;
  return p;
}

TrigPoly TrigPoly::sine(int k, double amp) {
  TrigPoly p(std::abs(k));
  p[k] += cplx(0.0, -0.5 * amp);
  p[-k] += cplx(0.0, 0.5 * amp);
  return p;
}

TrigPoly TrigPoly::derivative(int order) const {
  TrigPoly d = *this;
  const int K = bandwidth();
  for (int k = -K; k <= K; ++k) d[k] *= std::pow(cplx(0.0, k), order);
  return d;
}

TrigPoly TrigPoly::operator*(const TrigPoly& o) const {
  const int K1 = bandwidth(), K2 = o.bandwidth();
  TrigPoly p(K1 + K2);
  for (int a = -K1; a <= K1; ++a) {
    const cplx ca = (*this)[a];
    if (ca == 0.0) continue;
    for (int b = -K2; b <= K2; ++b) p[a + b] += ca * o[b];
  }
  return p;
}

TrigPoly TrigPoly::operator+(const TrigPoly& o) const {
  const int K = std::max(bandwidth(), o.bandwidth());
  TrigPoly p(K);
  for (int k = -K; k <= K; ++k) p[k] = (*this)[k] + o[k];
  return p;
}

TrigPoly TrigPoly::scaled(double s) const {
  TrigPoly p = *this;
  for (cplx& c : p.c_) c *= s;
  return p;
}

double TrigPoly::operator()(double z) const {
  const int K = bandwidth();
  cplx s = 0.0;
  for (int k = -K; k <= K; ++k) s += (*this)[k] * std::exp(cplx(0.0, k * z));
  return s.real();
}

double TrigPoly::sup_norm() const {
  const int n = std::max(2048, 8 * bandwidth());
  double m = 0.0;
  for (int i = 0; i < n; ++i) m = std::max(m, std::abs((*this)(2.0 * std::numbers::pi * i / n)));
  return m;
}

bool TrigPoly::is_zero() const {
  return std::all_of(c_.begin(), c_.end(), [](const cplx& c) { return c == 0.0; });
}

HopfSeries hopf_series(const TrigPoly& u1, double alpha, int N) {
  if (!(alpha > 0.0)) fail(ErrorKind::Configuration, "Hopf growth rate alpha must be positive");
  if (N < 1) fail(ErrorKind::Configuration, "Hopf order must be at least 1");
  HopfSeries s;
  s.alpha = alpha;
  s.u.push_back(u1);
  std::vector<TrigPoly> du{u1.derivative()};
  for (int n = 2; n <= N; ++n) {
    TrigPoly acc;
    for (int k = 1; k <= n - 1; ++k) acc = acc + s.u[k - 1] * du[n - k - 1];
    s.u.push_back(acc.scaled(-1.0 / ((n - 1) * alpha)));
    du.push_back(s.u.back().derivative());
  }
  // Residual on a physical grid, independent of the coefficient arithmetic.
  const int Z = std::max(2048, 8 * s.u.back().bandwidth());
  std::vector<std::vector<double>> val(N, std::vector<double>(Z)), dval(N, std::vector<double>(Z));
  for (int n = 0; n < N; ++n) {
    for (int i = 0; i < Z; ++i) {
      const double z = 2.0 * std::numbers::pi * i / Z;
      val[n][i] = s.u[n](z);
      dval[n][i] = du[n](z);
    }
  }
  for (int n = 2; n <= N; ++n) {
    double worst = 0.0;
    for (int i = 0; i < Z; ++i) {
      double r = (n - 1) * alpha * val[n - 1][i];
      for (int k = 1; k <= n - 1; ++k) r += val[k - 1][i] * dval[n - k - 1][i];
      worst = std::max(worst, std::abs(r));
    }
    s.residuals.push_back(worst);
  }
  for (const auto& u : s.u) s.sup_norms.push_back(u.sup_norm());
  for (int n = 5; n < N; ++n) {
    if (s.sup_norms[n - 1] > 0.0) s.ratio_bound = std::max(s.ratio_bound, s.sup_norms[n] / s.sup_norms[n - 1]);
  }
  return s;
}

namespace {

// d^{dz}/dz^{dz} of sum_{l <= M} norms[l] z^l / l!
double gen_from_norms(const std::vector<double>& norms, int M, double z, int dz) {
  double s = 0.0, term = 1.0;
  for (int l = dz; l <= M && l < static_cast<int>(norms.size()); ++l) {
    s += norms[l] * term;
    term *= z / (l - dz + 1);
  }
  return s;
}

std::vector<double> derivative_norms(const TrigPoly& f, int M) {
  std::vector<double> n;
  for (int l = 0; l <= M; ++l) n.push_back(f.derivative(l).sup_norm());
  return n;
}

double gen_full(const TrigPoly& f, double z) {
  double s = 0.0, term = 1.0;
  for (int l = 0; l < 400; ++l) {
    const double t = f.derivative(l).sup_norm() * term;
    s += t;
    if (l > 2 && t <= 1e-17 * s) return s;
    term *= z / (l + 1);
  }
  fail(ErrorKind::WindowTooNarrow, "Gen(u1) series not converged on the window");
}

}  // namespace

double gen_trunc(const TrigPoly& f, int M, double z, int dz) {
  if (M < 0) return 0.0;
  return gen_from_norms(derivative_norms(f, M), M, z, dz);
}

double hopf_partial_residual(const HopfSeries& series, double s) {
  const int N = static_cast<int>(series.u.size());
  TrigPoly r;
  for (int k = 1; k <= N; ++k) {
    for (int kk = N + 1 - k; kk <= N; ++kk) {
      r = r + (series.u[k - 1] * series.u[kk - 1].derivative()).scaled(std::pow(s, k + kk));
    }
  }
  return r.sup_norm();
}

HopfMajorantReport hopf_majorant(const HopfSeries& series, const HopfMajorantOptions& opt) {
  const int N = static_cast<int>(series.u.size());
  const double alpha = series.alpha;
  if (N < 1) fail(ErrorKind::Input, "empty Hopf series");
  if (!(opt.eta0 > 0.0)) fail(ErrorKind::WindowTooNarrow, "eta0 must be positive");
  HopfMajorantReport rep;
  rep.N = N;
  rep.eta0 = opt.eta0;
  rep.M0 = gen_full(series.u[0], opt.eta0);
  if (!std::isfinite(rep.M0)) fail(ErrorKind::WindowTooNarrow, "Gen(u1) not finite on [0, eta0]");
  if (!(rep.M0 > 0.0)) fail(ErrorKind::Precondition, "u1 must be nonzero");
  rep.T = opt.t_max > 0.0 ? opt.t_max : alpha * opt.eta0 / (6.0 * rep.M0);

  std::vector<std::vector<double>> norms(N);
  for (int k = 1; k <= N; ++k) norms[k - 1] = derivative_norms(series.u[k - 1], N - k);
  const auto G = [&](double t, double z, int dt, int dz) {
    double s = 0.0;
    for (int k = 1 + dt; k <= N; ++k) {
      const double tp = (dt ? (k - 1) : 1) * std::pow(t, k - 1 - dt);
      s += gen_from_norms(norms[k - 1], N - k, z, dz) * tp;
    }
    return s;
  };

  for (int i = 0; i < opt.t_samples; ++i) {
    const double t = rep.T * i / std::max(1, opt.t_samples - 1);
    for (int j = 0; j < opt.z_samples; ++j) {
      const double z = opt.eta0 * j / std::max(1, opt.z_samples - 1);
      const double r = alpha * G(t, z, 1, 0) - G(t, z, 0, 0) * G(t, z, 0, 1);
      rep.inequality_residual = std::max(rep.inequality_residual, r);
    }
  }

  const double dphi = -3.0 * rep.M0 / (alpha * opt.eta0);
  const auto phi = [&](double t) { return 1.0 + dphi * t; };
  rep.phi_at_T = phi(rep.T);
  const auto H = [&](double t, double x) { return G(t, phi(t) * x, 0, 0); };
  const auto velocity = [&](double t, double x) { return -(H(t, x) + alpha * x * dphi) / (alpha * phi(t)); };
  const double dt = rep.T / opt.rk4_steps;
  for (int c = 1; c <= opt.characteristics; ++c) {
    double x = opt.eta0 * c / (opt.characteristics + 1);
    double K = H(0.0, x);
    rep.max_K = std::max(rep.max_K, K);
    for (int s = 0; s < opt.rk4_steps; ++s) {
      const double t = s * dt;
      const double k1 = velocity(t, x);
      const double k2 = velocity(t + 0.5 * dt, x + 0.5 * dt * k1);
      const double k3 = velocity(t + 0.5 * dt, x + 0.5 * dt * k2);
      const double k4 = velocity(t + dt, x + dt * k3);
      x += dt / 6.0 * (k1 + 2 * k2 + 2 * k3 + k4);
      if (x < 0.0 || x > opt.eta0) break;
      const double Kn = H(t + dt, x);
      rep.max_K_increase = std::max(rep.max_K_increase, Kn - K);
      rep.max_K = std::max(rep.max_K, Kn);
      K = Kn;
    }
  }

  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  const int pts = 9;
  for (int i = 0; i < pts; ++i) {
    const double s = std::pow(10.0, -3.0 + static_cast<double>(i) / (pts - 1));
    const double t = std::log(s) / alpha;
    const double y = std::log(hopf_partial_residual(series, s));
    sx += t;
    sy += y;
    sxx += t * t;
    sxy += t * y;
  }
  rep.residual_slope = (pts * sxy - sx * sy) / (pts * sxx - sx * sx);
  return rep;
}

}  // namespace shearstab
