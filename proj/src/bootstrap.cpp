#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <random>

#include "shearstab/errors.hpp"
#include "shearstab/instability.hpp"
#include "shearstab/ode.hpp"
#include "shearstab/quadrature.hpp"
#include "shearstab/resolvent.hpp"
#include "shearstab/sweep.hpp"

namespace shearstab {

namespace {

std::vector<double> lobatto(int P, double h) {
  std::vector<double> s(P);
  for (int m = 0; m < P; ++m) s[m] = 0.5 * h * (1.0 - std::cos(std::numbers::pi * m / (P - 1)));
  return s;
}

// Barycentric weights for Chebyshev-Lobatto nodes.
std::vector<double> lobatto_weights(int P) {
  std::vector<double> w(P);
  for (int m = 0; m < P; ++m) w[m] = ((m % 2) ? -1.0 : 1.0) * ((m == 0 || m == P - 1) ? 0.5 : 1.0);
  return w;
}

std::vector<double> interp_row(const std::vector<double>& s, const std::vector<double>& w, double x) {
  std::vector<double> row(s.size(), 0.0);
  for (std::size_t m = 0; m < s.size(); ++m) {
    if (x == s[m]) {
      row[m] = 1.0;
      return row;
    }
  }
  double den = 0.0;
  for (std::size_t m = 0; m < s.size(); ++m) {
    row[m] = w[m] / (x - s[m]);
    den += row[m];
  }
  for (double& r : row) r /= den;
  return row;
}

Eigen::MatrixXcd propagator(const Eigen::MatrixXcd& A, double t, const ContourSpec& contour) {
  const Eigen::Index n = A.rows();
  Eigen::MatrixXcd E(n, n);
  for (Eigen::Index c = 0; c < n; ++c) {
    E.col(c) = semigroup_apply(A, Eigen::VectorXcd::Unit(n, c), t, contour, false).value;
  }
  return E;
}

double energy_constant(const Eigen::MatrixXcd& A, const Bilinear& Q) {
  const Eigen::Index n = A.rows();
  const Eigen::MatrixXcd S = 0.5 * (A + A.adjoint());
  const double mu = Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd>(S).eigenvalues().maxCoeff();
  std::mt19937 rng(20240501u);
  std::normal_distribution<double> N01;
  const auto unit = [&]() {
    Eigen::VectorXcd v(n);
    for (Eigen::Index i = 0; i < n; ++i) v[i] = cplx(N01(rng), N01(rng));
    return Eigen::VectorXcd(v / v.norm());
  };
  double q = 0.0;
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < n; ++j) {
      q = std::max(q, Q(Eigen::VectorXcd::Unit(n, i), Eigen::VectorXcd::Unit(n, j)).norm());
    }
  }
  for (int s = 0; s < 400; ++s) q = std::max(q, Q(unit(), unit()).norm());
  return 2.0 * mu + 6.0 * q + 1.0;
}

Eigen::VectorXcd rhs(const Eigen::MatrixXcd& A, const Bilinear& Q, const Eigen::VectorXcd& y) {
  return A * y + Q(y, y);
}

}  // namespace

Eigen::VectorXcd BootstrapResult::phi_app(double time) const {
  if (t.empty()) fail(ErrorKind::Input, "empty bootstrap result");
  const int P = panel_nodes;
  const int panels = static_cast<int>((t.size() - 1) / (P - 1));
  int p = static_cast<int>(std::floor(time / panel_h));
  p = std::clamp(p, 0, panels - 1);
  const auto s = lobatto(P, panel_h);
  const auto row = interp_row(s, lobatto_weights(P), time - p * panel_h);
  Eigen::VectorXcd out = Eigen::VectorXcd::Zero(terms[0][0].size());
  for (int m = 0; m < P; ++m) {
    const std::size_t idx = static_cast<std::size_t>(p * (P - 1) + m);
    for (const auto& term : terms) out += row[m] * term[idx];
  }
  return out;
}

BootstrapResult ode_bootstrap(const Eigen::MatrixXcd& A, const Bilinear& Q, const Eigen::VectorXcd& v0, cplx lambda,
                              double epsilon, const BootstrapOptions& opt) {
  if (A.rows() != A.cols() || A.rows() != v0.size()) fail(ErrorKind::Input, "matrix/eigenvector size mismatch");
  if (!(lambda.real() > 0.0)) fail(ErrorKind::Precondition, "bootstrap needs Re(lambda) > 0");
  if (!(epsilon > 0.0)) fail(ErrorKind::Configuration, "epsilon must be positive");
  if (opt.order < 1 || opt.panel_nodes < 3 || !(opt.panel_width > 0.0) || opt.quad_order < 2) {
    fail(ErrorKind::Configuration, "invalid bootstrap discretization");
  }
  const double eig_res = (A * v0 - lambda * v0).norm() / v0.norm();
  if (eig_res > 1e-10) {
    fail(ErrorKind::Input, "A v0 = lambda v0 residual " + std::to_string(eig_res) + " exceeds 1e-10");
  }
  const double re = lambda.real();
  const int N = opt.order;
  const double t_max = opt.t_max > 0.0 ? opt.t_max : -std::log(epsilon) / re + 1.0;
  const int panels = std::max(1, static_cast<int>(std::ceil(t_max / opt.panel_width)));
  const double h = t_max / panels;
  const int P = opt.panel_nodes;
  const auto s = lobatto(P, h);
  const auto bw = lobatto_weights(P);
  const GaussRule& g = gauss_legendre(opt.quad_order);
  const ContourSpec contour = ContourSpec::enclosing(A);

  // Local Duhamel operators shared by all panels.
  std::vector<Eigen::MatrixXcd> Es(P);
  std::vector<std::vector<Eigen::MatrixXcd>> Ew(P, std::vector<Eigen::MatrixXcd>(g.nodes.size()));
  std::vector<std::vector<std::vector<double>>> Ip(P);
  parallel_for(static_cast<std::size_t>(P), true, [&](std::size_t m) {
    Es[m] = propagator(A, s[m], contour);
    if (m == 0) return;
    Ip[m].resize(g.nodes.size());
    for (std::size_t q = 0; q < g.nodes.size(); ++q) {
      const double sig = 0.5 * s[m] * (g.nodes[q] + 1.0);
      Ew[m][q] = (0.5 * s[m] * g.weights[q]) * propagator(A, s[m] - sig, contour);
      Ip[m][q] = interp_row(s, bw, sig);
    }
  });

  BootstrapResult r;
  r.epsilon = epsilon;
  r.lambda = lambda;
  r.order = N;
  r.panel_h = h;
  r.panel_nodes = P;
  const std::size_t M = static_cast<std::size_t>(panels * (P - 1) + 1);
  r.t.resize(M);
  for (int p = 0; p < panels; ++p) {
    for (int m = 0; m < P; ++m) r.t[static_cast<std::size_t>(p * (P - 1) + m)] = p * h + s[m];
  }
  r.t.back() = t_max;
  const Eigen::Index n = A.rows();
  r.terms.assign(N, std::vector<Eigen::VectorXcd>(M, Eigen::VectorXcd::Zero(n)));
  for (std::size_t i = 0; i < M; ++i) r.terms[0][i] = epsilon * v0 * std::exp(lambda * r.t[i]);

  const auto source = [&](int i, std::size_t idx) {
    Eigen::VectorXcd S = Eigen::VectorXcd::Zero(n);
    for (int j = 1; j < i; ++j) S += Q(r.terms[j - 1][idx], r.terms[i - j - 1][idx]);
    return S;
  };
  for (int i = 2; i <= N; ++i) {
    auto& phi = r.terms[i - 1];
    std::vector<Eigen::VectorXcd> S(M);
    for (std::size_t idx = 0; idx < M; ++idx) S[idx] = source(i, idx);
    for (int p = 0; p < panels; ++p) {
      const std::size_t base = static_cast<std::size_t>(p * (P - 1));
      for (int m = 1; m < P; ++m) {
        Eigen::VectorXcd v = Es[m] * phi[base];
        for (std::size_t q = 0; q < g.nodes.size(); ++q) {
          Eigen::VectorXcd Sq = Eigen::VectorXcd::Zero(n);
          for (int k = 0; k < P; ++k) Sq += Ip[m][q][k] * S[base + k];
          v += Ew[m][q] * Sq;
        }
        phi[base + m] = v;
      }
    }
  }

  r.residual.assign(M, Eigen::VectorXcd::Zero(n));
  std::vector<double> app_norm(M);
  for (std::size_t idx = 0; idx < M; ++idx) {
    Eigen::VectorXcd R = Eigen::VectorXcd::Zero(n), app = Eigen::VectorXcd::Zero(n);
    for (int j = 1; j <= N; ++j) {
      app += r.terms[j - 1][idx];
      for (int k = N + 1 - j; k <= N; ++k) R -= Q(r.terms[j - 1][idx], r.terms[k - 1][idx]);
    }
    r.residual[idx] = R;
    app_norm[idx] = app.norm();
  }

  r.C.assign(N, 0.0);
  for (std::size_t idx = 0; idx < M; ++idx) {
    for (int j = 1; j <= N; ++j) {
      const double scale = std::pow(epsilon, j) * std::exp(j * re * r.t[idx]);
      r.C[j - 1] = std::max(r.C[j - 1], r.terms[j - 1][idx].norm() / scale);
    }
    const double scale = std::pow(epsilon, N + 1) * std::exp((N + 1) * re * r.t[idx]);
    r.C_residual = std::max(r.C_residual, r.residual[idx].norm() / scale);
  }

  std::size_t wend = 0;
  while (wend + 1 < M && app_norm[wend + 1] <= opt.window_amplitude) ++wend;
  r.window_end = r.t[wend];
  double T0 = t_max;
  for (std::size_t idx = 0; idx < M; ++idx) {
    if (app_norm[idx] > 1.0) {
      T0 = r.t[idx];
      break;
    }
  }

  {
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    int cnt = 0;
    for (std::size_t idx = 0; idx <= wend; ++idx) {
      const double nr = r.residual[idx].norm();
      if (r.t[idx] < 0.5 * r.window_end || !(nr > 0.0)) continue;
      const double y = std::log(nr);
      sx += r.t[idx];
      sy += y;
      sxx += r.t[idx] * r.t[idx];
      sxy += r.t[idx] * y;
      ++cnt;
    }
    if (cnt >= 2) r.residual_slope = (cnt * sxy - sx * sy) / (cnt * sxx - sx * sx);
  }

  r.energy_constant = energy_constant(A, Q);
  r.energy_condition = 2.0 * (N + 1) * re > r.energy_constant;

  std::vector<double> sigmas = opt.sigma_grid;
  if (sigmas.empty()) {
    for (int k = 0; k <= 120; ++k) sigmas.push_back(0.05 * k);
  }
  std::sort(sigmas.begin(), sigmas.end());
  for (double sg : sigmas) {
    const double a = std::exp(-re * sg);
    double tail = r.C_residual * std::pow(a, N + 1);
    for (int i = 2; i <= N; ++i) tail += r.C[i - 1] * std::pow(a, i);
    const double T1 = -std::log(epsilon) / re - sg;
    if (tail <= 0.5 * a && T1 > 0.0 && T1 <= T0) {
      r.sigma = sg;
      r.sigma0 = 0.5 * a;
      r.T1 = T1;
      break;
    }
  }

  const Eigen::VectorXcd phi0 = epsilon * v0;
  r.escape_time = r.sigma ? escape_time(A, Q, phi0, r.sigma0, t_max + 10.0 / re)
                          : std::numeric_limits<double>::quiet_NaN();

  if (opt.direct_check) {
    OdeOptions oo;
    oo.rtol = 1e-13;
    oo.atol = 1e-300;
    const auto f = [&](double, const Eigen::VectorXcd& y) { return rhs(A, Q, y); };
    Eigen::VectorXcd y = phi0;
    for (std::size_t idx = 1; idx <= wend; ++idx) {
      y = dopri5(f, r.t[idx - 1], y, r.t[idx], oo);
      Eigen::VectorXcd app = Eigen::VectorXcd::Zero(n);
      for (int j = 1; j <= N; ++j) app += r.terms[j - 1][idx];
      const double excess = std::max(0.0, (y - app).norm() - 1e-11 * y.norm());
      const double bound = r.C_residual * std::pow(epsilon, N + 1) * std::exp((N + 1) * re * r.t[idx]);
      if (bound > 0.0) r.direct_ratio = std::max(r.direct_ratio, excess / bound);
    }
  }
  return r;
}

double escape_time(const Eigen::MatrixXcd& A, const Bilinear& Q, const Eigen::VectorXcd& phi0, double level,
                   double t_max) {
  if (!(level > 0.0)) fail(ErrorKind::Configuration, "escape level must be positive");
  if (phi0.norm() >= level) return 0.0;
  OdeOptions oo;
  oo.rtol = 1e-12;
  oo.atol = 1e-300;
  const auto f = [&](double, const Eigen::VectorXcd& y) { return rhs(A, Q, y); };
  const double dt = 0.05;
  double t = 0.0;
  Eigen::VectorXcd y = phi0;
  while (t < t_max) {
    const Eigen::VectorXcd next = dopri5(f, t, y, t + dt, oo);
    if (!std::isfinite(next.norm()) || next.norm() >= level) {
      double lo = 0.0, hi = dt;
      for (int it = 0; it < 60; ++it) {
        const double mid = 0.5 * (lo + hi);
        const Eigen::VectorXcd ym = dopri5(f, t, y, t + mid, oo);
        (std::isfinite(ym.norm()) && ym.norm() < level ? lo : hi) = mid;
      }
      return t + 0.5 * (lo + hi);
    }
    y = next;
    t += dt;
  }
  return std::numeric_limits<double>::quiet_NaN();
}

EscapeFit escape_time_fit(const Eigen::MatrixXcd& A, const Bilinear& Q, const Eigen::VectorXcd& v0, double level,
                          const std::vector<double>& epsilons) {
  if (epsilons.size() < 2) fail(ErrorKind::Configuration, "escape-time fit needs at least two amplitudes");
  EscapeFit fit;
  fit.epsilons = epsilons;
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (double eps : epsilons) {
    const double T = escape_time(A, Q, eps * v0, level, 50.0 * (1.0 - std::log(eps)));
    if (!std::isfinite(T)) fail(ErrorKind::NonConvergence, "direct solution never reached the escape level");
    fit.times.push_back(T);
    const double x = -std::log(eps);
    sx += x;
    sy += T;
    sxx += x * x;
    sxy += x * T;
  }
  const double m = static_cast<double>(epsilons.size());
  fit.slope = (m * sxy - sx * sy) / (m * sxx - sx * sx);
  fit.intercept = (sy - fit.slope * sx) / m;
  return fit;
}

RiccatiResult riccati_exact(double epsilon, double alpha, double phi0, double t) {
  if (!(phi0 > 0.0)) fail(ErrorKind::Configuration, "phi0 must be positive");
  if (!std::isfinite(epsilon) || !std::isfinite(alpha) || !(t >= 0.0)) {
    fail(ErrorKind::Configuration, "invalid Riccati parameters");
  }
  RiccatiResult r;
  if (alpha > 0.0) {
    r.blowup_time = epsilon == 0.0 ? 1.0 / (alpha * phi0) : std::log1p(epsilon / (alpha * phi0)) / epsilon;
    // eps < 0 with alpha phi0 <= -eps decays.
    if (epsilon < 0.0 && !(epsilon / (alpha * phi0) > -1.0)) r.blowup_time.reset();
  }
  if (alpha < 0.0 && epsilon > 0.0) r.limit = -epsilon / alpha;
  if (r.blowup_time && t >= *r.blowup_time) {
    r.blown_up = true;
    return r;
  }
  if (epsilon == 0.0) {
    r.value = phi0 / (1.0 - alpha * phi0 * t);
  } else {
    const double em1 = std::expm1(epsilon * t);
    r.value = epsilon * phi0 * (em1 + 1.0) / (epsilon - alpha * phi0 * em1);
  }
  return r;
}

}  // namespace shearstab
