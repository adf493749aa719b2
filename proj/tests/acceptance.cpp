#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "oracles.hpp"
#include "shearstab/errors.hpp"
#include "shearstab/genfunc.hpp"
#include "shearstab/instability.hpp"
#include "shearstab/resolvent.hpp"
#include "shearstab/stability.hpp"

using namespace shearstab;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

std::vector<double> linspace(double a, double b, int n) {
  std::vector<double> v(n);
  for (int i = 0; i < n; ++i) v[i] = n == 1 ? a : a + (b - a) * i / (n - 1);
  return v;
}

std::vector<double> logspace(double a, double b, int n) {
  std::vector<double> v = linspace(std::log(a), std::log(b), n);
  for (double& x : v) x = std::exp(x);
  return v;
}

std::string fmt(const char* f, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

Outcome heat_kernel() {
  double worst = 0.0, violation = 0.0;
  const double nu = 1.0;
  for (double t : linspace(0.1, 2.0, 21)) {
    for (double d : linspace(0.0, 2.0, 21)) {
      const auto r = heat_green(t, d, 0.0, nu);
      const double ref = oracle::heat_gaussian(t, d, nu);
      worst = std::max(worst, std::abs(r.value - ref) / ref);
      violation = std::max(violation, r.value - r.gaussian_bound);
    }
  }
  return {worst <= 1e-6 && violation <= 1e-9, fmt("max rel err %.3g, bound excess %.3g", worst, violation)};
}

Outcome semigroup() {
  std::mt19937_64 rng(20240501);
  std::normal_distribution<double> N01;
  double worst = 0.0, comp = 0.0;
  for (int s = 0; s < 50; ++s) {
    Eigen::MatrixXcd A(4, 4);
    for (int i = 0; i < 4; ++i) {
      for (int j = 0; j < 4; ++j) A(i, j) = cplx(N01(rng), N01(rng)) / 2.0;
    }
    Eigen::VectorXcd x0(4);
    for (int i = 0; i < 4; ++i) x0[i] = cplx(N01(rng), N01(rng));
    const ContourSpec c = ContourSpec::enclosing(A);
    for (double t : {0.5, 1.0, 2.0}) {
      const Eigen::VectorXcd v = semigroup_apply(A, x0, t, c).value;
      const Eigen::VectorXcd ref = oracle::expm(A, t) * x0;
      worst = std::max(worst, (v - ref).norm() / std::max(1.0, ref.norm()));
      const Eigen::VectorXcd half = semigroup_apply(A, x0, t / 2, c).value;
      const Eigen::VectorXcd twice = semigroup_apply(A, half, t / 2, c).value;
      comp = std::max(comp, (twice - v).norm() / std::max(1.0, v.norm()));
    }
  }
  return {worst <= 1e-8 && comp <= 1e-7, fmt("oracle err %.3g, composition err %.3g", worst, comp)};
}

Outcome evans() {
  const double nu = 1.0;
  const Potential A = [nu](double x) {
    const double s = 1.0 / std::cosh(x);
    return cplx(2.0 * nu * s * s);
  };
  const auto r = evans_locate(A, {0.5, 1.5, -0.5, 0.5}, nu);
  const double err = r.zeros.size() == 1 ? std::abs(r.zeros[0] - 1.0) : INFINITY;
  return {r.zeros.size() == 1 && err <= 1e-6, fmt("%zu zero(s), |lambda - 1| = %.3g", r.zeros.size(), err)};
}

Outcome rayleigh() {
  const auto expo = make_profile("exponential");
  double worst = -INFINITY;
  for (double a : {0.25, 0.5, 1.0, 2.0}) {
    const auto grid = build_grid(96, {DomainKind::HalfLine, 2.0});
    worst = std::max(worst, rayleigh_spectrum(expo, a, grid).max_growth());
  }
  const auto tanh_p = make_profile("tanh");
  const auto s1 = rayleigh_spectrum(tanh_p, 0.5, build_grid(128, {DomainKind::HalfLine, 1.0}));
  const auto s2 = rayleigh_spectrum(tanh_p, 0.5, build_grid(256, {DomainKind::HalfLine, 1.0}));
  if (s1.modes.empty() || s2.modes.empty() || s1.modes[0].c.imag() <= 0.0) {
    return {false, fmt("exponential max Im c %.3g, tanh unstable mode missing", worst)};
  }
  const double diff = std::abs(s1.modes[0].c - s2.modes[0].c);
  return {worst <= 1e-6 && diff <= 1e-6,
          fmt("exponential max Im c %.3g; tanh c = %.8f%+.8fi, doubling diff %.3g", std::max(worst, -1.0),
              s2.modes[0].c.real(), s2.modes[0].c.imag(), diff)};
}

cplx leading(const EigenSolution& s) { return s.modes.empty() ? cplx(NAN, NAN) : s.modes[0].c; }

Outcome orr_sommerfeld() {
  const auto p = make_profile("poiseuille");
  const cplx c160 = leading(os_spectrum(p, 1.0, 1e4, build_grid(160, {})));
  const cplx c320 = leading(os_spectrum(p, 1.0, 1e4, build_grid(320, {})));
  const double diff = std::abs(c160 - c320);

  const auto grid = build_grid(96, {});
  NeutralOptions opt;
  opt.scan_points = 16;
  const auto peak = [&](double Re) { return neutral_point(
      [&](double a, double R) { return os_max_growth(p, a, R, grid); }, Re, {0.7, 1.3}, opt); };
  double lo = 5000.0, hi = 6500.0;
  const bool bracketed = !peak(lo).supercritical && peak(hi).supercritical;
  while (bracketed && hi - lo > 1.0) {
    const double mid = 0.5 * (lo + hi);
    (peak(mid).supercritical ? hi : lo) = mid;
  }
  const double alpha_c = bracketed ? peak(hi).peak_alpha : NAN;
  const bool ok = diff <= 1e-5 && bracketed && alpha_c >= 0.9 && alpha_c <= 1.1;
  return {ok, fmt("c = %.10f%+.10fi, N-doubling diff %.3g; Re_c in [%.1f, %.1f], alpha_c = %.4f", c320.real(),
                  c320.imag(), diff, lo, hi, alpha_c)};
}

NeutralCurve curve(const ShearProfile& p, std::vector<double> Res, Interval window, int N, DomainSpec d) {
  NeutralOptions opt;
  opt.scan_points = 24;
  return neutral_curve(p, Res, window, build_grid(N, d), opt);
}

bool within(double slope, double target) { return std::abs(slope - target) <= 0.4 * std::abs(target); }

Outcome exponents() {
  std::ostringstream detail;
  bool ok = true;
  const auto pois = curve(make_profile("poiseuille"), logspace(1e5, 1e6, 4), {0.2, 1.1}, 256, {});
  const auto lower = fit_exponents(pois.lower, {1e5, 1e6});
  const auto upper = fit_exponents(pois.upper, {1e5, 1e6});
  ok = ok && within(lower.slope, -1.0 / 7) && within(upper.slope, -1.0 / 11);
  detail << fmt("poiseuille lower %.4f (target %.4f), upper %.4f (target %.4f)", lower.slope, -1.0 / 7,
                upper.slope, -1.0 / 11);

  const auto expo = curve(make_profile("exponential"), logspace(1e6, 1e7, 4), {0.01, 0.5}, 160,
                          {DomainKind::HalfLine, 3.0});
  const auto bl = fit_exponents(expo.lower, {1e6, 1e7});
  ok = ok && within(bl.slope, -0.25);
  detail << fmt("; exponential lower %.4f (target -0.25)", bl.slope);

  try {
    const auto blas = curve(make_profile("blasius"), logspace(1e4, 1e5, 4), {0.003, 0.5}, 128,
                            {DomainKind::HalfLine, 3.0});
    detail << fmt("; blasius upper %.4f (reported, target -0.1)", fit_exponents(blas.upper, {1e4, 1e5}).slope);
  } catch (const Error& e) {
    detail << "; blasius upper not available: " << e.what();
  }
  return {ok, detail.str()};
}

Outcome generator() {
  const auto reports = genfunc_corpus();
  bool ok = true;
  std::ostringstream detail;
  for (const auto& r : reports) {
    ok = ok && r.pass;
    detail << fmt("%s%s=%.4g%s", detail.tellp() > 0 ? ", " : "", r.inequality.c_str(), r.measured_constant,
                  r.pass ? "" : " (fail)");
  }
  return {ok, detail.str()};
}

Outcome hopf() {
  const auto s = hopf_series(TrigPoly::cosine(1), 1.0, 20);
  const TrigPoly u2 = TrigPoly::sine(2, 0.5);
  double u2_err = 0.0;
  for (int k = -s.u[1].bandwidth(); k <= s.u[1].bandwidth(); ++k) u2_err = std::max(u2_err, std::abs(s.u[1][k] - u2[k]));
  double res = 0.0;
  for (double r : s.residuals) res = std::max(res, r);
  const auto m = hopf_majorant(s);
  const bool ok = u2_err <= 1e-14 && res <= 1e-10 && m.inequality_residual <= 1e-10 && m.max_K_increase <= 1e-10;
  return {ok, fmt("u2 err %.3g, recurrence residual %.3g, majorant residual %.3g, max K increase %.3g", u2_err, res,
                  m.inequality_residual, m.max_K_increase)};
}

Outcome bootstrap() {
  const double lambda = 1.0;
  const Eigen::MatrixXcd A = Eigen::MatrixXcd::Constant(1, 1, lambda);
  const Bilinear Q = [](const Eigen::VectorXcd& a, const Eigen::VectorXcd& b) {
    return Eigen::VectorXcd(a.cwiseProduct(b));
  };
  const Eigen::VectorXcd v0 = Eigen::VectorXcd::Ones(1);
  const auto fit = escape_time_fit(A, Q, v0, 0.1, {1e-3, 1e-4, 1e-5});
  BootstrapOptions opt;
  opt.order = 5;
  const auto r = ode_bootstrap(A, Q, v0, lambda, 1e-4, opt);
  const double target = (opt.order + 1) * lambda;
  const bool ok = std::abs(fit.slope - 1.0 / lambda) <= 0.05 / lambda &&
                  std::abs(r.residual_slope - target) <= 0.05 * target && r.direct_ratio <= 2.0;
  return {ok, fmt("escape slope %.4f, residual slope %.4f (target %.1f), direct ratio %.3g", fit.slope,
                  r.residual_slope, target, r.direct_ratio)};
}

Outcome euler() {
  const auto U = kolmogorov_profile();
  const cplx l16 = euler_eigenvalue(U, 0.5, 1, 16);
  const cplx l32 = euler_eigenvalue(U, 0.5, 1, 32);
  const auto rep = euler_series(U, {});
  const double change = rep.partial_sum_change.back();
  const bool ok = std::abs(l16 - l32) <= 1e-6 && change < 0.01;
  return {ok, fmt("lambda = %.10f, doubling diff %.3g, N=3->4 change %.3g", l32.real(), std::abs(l16 - l32), change)};
}

}  // namespace

int main(int argc, char** argv) {
  const std::vector<std::pair<const char*, std::function<Outcome()>>> criteria{
      {"heat-kernel exactness", heat_kernel},
      {"semigroup oracle equivalence", semigroup},
      {"Evans eigenvalue", evans},
      {"Rayleigh criterion consistency", rayleigh},
      {"Orr-Sommerfeld quantitative", orr_sommerfeld},
      {"marginal-branch exponents", exponents},
      {"generator-inequality suite", generator},
      {"Hopf toy model", hopf},
      {"bootstrap at desk scale", bootstrap},
      {"Euler series", euler},
  };
  std::vector<int> selected;
  for (int i = 1; i < argc; ++i) selected.push_back(std::atoi(argv[i]));
  if (selected.empty()) {
    for (int i = 1; i <= 10; ++i) selected.push_back(i);
  }
  int failures = 0;
  for (int id : selected) {
    if (id < 1 || id > 10) {
      std::fprintf(stderr, "unknown criterion %d\n", id);
      return 2;
    }
    const auto& [name, run] = criteria[id - 1];
    const auto start = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = run();
    } catch (const std::exception& e) {
      o = {false, std::string("error: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    std::printf("C%d %s %s: %s [%.1f s]\n", id, o.pass ? "PASS" : "FAIL", name, o.detail.c_str(), secs);
    std::fflush(stdout);
    failures += o.pass ? 0 : 1;
  }
  return failures == 0 ? 0 : 1;
}
