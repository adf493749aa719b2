#include <algorithm>
#include <cmath>
#include <sstream>

#include "shearstab/errors.hpp"
#include "shearstab/stability.hpp"
#include "shearstab/sweep.hpp"

namespace shearstab {

namespace {

std::string trace(double Re, const std::vector<std::pair<double, double>>& scan) {
  std::ostringstream os;
  os.precision(6);
  os << "Re=" << Re << " scan:";
  for (const auto& [a, g] : scan) os << " (" << a << ", " << g << ")";
  return os.str();
}

// Bisection on g with g(neg) < 0 <= g(pos).
std::pair<double, double> bisect(const GrowthFunction& growth, double Re, double neg, double pos, double tol) {
  while (std::abs(pos - neg) > tol) {
    const double mid = 0.5 * (neg + pos);
    (growth(mid, Re) < 0.0 ? neg : pos) = mid;
  }
  return {std::min(neg, pos), std::max(neg, pos)};
}

}  // namespace

NeutralRow neutral_point(const GrowthFunction& growth, double Re, Interval window, const NeutralOptions& opt) {
  if (!(window.lo > 0.0) || !(window.hi > window.lo)) {
    fail(ErrorKind::Configuration, "alpha window must be positive and increasing");
  }
  if (opt.scan_points < 3) fail(ErrorKind::Configuration, "neutral scan needs at least 3 points");
  const int m = opt.scan_points;
  std::vector<double> a(m), g(m);
  for (int i = 0; i < m; ++i) {
    const double s = static_cast<double>(i) / (m - 1);
    a[i] = opt.log_scan ? window.lo * std::pow(window.hi / window.lo, s) : window.lo + s * (window.hi - window.lo);
  }
  parallel_for(static_cast<std::size_t>(m), opt.parallel, [&](std::size_t i) { g[i] = growth(a[i], Re); });

  NeutralRow row;
  row.Re = Re;
  for (int i = 0; i < m; ++i) row.scan.emplace_back(a[i], g[i]);
  const int imax = static_cast<int>(std::max_element(g.begin(), g.end()) - g.begin());
  double peak = a[imax], gpeak = g[imax];
  if (gpeak <= 0.0) {
    // Golden-section refinement: a narrow band can sit between scan points.
    double lo = a[std::max(imax - 1, 0)], hi = a[std::min(imax + 1, m - 1)];
    const double r = 0.5 * (std::sqrt(5.0) - 1.0);
    double x1 = hi - r * (hi - lo), x2 = lo + r * (hi - lo);
    double f1 = growth(x1, Re), f2 = growth(x2, Re);
    for (int it = 0; it < 24 && std::max(f1, f2) <= 0.0; ++it) {
      if (f1 > f2) {
        hi = x2;
        x2 = x1;
        f2 = f1;
        x1 = hi - r * (hi - lo);
        f1 = growth(x1, Re);
      } else {
        lo = x1;
        x1 = x2;
        f1 = f2;
        x2 = lo + r * (hi - lo);
        f2 = growth(x2, Re);
      }
    }
    if (std::max(f1, f2) > gpeak) {
      peak = f1 > f2 ? x1 : x2;
      gpeak = std::max(f1, f2);
    }
  }
  row.peak_alpha = peak;
  row.peak_growth = gpeak;
  if (gpeak <= 0.0) return row;
  row.supercritical = true;

  int jl = -1;
  for (int i = 0; i < m && a[i] < peak; ++i) {
    if (g[i] < 0.0) jl = i;
  }
  int ju = -1;
  for (int i = m - 1; i >= 0 && a[i] > peak; --i) {
    if (g[i] < 0.0) ju = i;
  }
  if (jl < 0 || ju < 0) {
    fail(ErrorKind::WindowTooNarrow, "unstable band not bracketed by the alpha window; " + trace(Re, row.scan));
  }
  const double pos_lo = (jl + 1 < m && a[jl + 1] < peak) ? a[jl + 1] : peak;
  const double pos_up = (ju - 1 >= 0 && a[ju - 1] > peak) ? a[ju - 1] : peak;
  const auto bl = bisect(growth, Re, a[jl], pos_lo, opt.alpha_tol);
  const auto bu = bisect(growth, Re, a[ju], pos_up, opt.alpha_tol);
  row.alpha_low = 0.5 * (bl.first + bl.second);
  row.alpha_up = 0.5 * (bu.first + bu.second);
  row.low_bracket = bl;
  row.up_bracket = bu;
  return row;
}

NeutralCurve neutral_curve(const GrowthFunction& growth, const std::vector<double>& Re_list, Interval window,
                           const NeutralOptions& opt) {
  if (Re_list.empty()) fail(ErrorKind::Configuration, "Re list is empty");
  for (std::size_t i = 0; i < Re_list.size(); ++i) {
    if (!(Re_list[i] > 0.0)) fail(ErrorKind::Configuration, "Re values must be positive");
    if (i > 0 && !(Re_list[i] > Re_list[i - 1])) fail(ErrorKind::Configuration, "Re list must be sorted ascending");
  }
  NeutralCurve curve;
  for (double Re : Re_list) {
    NeutralRow row = neutral_point(growth, Re, window, opt);
    if (row.supercritical) {
      curve.lower.points.push_back({Re, row.alpha_low, row.low_bracket.first, row.low_bracket.second});
      curve.upper.points.push_back({Re, row.alpha_up, row.up_bracket.first, row.up_bracket.second});
    }
    curve.rows.push_back(std::move(row));
  }
  return curve;
}

NeutralCurve neutral_curve(const ShearProfile& profile, const std::vector<double>& Re_list, Interval window,
                           const SpectralDiscretization& grid, const NeutralOptions& opt) {
  check_domain(profile, grid);
  const GrowthFunction g = [&](double alpha, double Re) { return os_max_growth(profile, alpha, Re, grid); };
  return neutral_curve(g, Re_list, window, opt);
}

ExponentFit fit_exponents(const NeutralBranch& branch, Interval Re_window) {
  std::vector<double> x, y;
  for (const auto& p : branch.points) {
    if (p.Re >= Re_window.lo * (1 - 1e-12) && p.Re <= Re_window.hi * (1 + 1e-12)) {
      x.push_back(std::log(p.Re));
      y.push_back(std::log(p.alpha));
    }
  }
  if (x.size() < 4) {
    fail(ErrorKind::Fit, "exponent fit needs at least 4 branch points in the Re window, got " + std::to_string(x.size()));
  }
  const double n = static_cast<double>(x.size());
  double mx = 0, my = 0;
  for (std::size_t i = 0; i < x.size(); ++i) mx += x[i], my += y[i];
  mx /= n;
  my /= n;
  double sxx = 0, sxy = 0, syy = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
    syy += (y[i] - my) * (y[i] - my);
  }
  ExponentFit fit;
  fit.points = static_cast<int>(x.size());
  fit.slope = sxy / sxx;
  fit.intercept = my - fit.slope * mx;
  fit.r2 = syy > 0 ? (sxy * sxy) / (sxx * syy) : 1.0;
  return fit;
}

}  // namespace shearstab
