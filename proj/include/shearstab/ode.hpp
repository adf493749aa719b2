#pragma once

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <functional>
#include <string>
#include <vector>

#include "shearstab/errors.hpp"

namespace shearstab {

struct OdeOptions {
  double rtol = 1e-10;
  double atol = 1e-12;
  double initial_step = 0.0;  // 0 picks |t1-t0|/100
  long max_steps = 2000000;
};

// Dormand-Prince 5(4) with PI-free standard step control. Integrates in
// either direction. Vec is an Eigen column vector (real or complex).
template <class Vec, class F>
Vec dopri5(F&& f, double t0, Vec y, double t1, const OdeOptions& opt = {}) {
  if (t1 == t0) return y;
  const double dir = t1 > t0 ? 1.0 : -1.0;
  double h = opt.initial_step > 0 ? opt.initial_step : std::abs(t1 - t0) / 100.0;
  double t = t0;
  constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
  constexpr double a21 = 1.0 / 5;
  constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
  constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
  constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561,
                   a54 = -212.0 / 729;
  constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247,
                   a64 = 49.0 / 176, a65 = -5103.0 / 18656;
  constexpr double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192, b5 = -2187.0 / 6784,
                   b6 = 11.0 / 84;
  constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920,
                   e5 = -17253.0 / 339200, e6 = 22.0 / 525, e7 = -1.0 / 40;
  Vec k1 = f(t, y);
  for (long step = 0; step < opt.max_steps; ++step) {
    const double remaining = std::abs(t1 - t);
    if (remaining <= 1e-14 * std::max(1.0, std::abs(t1))) return y;
    h = std::min(h, remaining);
    const double hs = dir * h;
    const Vec k2 = f(t + c2 * hs, (y + hs * (a21 * k1)).eval());
    const Vec k3 = f(t + c3 * hs, (y + hs * (a31 * k1 + a32 * k2)).eval());
    const Vec k4 = f(t + c4 * hs, (y + hs * (a41 * k1 + a42 * k2 + a43 * k3)).eval());
    const Vec k5 = f(t + c5 * hs, (y + hs * (a51 * k1 + a52 * k2 + a53 * k3 + a54 * k4)).eval());
    const Vec k6 = f(t + hs, (y + hs * (a61 * k1 + a62 * k2 + a63 * k3 + a64 * k4 + a65 * k5)).eval());
    const Vec ynew = y + hs * (b1 * k1 + b3 * k3 + b4 * k4 + b5 * k5 + b6 * k6);
    const Vec k7 = f(t + hs, ynew);
    const Vec err = hs * (e1 * k1 + e3 * k3 + e4 * k4 + e5 * k5 + e6 * k6 + e7 * k7);
    double en = 0.0;
    for (Eigen::Index i = 0; i < y.size(); ++i) {
      const double sc = opt.atol + opt.rtol * std::max(std::abs(y[i]), std::abs(ynew[i]));
      const double r = std::abs(err[i]) / sc;
      en += r * r;
    }
    en = std::sqrt(en / std::max<Eigen::Index>(1, y.size()));
    if (!std::isfinite(en)) {
      h *= 0.25;
      if (h < 1e-300) fail(ErrorKind::Numerical, "ODE integration produced non-finite values");
      continue;
    }
    if (en <= 1.0) {
      t = (h == remaining) ? t1 : t + hs;
      y = ynew;
      k1 = k7;
    }
    const double factor = en == 0.0 ? 5.0 : std::clamp(0.9 * std::pow(en, -0.2), 0.2, 5.0);
    h *= factor;
  }
  fail(ErrorKind::NonConvergence, "ODE integration exceeded the step budget");
}

// Classical RK4 with fixed steps; used where a uniform step is wanted.
template <class Vec, class F>
Vec rk4(F&& f, double t0, Vec y, double t1, long steps) {
  const double h = (t1 - t0) / static_cast<double>(steps);
  double t = t0;
  for (long s = 0; s < steps; ++s) {
    const Vec k1 = f(t, y);
    const Vec k2 = f(t + 0.5 * h, (y + 0.5 * h * k1).eval());
    const Vec k3 = f(t + 0.5 * h, (y + 0.5 * h * k2).eval());
    const Vec k4 = f(t + h, (y + h * k3).eval());
    y += (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    t = t0 + (s + 1) * h;
  }
  return y;
}

}  // namespace shearstab
