#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <complex>
#include <numbers>

// Independent reference computations used by the tests.
namespace oracle {

using cplx = std::complex<double>;

// Taylor series with scaling and squaring.
inline Eigen::MatrixXcd expm(const Eigen::MatrixXcd& A, double t) {
  Eigen::MatrixXcd M = A * t;
  const double norm = M.cwiseAbs().rowwise().sum().maxCoeff();
  int squarings = 0;
  if (norm > 0.5) squarings = static_cast<int>(std::ceil(std::log2(norm / 0.5)));
  M /= std::pow(2.0, squarings);
  Eigen::MatrixXcd term = Eigen::MatrixXcd::Identity(A.rows(), A.cols());
  Eigen::MatrixXcd sum = term;
  for (int k = 1; k <= 30; ++k) {
    term = term * M / static_cast<double>(k);
    sum += term;
  }
  for (int s = 0; s < squarings; ++s) sum = sum * sum;
  return sum;
}

inline double heat_gaussian(double t, double d, double nu) {
  return std::exp(-d * d / (4.0 * nu * t)) / std::sqrt(4.0 * std::numbers::pi * nu * t);
}

// f''' + f f''/2 = 0 by fixed-step RK4; returns f'(eta_max).
inline double blasius_fp_end(double s, double eta_max, int steps) {
  double y[3] = {0.0, 0.0, s};
  const double h = eta_max / steps;
  auto f = [](const double* v, double* d) {
    d[0] = v[1];
    d[1] = v[2];
    d[2] = -0.5 * v[0] * v[2];
  };
  for (int i = 0; i < steps; ++i) {
    double k1[3], k2[3], k3[3], k4[3], tmp[3];
    f(y, k1);
    for (int j = 0; j < 3; ++j) tmp[j] = y[j] + 0.5 * h * k1[j];
    f(tmp, k2);
    for (int j = 0; j < 3; ++j) tmp[j] = y[j] + 0.5 * h * k2[j];
    f(tmp, k3);
    for (int j = 0; j < 3; ++j) tmp[j] = y[j] + h * k3[j];
    f(tmp, k4);
    for (int j = 0; j < 3; ++j) y[j] += h / 6.0 * (k1[j] + 2 * k2[j] + 2 * k3[j] + k4[j]);
  }
  return y[1];
}

// Bisection on f''(0) with step halving until two resolutions agree.
inline double blasius_fpp0(double tol) {
  double prev = 0.0;
  for (int steps = 500;; steps *= 2) {
    double lo = 0.1, hi = 1.0;
    while (hi - lo > tol * 0.01) {
      const double mid = 0.5 * (lo + hi);
      (blasius_fp_end(mid, 10.0, steps) < 1.0 ? lo : hi) = mid;
    }
    const double s = 0.5 * (lo + hi);
    if (steps > 500 && std::abs(s - prev) < tol) return s;
    prev = s;
    if (steps > 64000) return s;
  }
}

}  // namespace oracle
