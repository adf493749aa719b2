#include <algorithm>
#include <cmath>

#include "shearstab/errors.hpp"
#include "shearstab/instability.hpp"

namespace shearstab {

namespace {

using Mat = Eigen::MatrixXcd;
using Vec = Eigen::VectorXcd;

double inv_laplacian(int k, int l, double aspect) {
  const double kk = k * aspect;
  const double d = kk * kk + static_cast<double>(l) * l;
  return d == 0.0 ? 0.0 : -1.0 / d;
}

// Convolution with U_hat (or U''_hat), truncated to |l| <= M.
Mat shear_matrix(const ShearFourier& U, int M, int derivative) {
  Mat C = Mat::Zero(2 * M + 1, 2 * M + 1);
  for (int l = -M; l <= M; ++l) {
    for (const auto& [m, u] : U) {
      const int src = l - m;
      if (std::abs(src) > M) continue;
      const cplx w = derivative == 2 ? -static_cast<double>(m) * m * u : u;
      C(l + M, src + M) += w;
    }
  }
  return C;
}

Mat block(const ShearFourier& U, double aspect, int k, int M) {
  if (k == 0) return Mat::Zero(2 * M + 1, 2 * M + 1);
  Mat psi = Mat::Zero(2 * M + 1, 2 * M + 1);
  for (int l = -M; l <= M; ++l) psi(l + M, l + M) = inv_laplacian(k, l, aspect);
  const cplx ika(0.0, k * aspect);
  return ika * (shear_matrix(U, M, 0) - shear_matrix(U, M, 2) * psi);
}

double wiener(const TorusField& f) {
  double s = 0.0;
  for (const auto& [k, v] : f) s += v.cwiseAbs().sum();
  return s;
}

double gen_norm(const TorusField& f, int M, double z) {
  double s = 0.0;
  for (const auto& [k, v] : f) {
    for (int l = -M; l <= M; ++l) s += std::abs(v[l + M]) * std::exp(z * (std::abs(k) + std::abs(l)));
  }
  return s;
}

void accumulate(TorusField& out, int k, const Vec& v) {
  auto it = out.find(k);
  if (it == out.end()) {
    out.emplace(k, v);
  } else {
    it->second += v;
  }
}

// -(u . grad) omega with u = grad^perp Delta^{-1} w.
TorusField transport(const TorusField& w, const TorusField& omega, double aspect, int M) {
  TorusField out;
  for (const auto& [k1, wv] : w) {
    Vec u(2 * M + 1), v(2 * M + 1);
    for (int l = -M; l <= M; ++l) {
      const cplx psi = inv_laplacian(k1, l, aspect) * wv[l + M];
      u[l + M] = cplx(0.0, -l) * psi;
      v[l + M] = cplx(0.0, k1 * aspect) * psi;
    }
    for (const auto& [k2, ov] : omega) {
      Vec r = Vec::Zero(2 * M + 1);
      const cplx ikx(0.0, k2 * aspect);
      for (int l1 = -M; l1 <= M; ++l1) {
        if (u[l1 + M] == 0.0 && v[l1 + M] == 0.0) continue;
        for (int l2 = -M; l2 <= M; ++l2) {
          const int l = l1 + l2;
          if (std::abs(l) > M) continue;
          r[l + M] -= (u[l1 + M] * ikx + v[l1 + M] * cplx(0.0, l2)) * ov[l2 + M];
        }
      }
      accumulate(out, k1 + k2, r);
    }
  }
  return out;
}

}  // namespace

ShearFourier kolmogorov_profile() { return {{-1, 0.5}, {1, 0.5}}; }

cplx euler_eigenvalue(const ShearFourier& U, double aspect, int k, int modes, Eigen::VectorXcd* mode) {
  if (!(aspect > 0.0) || modes < 1 || k == 0) fail(ErrorKind::Configuration, "invalid Euler truncation");
  const Mat L = block(U, aspect, k, modes);
  Eigen::ComplexEigenSolver<Mat> es(-L, mode != nullptr);
  if (es.info() != Eigen::Success) fail(ErrorKind::Numerical, "eigensolve of the linearized Euler block failed");
  Eigen::Index best = 0;
  for (Eigen::Index i = 1; i < es.eigenvalues().size(); ++i) {
    if (es.eigenvalues()[i].real() > es.eigenvalues()[best].real()) best = i;
  }
  const cplx lam = es.eigenvalues()[best];
  if (!(lam.real() > 1e-10)) {
    fail(ErrorKind::NotUnstable, "linearized Euler operator has no unstable eigenvalue on this truncation");
  }
  if (mode) {
    Vec v = es.eigenvectors().col(best);
    Eigen::Index imax = 0;
    v.cwiseAbs().maxCoeff(&imax);
    v *= std::abs(v[imax]) / v[imax];
    *mode = v / v.cwiseAbs().maxCoeff();
  }
  return lam;
}

EulerSeriesReport euler_series(const ShearFourier& U, const EulerOptions& opt) {
  if (opt.order < 1) fail(ErrorKind::Configuration, "Euler order must be at least 1");
  const int M = opt.modes;
  EulerSeriesReport rep;
  Vec v;
  const cplx alpha = euler_eigenvalue(U, opt.aspect, 1, M, &v);
  rep.eigenvalue = alpha;
  rep.eigen_residual = ((alpha * Mat::Identity(2 * M + 1, 2 * M + 1) + block(U, opt.aspect, 1, M)) * v).norm() /
                       v.norm();
  const bool real_mode = std::abs(alpha.imag()) <= 1e-10 * std::abs(alpha);
  TorusField w1;
  if (real_mode) {
    Vec vm(2 * M + 1);
    for (int l = -M; l <= M; ++l) vm[l + M] = std::conj(v[-l + M]);
    w1.emplace(1, 0.5 * v);
    w1.emplace(-1, 0.5 * vm);
  } else {
    w1.emplace(1, v);
  }
  rep.omega.push_back(w1);
  for (int n = 2; n <= opt.order; ++n) {
    TorusField rhs;
    for (int j = 1; j <= n - 1; ++j) {
      for (const auto& [k, r] : transport(rep.omega[j - 1], rep.omega[n - j - 1], opt.aspect, M)) {
        accumulate(rhs, k, r);
      }
    }
    const cplx shift = alpha * static_cast<double>(n);
    TorusField wn;
    for (const auto& [k, r] : rhs) {
      const Mat S = shift * Mat::Identity(2 * M + 1, 2 * M + 1) + block(U, opt.aspect, k, M);
      Eigen::JacobiSVD<Mat> svd(S, Eigen::ComputeThinU | Eigen::ComputeThinV);
      const auto& sv = svd.singularValues();
      if (sv[sv.size() - 1] < 1e-12 * std::max(1.0, sv[0])) {
        fail(ErrorKind::Resonance, "n alpha + L singular at n = " + std::to_string(n) + ", k = " + std::to_string(k));
      }
      wn.emplace(k, svd.solve(r));
    }
    const double rn = wiener(rhs);
    rep.h1_ratios.push_back(rn > 0.0 ? std::abs(shift) * wiener(wn) / rn : 0.0);
    rep.omega.push_back(wn);
  }
  for (const auto& w : rep.omega) {
    rep.wiener_norms.push_back(wiener(w));
    rep.gen_norms.push_back(gen_norm(w, M, opt.z));
  }
  const double s = 0.01;
  TorusField sum;
  for (int n = 1; n <= opt.order; ++n) {
    TorusField term;
    for (const auto& [k, w] : rep.omega[n - 1]) accumulate(sum, k, std::pow(s, n) * w);
    if (n >= 2) {
      for (const auto& [k, w] : rep.omega[n - 1]) term.emplace(k, std::pow(s, n) * w);
      const double total = wiener(sum);
      rep.partial_sum_change.push_back(total > 0.0 ? wiener(term) / total : 0.0);
    }
  }
  return rep;
}

}  // namespace shearstab
