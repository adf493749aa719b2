#include "shearstab/genfunc.hpp"

#include <algorithm>
#include <cmath>

#include "shearstab/errors.hpp"
#include "shearstab/quadrature.hpp"

namespace shearstab {

BLNormParams BLNormParams::from_viscosity(double gamma0, double nu, double beta) {
  BLNormParams p;
  p.gamma0 = gamma0;
  p.delta = gamma0 * std::pow(nu, 0.25);
  p.beta = beta;
  p.validate();
  return p;
}

void BLNormParams::validate() const {
  if (!(delta > 0.0)) fail(ErrorKind::Configuration, "boundary-layer thickness delta must be positive");
  if (!(beta >= 0.0)) fail(ErrorKind::Configuration, "decay weight beta must be nonnegative");
}

const char* flavor_name(NormFlavor flavor) { return flavor == NormFlavor::WithBL ? "gen_delta" : "gen0"; }

YGrid::YGrid(double h0_, double ratio_, double h_max_, double y_max_)
    : h0(h0_), ratio(ratio_), h_max(h_max_), y_max(y_max_) {
  if (!(h0 > 0.0) || !(ratio >= 1.0) || !(h_max >= h0) || !(y_max > h0)) {
    fail(ErrorKind::Configuration, "invalid y-grid parameters");
  }
  y_.push_back(0.0);
  double h = h0;
  while (y_.back() + h < y_max) {
    y_.push_back(y_.back() + h);
    h = std::min(h * ratio, h_max);
  }
  y_.push_back(y_max);
}

YGrid YGrid::for_params(const BLNormParams& params, double y_max) {
  params.validate();
  const double h0 = params.delta / 20.0;
  return YGrid(h0, 1.04, std::max(0.02, h0), y_max);
}

YGrid YGrid::refined() const { return YGrid(0.5 * h0, std::sqrt(ratio), 0.5 * h_max, y_max); }

double bl_weight(double y, int ell, const BLNormParams& p, NormFlavor flavor) {
  double w = ell == 0 ? 1.0 : std::pow(weight_phi(y), ell);
  if (flavor == NormFlavor::WithBL) w *= p.delta / (std::exp(-y / p.delta) + p.delta);
  if (p.beta != 0.0) w *= std::exp(p.beta * y);
  return w;
}

double bl_norm(const std::vector<double>& y, const std::vector<cplx>& f, int ell, const BLNormParams& params,
               NormFlavor flavor) {
  if (y.empty() || y.size() != f.size()) fail(ErrorKind::Input, "bl_norm needs a nonempty sample");
  if (ell < 0) fail(ErrorKind::Input, "norm index must be nonnegative");
  double s = 0.0;
  for (std::size_t i = 0; i < y.size(); ++i) s = std::max(s, bl_weight(y[i], ell, params, flavor) * std::abs(f[i]));
  return s;
}

AdaptiveNorm bl_norm_adaptive(const std::function<cplx(double)>& f, int ell, const BLNormParams& params,
                              NormFlavor flavor, double y_max) {
  YGrid grid = YGrid::for_params(params, y_max);
  auto eval = [&](const YGrid& g) {
    std::vector<cplx> v(g.size());
    for (std::size_t i = 0; i < g.size(); ++i) v[i] = f(g.y()[i]);
    return bl_norm(g.y(), v, ell, params, flavor);
  };
  double prev = eval(grid);
  for (int r = 1; r <= 10; ++r) {
    grid = grid.refined();
    const double cur = eval(grid);
    if (std::abs(cur - prev) <= 1e-6 * std::max(cur, 1e-300)) return {cur, r};
    prev = cur;
  }
  fail(ErrorKind::NonConvergence, "sup norm not stable under grid refinement");
}

ModeProfile::ModeProfile(Eval eval, int max_order) : eval_(std::move(eval)), max_order_(max_order) {}

void ModeProfile::derivatives(double y, int max_order, cplx* out) const {
  if (max_order > max_order_) {
    fail(ErrorKind::Input, "derivative order " + std::to_string(max_order) + " exceeds supplied data (" +
                               std::to_string(max_order_) + ")");
  }
  if (!eval_) {
    std::fill(out, out + max_order + 1, cplx(0.0));
    return;
  }
  eval_(y, max_order, out);
}

cplx ModeProfile::value(double y) const {
  cplx v;
  derivatives(y, 0, &v);
  return v;
}

ModeProfile ModeProfile::constant(cplx c) {
  return ModeProfile([c](double, int n, cplx* out) {
    out[0] = c;
    std::fill(out + 1, out + n + 1, cplx(0.0));
  });
}

ModeProfile ModeProfile::exponential(cplx c, double rate) {
  return ModeProfile([c, rate](double y, int n, cplx* out) {
    cplx v = c * std::exp(-rate * y);
    for (int k = 0; k <= n; ++k) {
      out[k] = v;
      v *= -rate;
    }
  });
}

ModeProfile ModeProfile::gaussian(cplx amp, double center, double width) {
  return ModeProfile([amp, center, width](double y, int n, cplx* out) {
    const double u = (y - center) / width;
    const double e = std::exp(-u * u);
    // Physicists' Hermite: d^k/du^k e^{-u^2} = (-1)^k H_k(u) e^{-u^2}.
    double hm = 0.0, h = 1.0, scale = 1.0;
    for (int k = 0; k <= n; ++k) {
      out[k] = amp * (((k % 2) ? -1.0 : 1.0) * h * e * scale);
      const double hn = 2.0 * u * h - 2.0 * k * hm;
      hm = h;
      h = hn;
      scale /= width;
    }
  });
}

ModeProfile ModeProfile::operator+(const ModeProfile& o) const {
  const ModeProfile a = *this, b = o;
  return ModeProfile(
      [a, b](double y, int n, cplx* out) {
        std::vector<cplx> t(n + 1);
        a.derivatives(y, n, out);
        b.derivatives(y, n, t.data());
        for (int k = 0; k <= n; ++k) out[k] += t[k];
      },
      std::min(max_order_, o.max_order_));
}

ModeProfile ModeProfile::operator*(const ModeProfile& o) const {
  const ModeProfile a = *this, b = o;
  return ModeProfile(
      [a, b](double y, int n, cplx* out) {
        std::vector<cplx> da(n + 1), db(n + 1);
        a.derivatives(y, n, da.data());
        b.derivatives(y, n, db.data());
        for (int k = 0; k <= n; ++k) {
          cplx s = 0.0;
          double binom = 1.0;
          for (int j = 0; j <= k; ++j) {
            s += binom * da[j] * db[k - j];
            binom = binom * (k - j) / (j + 1);
          }
          out[k] = s;
        }
      },
      std::min(max_order_, o.max_order_));
}

ModeProfile ModeProfile::scaled(cplx s) const {
  const ModeProfile a = *this;
  return ModeProfile(
      [a, s](double y, int n, cplx* out) {
        a.derivatives(y, n, out);
        for (int k = 0; k <= n; ++k) out[k] *= s;
      },
      max_order_);
}

ModeProfile ModeProfile::derivative(int k) const {
  const ModeProfile a = *this;
  return ModeProfile(
      [a, k](double y, int n, cplx* out) {
        std::vector<cplx> t(n + k + 1);
        a.derivatives(y, n + k, t.data());
        std::copy(t.begin() + k, t.end(), out);
      },
      max_order_ == INT_MAX ? INT_MAX : max_order_ - k);
}

ModeFamily family_product(const ModeFamily& f, const ModeFamily& g) {
  ModeFamily out;
  for (const auto& [a, fa] : f) {
    for (const auto& [b, gb] : g) {
      const ModeProfile p = fa * gb;
      auto it = out.find(a + b);
      if (it == out.end()) {
        out.emplace(a + b, p);
      } else {
        it->second = it->second + p;
      }
    }
  }
  return out;
}

ModeFamily family_sum(const ModeFamily& f, const ModeFamily& g) {
  ModeFamily out = f;
  for (const auto& [b, gb] : g) {
    auto it = out.find(b);
    if (it == out.end()) {
      out.emplace(b, gb);
    } else {
      it->second = it->second + gb;
    }
  }
  return out;
}

ModeFamily family_dx(const ModeFamily& f) {
  ModeFamily out;
  for (const auto& [a, fa] : f) {
    if (a != 0) out.emplace(a, fa.scaled(cplx(0.0, a)));
  }
  return out;
}

ModeFamily family_dy(const ModeFamily& f) {
  ModeFamily out;
  for (const auto& [a, fa] : f) out.emplace(a, fa.derivative(1));
  return out;
}

std::vector<std::vector<cplx>> tabulate(const ModeProfile& f, const YGrid& grid, int max_order) {
  std::vector<std::vector<cplx>> table(max_order + 1, std::vector<cplx>(grid.size()));
  std::vector<cplx> d(max_order + 1);
  for (std::size_t i = 0; i < grid.size(); ++i) {
    f.derivatives(grid.y()[i], max_order, d.data());
    for (int k = 0; k <= max_order; ++k) table[k][i] = d[k];
  }
  return table;
}

GenSeries::GenSeries(NormFlavor flavor, std::vector<int> keys, Eigen::MatrixXd coeffs)
    : flavor_(flavor), keys_(std::move(keys)), coeffs_(std::move(coeffs)) {
  if (static_cast<Eigen::Index>(keys_.size()) != coeffs_.rows()) {
    fail(ErrorKind::Input, "generator series keys and coefficient rows differ");
  }
  if ((coeffs_.array() < 0.0).any()) fail(ErrorKind::Input, "generator series coefficients must be nonnegative");
}

double GenSeries::coeff(int key, int ell) const {
  for (std::size_t r = 0; r < keys_.size(); ++r) {
    if (keys_[r] == key && ell <= n_ell()) return coeffs_(static_cast<Eigen::Index>(r), ell);
  }
  return 0.0;
}

double GenSeries::partial(int a, int b, double z1, double z2) const {
  double total = 0.0;
  for (std::size_t r = 0; r < keys_.size(); ++r) {
    const double k = std::abs(keys_[r]);
    const double za = a == 0 ? 1.0 : std::pow(k, a);
    if (za == 0.0) continue;
    double s = 0.0, term = 1.0;  // z2^{l-b}/(l-b)!
    for (int l = b; l <= n_ell(); ++l) {
      s += coeffs_(static_cast<Eigen::Index>(r), l) * term;
      term *= z2 / (l - b + 1);
    }
    total += za * std::exp(z1 * k) * s;
  }
  return total;
}

GenSeries GenSeries::dz1() const {
  Eigen::MatrixXd c = coeffs_;
  for (std::size_t r = 0; r < keys_.size(); ++r) c.row(static_cast<Eigen::Index>(r)) *= std::abs(keys_[r]);
  return GenSeries(flavor_, keys_, c);
}

GenSeries GenSeries::dz2() const {
  const Eigen::Index cols = std::max<Eigen::Index>(1, coeffs_.cols() - 1);
  Eigen::MatrixXd c = Eigen::MatrixXd::Zero(coeffs_.rows(), cols);
  if (coeffs_.cols() > 1) c = coeffs_.rightCols(coeffs_.cols() - 1);
  return GenSeries(flavor_, keys_, c);
}

GenSeries gen_series(const ModeFamily& f, const BLNormParams& params, Truncation trunc, NormFlavor flavor,
                     const YGrid& grid) {
  params.validate();
  if (trunc.n_ell < 0 || trunc.n_alpha < 0) fail(ErrorKind::Configuration, "truncation must be nonnegative");
  std::vector<int> keys;
  std::vector<Eigen::VectorXd> rows;
  for (const auto& [alpha, fa] : f) {
    if (std::abs(alpha) > trunc.n_alpha) continue;
    if (trunc.n_ell > fa.max_order()) {
      fail(ErrorKind::Input, "mode " + std::to_string(alpha) + " supplies derivatives only to order " +
                                 std::to_string(fa.max_order()));
    }
    const auto table = tabulate(fa, grid, trunc.n_ell);
    Eigen::VectorXd c(trunc.n_ell + 1);
    for (int l = 0; l <= trunc.n_ell; ++l) c[l] = bl_norm(grid.y(), table[l], l, params, flavor);
    keys.push_back(alpha);
    rows.push_back(c);
  }
  Eigen::MatrixXd coeffs(static_cast<Eigen::Index>(rows.size()), trunc.n_ell + 1);
  for (std::size_t r = 0; r < rows.size(); ++r) coeffs.row(static_cast<Eigen::Index>(r)) = rows[r];
  return GenSeries(flavor, keys, coeffs);
}

GenSeries product_bound(const GenSeries& a, const GenSeries& b) {
  const int n = std::min(a.n_ell(), b.n_ell());
  std::map<int, Eigen::VectorXd> acc;
  for (std::size_t i = 0; i < a.keys().size(); ++i) {
    for (std::size_t j = 0; j < b.keys().size(); ++j) {
      const int ka = a.keys()[i], kb = b.keys()[j];
      int key = ka + kb;
      if (static_cast<long>(ka) * kb < 0) key = (key >= 0 ? 1 : -1) * (std::abs(ka) + std::abs(kb));
      Eigen::VectorXd c = Eigen::VectorXd::Zero(n + 1);
      for (int l = 0; l <= n; ++l) {
        double binom = 1.0;
        for (int m = 0; m <= l; ++m) {
          c[l] += binom * a.coeffs()(static_cast<Eigen::Index>(i), m) * b.coeffs()(static_cast<Eigen::Index>(j), l - m);
          binom = binom * (l - m) / (m + 1);
        }
      }
      auto it = acc.find(key);
      if (it == acc.end()) {
        acc.emplace(key, c);
      } else {
        it->second += c;
      }
    }
  }
  std::vector<int> keys;
  Eigen::MatrixXd coeffs(static_cast<Eigen::Index>(acc.size()), n + 1);
  Eigen::Index r = 0;
  for (const auto& [k, c] : acc) {
    keys.push_back(k);
    coeffs.row(r++) = c;
  }
  const NormFlavor flavor = (a.flavor() == NormFlavor::WithBL || b.flavor() == NormFlavor::WithBL)
                                ? NormFlavor::WithBL
                                : NormFlavor::WithoutBL;
  return GenSeries(flavor, keys, coeffs);
}

SeriesOps series_ops(const GenSeries& a, const GenSeries& b) { return {product_bound(a, b), a.dz1(), a.dz2()}; }

LaplaceSolution laplace_solve_1d(int alpha, const std::function<cplx(double)>& f, const BLNormParams& params,
                                 const YGrid& grid, bool boundary_layer_estimates) {
  params.validate();
  if (alpha == 0) fail(ErrorKind::Configuration, "Laplace solve needs a nonzero wavenumber");
  if (boundary_layer_estimates && std::abs(params.delta * alpha * alpha) > 1.0) {
    fail(ErrorKind::Precondition, "boundary-layer estimates need |delta alpha^2| <= 1 (alpha = " +
                                      std::to_string(alpha) + ", delta = " + std::to_string(params.delta) + ")");
  }
  const double a = std::abs(alpha);
  const auto& y = grid.y();
  const std::size_t M = y.size();
  const GaussRule& g = gauss_legendre(8);
  std::vector<cplx> A(M, 0.0), B(M, 0.0), IA(M - 1), IB(M - 1);
  for (std::size_t i = 0; i + 1 < M; ++i) {
    const double h = y[i + 1] - y[i];
    cplx sa = 0.0, sb = 0.0;
    for (std::size_t q = 0; q < g.nodes.size(); ++q) {
      const double x = y[i] + 0.5 * h * (g.nodes[q] + 1.0);
      const cplx fx = f(x) * (0.5 * h * g.weights[q]);
      sa += std::exp(-a * (y[i + 1] - x)) * fx;
      sb += std::exp(-a * (x - y[i])) * fx;
    }
    IA[i] = sa;
    IB[i] = sb;
  }
  for (std::size_t i = 0; i + 1 < M; ++i) A[i + 1] = std::exp(-a * (y[i + 1] - y[i])) * A[i] + IA[i];
  for (std::size_t i = M - 1; i-- > 0;) B[i] = std::exp(-a * (y[i + 1] - y[i])) * B[i + 1] + IB[i];
  LaplaceSolution s;
  s.alpha = alpha;
  s.y = y;
  s.phi.resize(M);
  s.dphi.resize(M);
  s.d2phi.resize(M);
  s.f.resize(M);
  for (std::size_t i = 0; i < M; ++i) {
    const double e = std::exp(-a * y[i]);
    s.f[i] = f(y[i]);
    s.phi[i] = -(A[i] + B[i] - e * B[0]) / (2.0 * a);
    s.dphi[i] = 0.5 * (A[i] - B[i] - e * B[0]);
    s.d2phi[i] = a * a * s.phi[i] + s.f[i];
  }
  const auto N00 = [&](const std::vector<cplx>& v) { return bl_norm(y, v, 0, params, NormFlavor::WithoutBL); };
  const auto N0d = [&](const std::vector<cplx>& v) { return bl_norm(y, v, 0, params, NormFlavor::WithBL); };
  s.norms.alpha2_phi_00 = a * a * N00(s.phi);
  s.norms.alpha_dphi_00 = a * N00(s.dphi);
  s.norms.d2phi_00 = N00(s.d2phi);
  s.norms.d2phi_0delta = N0d(s.d2phi);
  s.norms.f_00 = N00(s.f);
  s.norms.f_0delta = N0d(s.f);
  s.norms.grad_alpha_phi_00 = a * N00(s.phi) + N00(s.dphi);
  return s;
}

}  // namespace shearstab
