#include "shearstab/spectral.hpp"

#include <cmath>
#include <limits>
#include <numbers>

#include "shearstab/errors.hpp"

namespace shearstab {

Eigen::MatrixXd cheb_matrix(int N) {
  const double pi = std::numbers::pi;
  Eigen::VectorXd x(N + 1), c(N + 1);
  for (int j = 0; j <= N; ++j) {
    x[j] = std::sin(pi * (N - 2.0 * j) / (2.0 * N));
    c[j] = ((j == 0 || j == N) ? 2.0 : 1.0) * ((j % 2) ? -1.0 : 1.0);
  }
  Eigen::MatrixXd D = Eigen::MatrixXd::Zero(N + 1, N + 1);
  for (int i = 0; i <= N; ++i) {
    for (int j = 0; j <= N; ++j) {
      if (i == j) continue;
      // x_i - x_j via the product formula avoids cancellation.
      const double dx = 2.0 * std::sin((i + j) * pi / (2.0 * N)) * std::sin((j - i) * pi / (2.0 * N));
      D(i, j) = (c[i] / c[j]) / dx;
    }
  }
  for (int i = 0; i <= N; ++i) D(i, i) = -D.row(i).sum();
  return D;
}

SpectralDiscretization build_grid(int N, DomainSpec domain) {
  if (N < 2) fail(ErrorKind::Configuration, "spectral degree N must be at least 2");
  if (domain.kind == DomainKind::Torus) {
    fail(ErrorKind::Configuration, "torus domains use the Fourier-Galerkin path, not collocation");
  }
  if (domain.kind == DomainKind::HalfLine && !(domain.map_scale > 0.0)) {
    fail(ErrorKind::Configuration, "half-line map scale must be positive");
  }
  SpectralDiscretization g;
  g.N = N;
  g.domain = domain;
  g.xi.resize(N + 1);
  g.nodes.resize(N + 1);
  g.dxi_dz.resize(N + 1);
  for (int j = 0; j <= N; ++j) {
    g.xi[j] = std::sin(std::numbers::pi * (N - 2.0 * j) / (2.0 * N));
  }
  g.xi[0] = 1.0;
  g.xi[N] = -1.0;
  const double L = domain.map_scale;
  for (int j = 0; j <= N; ++j) {
    const double xi = g.xi[j];
    if (domain.kind == DomainKind::Channel) {
      g.nodes[j] = xi;
      g.dxi_dz[j] = 1.0;
    } else {
      g.nodes[j] = j == 0 ? std::numeric_limits<double>::infinity() : L * (1.0 + xi) / (1.0 - xi);
      g.dxi_dz[j] = (1.0 - xi) * (1.0 - xi) / (2.0 * L);
    }
  }
  g.nodes[N] = domain.kind == DomainKind::Channel ? -1.0 : 0.0;
  const Eigen::MatrixXd Dxi = cheb_matrix(N);
  g.D1 = g.dxi_dz.asDiagonal() * Dxi;
  g.D2 = g.D1 * g.D1;
  g.D4 = g.D2 * g.D2;
  return g;
}

DiffMatrices diff_matrices(const SpectralDiscretization& grid) { return {grid.D1, grid.D2, grid.D4}; }

std::vector<Constraint> constraints(const BCSpec& bc, const SpectralDiscretization& grid) {
  const int N = grid.N;
  switch (bc.kind) {
    case BCKind::Dirichlet: return {{0, 0, 0}, {N, 0, N}};
    case BCKind::Clamped: return {{0, 0, 0}, {0, 1, 1}, {N, 1, N - 1}, {N, 0, N}};
    case BCKind::Decay:
      if (grid.domain.kind != DomainKind::HalfLine) {
        fail(ErrorKind::Configuration, "decay-at-infinity needs a half-line domain");
      }
      return {{0, 0, 0}};
  }
  return {};
}

Eigen::RowVectorXd constraint_row(const Constraint& c, const SpectralDiscretization& grid) {
  const int n = grid.size();
  if (c.order == 0) {
    Eigen::RowVectorXd r = Eigen::RowVectorXd::Zero(n);
    r[c.node] = 1.0;
    return r;
  }
  // At y = inf the physical derivative row vanishes identically; a decaying
  // mode is flat in xi there, so the xi-derivative is constrained instead.
  if (grid.dxi_dz[c.node] == 0.0) return cheb_matrix(grid.N).row(c.node);
  return grid.D1.row(c.node);
}

namespace {

template <class Mat>
Mat apply_bc_impl(const Mat& op, int operator_order, const BCSpec& bc, const SpectralDiscretization& grid) {
  if (op.rows() != grid.size() || op.cols() != grid.size()) {
    fail(ErrorKind::Configuration, "operator size does not match the grid");
  }
  const auto cs = constraints(bc, grid);
  if (static_cast<int>(cs.size()) != operator_order) {
    fail(ErrorKind::Configuration, "boundary condition supplies " + std::to_string(cs.size()) +
                                       " constraints for an operator of order " +
                                       std::to_string(operator_order));
  }
  Mat out = op;
  for (const auto& c : cs) out.row(c.row) = constraint_row(c, grid).template cast<typename Mat::Scalar>();
  return out;
}

}  // namespace

Eigen::MatrixXd apply_bc(const Eigen::MatrixXd& op, int operator_order, const BCSpec& bc,
                         const SpectralDiscretization& grid) {
  return apply_bc_impl(op, operator_order, bc, grid);
}

Eigen::MatrixXcd apply_bc(const Eigen::MatrixXcd& op, int operator_order, const BCSpec& bc,
                          const SpectralDiscretization& grid) {
  return apply_bc_impl(op, operator_order, bc, grid);
}

Eigen::VectorXcd chebyshev_coefficients(const Eigen::VectorXcd& values) {
  const int N = static_cast<int>(values.size()) - 1;
  Eigen::VectorXcd a = Eigen::VectorXcd::Zero(N + 1);
  for (int k = 0; k <= N; ++k) {
    std::complex<double> s = 0.0;
    for (int j = 0; j <= N; ++j) {
      const double w = (j == 0 || j == N) ? 0.5 : 1.0;
      s += w * values[j] * std::cos(std::numbers::pi * static_cast<double>((static_cast<long>(j) * k) % (2 * N)) / N);
    }
    a[k] = s * (2.0 / N) * ((k == 0 || k == N) ? 0.5 : 1.0);
  }
  return a;
}

double chebyshev_tail_fraction(const Eigen::VectorXcd& values) {
  const Eigen::VectorXcd a = chebyshev_coefficients(values);
  const int N = static_cast<int>(a.size()) - 1;
  const int cut = (2 * N) / 3;
  const double total = a.norm();
  if (total == 0.0) return 0.0;
  return a.tail(N - cut).norm() / total;
}

std::complex<double> interpolate_xi(const SpectralDiscretization& grid, const Eigen::VectorXcd& values,
                                    double xi) {
  const int N = grid.N;
  std::complex<double> num = 0.0;
  double den = 0.0;
  for (int j = 0; j <= N; ++j) {
    const double d = xi - grid.xi[j];
    if (d == 0.0) return values[j];
    const double w = ((j % 2) ? -1.0 : 1.0) * ((j == 0 || j == N) ? 0.5 : 1.0) / d;
    num += w * values[j];
    den += w;
  }
  return num / den;
}

double to_xi(const SpectralDiscretization& grid, double z) {
  if (grid.domain.kind == DomainKind::Channel) return z;
  if (std::isinf(z)) return 1.0;
  const double L = grid.domain.map_scale;
  return (z - L) / (z + L);
}

}  // namespace shearstab
