#include "shearstab/stability.hpp"

#include <algorithm>
#include <cmath>

#include "shearstab/errors.hpp"

namespace shearstab {

namespace {

constexpr double kResidualGate = 1e-6;
constexpr double kTailGate = 1e-3;

Eigen::VectorXd sample(const ShearProfile& p, const SpectralDiscretization& g, int order) {
  Eigen::VectorXd v(g.size());
  for (int j = 0; j < g.size(); ++j) {
    const double z = g.nodes[j];
    v[j] = order == 0 ? p.U(z) : order == 1 ? p.dU(z) : p.d2U(z);
  }
  return v;
}

// Constraint row scaled to the operator's largest entry so that QZ
// backward errors do not swamp the boundary conditions.
void set_constraint(Pencil& P, Eigen::Index row, const Eigen::RowVectorXcd& r, double scale) {
  const double m = r.cwiseAbs().maxCoeff();
  P.A.row(row) = r * (scale / m);
  P.B.row(row).setZero();
}

Eigen::RowVectorXcd embed(const Eigen::RowVectorXd& r, Eigen::Index offset, Eigen::Index total) {
  Eigen::RowVectorXcd out = Eigen::RowVectorXcd::Zero(total);
  out.segment(offset, r.size()) = r.cast<cplx>();
  return out;
}

void normalize(Eigen::VectorXcd& phi) {
  Eigen::Index k = 0;
  phi.cwiseAbs().maxCoeff(&k);
  if (std::abs(phi[k]) > 0.0) phi /= phi[k];
}

void sort_by_growth(std::vector<EigenPair>& v) {
  std::stable_sort(v.begin(), v.end(), [](const EigenPair& a, const EigenPair& b) {
    if (a.c.imag() != b.c.imag()) return a.c.imag() > b.c.imag();
    return a.c.real() < b.c.real();
  });
}

double bc_violation(const Eigen::VectorXcd& phi, const std::vector<Eigen::RowVectorXd>& rows) {
  double v = 0.0;
  for (const auto& r : rows) v += std::abs((r.cast<cplx>() * phi)(0));
  return v;
}

}  // namespace

std::vector<cplx> EigenSolution::eigenvalues() const {
  std::vector<cplx> out;
  for (const auto& m : modes) out.push_back(m.c);
  return out;
}

std::vector<double> EigenSolution::residuals() const {
  std::vector<double> out;
  for (const auto& m : modes) out.push_back(m.residual);
  return out;
}

double EigenSolution::max_growth() const {
  return modes.empty() ? -std::numeric_limits<double>::infinity() : modes.front().c.imag();
}

void check_domain(const ShearProfile& profile, const SpectralDiscretization& grid) {
  if (profile.domain() != grid.domain.kind) {
    fail(ErrorKind::Configuration, std::string("profile domain ") + domain_kind_name(profile.domain()) +
                                       " does not match grid domain " + domain_kind_name(grid.domain.kind));
  }
}

Pencil rayleigh_pencil(const ShearProfile& profile, double alpha, const SpectralDiscretization& grid) {
  if (!(alpha > 0.0)) fail(ErrorKind::Configuration, "alpha must be positive");
  check_domain(profile, grid);
  const int n = grid.size();
  const Eigen::VectorXd U = sample(profile, grid, 0), U2 = sample(profile, grid, 2);
  const Eigen::MatrixXd L = grid.D2 - alpha * alpha * Eigen::MatrixXd::Identity(n, n);
  Pencil P;
  P.A = (U.asDiagonal() * L).cast<cplx>();
  P.A.diagonal() -= U2.cast<cplx>();
  P.B = L.cast<cplx>();
  const double scale = P.A.cwiseAbs().maxCoeff();
  for (const auto& c : constraints({BCKind::Dirichlet}, grid)) {
    set_constraint(P, c.row, constraint_row(c, grid).cast<cplx>(), scale);
  }
  return P;
}

Pencil os_pencil(const ShearProfile& profile, double alpha, double Re, const SpectralDiscretization& grid) {
  if (!(alpha > 0.0) || !(Re > 0.0)) fail(ErrorKind::Configuration, "alpha and Re must be positive");
  check_domain(profile, grid);
  const int n = grid.size(), N = grid.N;
  const Eigen::VectorXd U = sample(profile, grid, 0), U2 = sample(profile, grid, 2);
  const Eigen::MatrixXcd L = (grid.D2 - alpha * alpha * Eigen::MatrixXd::Identity(n, n)).cast<cplx>();
  const cplx eps = 1.0 / (cplx(0.0, alpha) * Re);
  Pencil P;
  P.A = Eigen::MatrixXcd::Zero(2 * n, 2 * n);
  P.B = Eigen::MatrixXcd::Zero(2 * n, 2 * n);
  P.A.block(0, 0, n, n) = -L;
  P.A.block(0, n, n, n).diagonal().setOnes();
  P.A.block(n, 0, n, n).diagonal() = -U2.cast<cplx>();
  P.A.block(n, n, n, n) = -eps * L;
  P.A.block(n, n, n, n).diagonal() += U.cast<cplx>();
  P.B.block(n, n, n, n).diagonal().setOnes();

  const double scale = P.A.cwiseAbs().maxCoeff();
  auto unit = [&](int idx) {
    Eigen::RowVectorXd r = Eigen::RowVectorXd::Zero(n);
    r[idx] = 1.0;
    return r;
  };
  if (grid.domain.kind == DomainKind::Channel) {
    set_constraint(P, 0, embed(unit(0), 0, 2 * n), scale);
    set_constraint(P, N, embed(unit(N), 0, 2 * n), scale);
    set_constraint(P, n + 0, embed(grid.D1.row(0), 0, 2 * n), scale);
    set_constraint(P, n + N, embed(grid.D1.row(N), 0, 2 * n), scale);
  } else {
    set_constraint(P, N, embed(unit(N), 0, 2 * n), scale);
    set_constraint(P, n + N, embed(grid.D1.row(N), 0, 2 * n), scale);
    set_constraint(P, 0, embed(unit(0), 0, 2 * n), scale);
    set_constraint(P, n + 0, embed(unit(0), n, 2 * n), scale);
  }
  return P;
}

bool os_resolution_ok(int N, double Re) { return N >= 4.0 * std::pow(Re, 0.25); }

EigenSolution rayleigh_spectrum(const ShearProfile& profile, double alpha, const SpectralDiscretization& grid) {
  const Pencil P = rayleigh_pencil(profile, alpha, grid);
  const PencilEigen eig = solve_pencil(P.A, P.B, true);
  const int n = grid.size();
  const std::vector<Eigen::RowVectorXd> bc_rows = {constraint_row({0, 0, 0}, grid),
                                                  constraint_row({grid.N, 0, grid.N}, grid)};
  EigenSolution sol;
  sol.alpha = alpha;
  for (std::size_t k = 0; k < eig.values.size(); ++k) {
    EigenPair m;
    m.c = eig.values[k];
    const Eigen::VectorXcd x = eig.vectors.col(static_cast<Eigen::Index>(k));
    m.residual = backward_error(P.A, P.B, m.c, x);
    m.phi = x.head(n);
    normalize(m.phi);
    m.tail_fraction = chebyshev_tail_fraction(m.phi);
    m.bc_residual = bc_violation(m.phi, bc_rows);
    const bool ok = m.residual <= kResidualGate && m.tail_fraction < kTailGate;
    (ok ? sol.modes : sol.flagged).push_back(std::move(m));
  }
  sort_by_growth(sol.modes);
  sort_by_growth(sol.flagged);
  return sol;
}

namespace {

double speed_bound(const ShearProfile& profile, const SpectralDiscretization& grid) {
  return 10.0 * (1.0 + sample(profile, grid, 0).cwiseAbs().maxCoeff());
}

}  // namespace

EigenSolution os_spectrum(const ShearProfile& profile, double alpha, double Re, const SpectralDiscretization& grid) {
  const Pencil P = os_pencil(profile, alpha, Re, grid);
  const PencilEigen eig = solve_pencil(P.A, P.B, true);
  const int n = grid.size(), N = grid.N;
  std::vector<Eigen::RowVectorXd> bc_rows;
  auto unit = [&](int idx) {
    Eigen::RowVectorXd r = Eigen::RowVectorXd::Zero(n);
    r[idx] = 1.0;
    return r;
  };
  bc_rows.push_back(unit(N));
  bc_rows.push_back(grid.D1.row(N));
  bc_rows.push_back(unit(0));
  if (grid.domain.kind == DomainKind::Channel) bc_rows.push_back(grid.D1.row(0));
  const double bound = speed_bound(profile, grid);
  EigenSolution sol;
  sol.alpha = alpha;
  sol.reynolds = Re;
  sol.resolution_warning = !os_resolution_ok(N, Re);
  for (std::size_t k = 0; k < eig.values.size(); ++k) {
    EigenPair m;
    m.c = eig.values[k];
    const Eigen::VectorXcd x = eig.vectors.col(static_cast<Eigen::Index>(k));
    m.residual = backward_error(P.A, P.B, m.c, x);
    m.phi = x.head(n);
    normalize(m.phi);
    m.tail_fraction = chebyshev_tail_fraction(m.phi);
    m.bc_residual = bc_violation(m.phi, bc_rows);
    const bool ok = m.residual <= kResidualGate && std::abs(m.c) <= bound;
    (ok ? sol.modes : sol.flagged).push_back(std::move(m));
  }
  sort_by_growth(sol.modes);
  sort_by_growth(sol.flagged);
  return sol;
}

std::vector<cplx> os_eigenvalues(const ShearProfile& profile, double alpha, double Re,
                                 const SpectralDiscretization& grid) {
  const Pencil P = os_pencil(profile, alpha, Re, grid);
  const PencilEigen eig = solve_pencil(P.A, P.B, false);
  const double bound = speed_bound(profile, grid);
  std::vector<cplx> out;
  for (const cplx& c : eig.values) {
    if (std::abs(c) <= bound) out.push_back(c);
  }
  std::sort(out.begin(), out.end(), [](cplx a, cplx b) { return a.imag() > b.imag(); });
  return out;
}

double os_max_growth(const ShearProfile& profile, double alpha, double Re, const SpectralDiscretization& grid) {
  const auto ev = os_eigenvalues(profile, alpha, Re, grid);
  if (ev.empty()) fail(ErrorKind::Numerical, "Orr-Sommerfeld solve returned no finite eigenvalues");
  return ev.front().imag();
}

Eigen::VectorXcd rayleigh_resolvent(const ShearProfile& profile, double alpha, cplx c,
                                    const Eigen::VectorXcd& source, const SpectralDiscretization& grid) {
  if (source.size() != grid.size()) fail(ErrorKind::Input, "source length does not match the grid");
  const Pencil P = rayleigh_pencil(profile, alpha, grid);
  for (int j = 0; j < grid.size(); ++j) {
    const double gap = std::abs(profile.U(grid.nodes[j]) - c);
    if (gap < 1e-8) {
      fail(ErrorKind::CriticalLayer, "|U(z) - c| = " + std::to_string(gap) + " at node z = " +
                                         std::to_string(grid.nodes[j]));
    }
  }
  const Eigen::MatrixXcd M = P.A - c * P.B;
  Eigen::VectorXcd rhs = source;
  for (const auto& con : constraints({BCKind::Dirichlet}, grid)) rhs[con.row] = 0.0;
  Eigen::PartialPivLU<Eigen::MatrixXcd> lu(M);
  return lu.solve(rhs);
}

}  // namespace shearstab
