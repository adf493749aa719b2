#pragma once

#include <Eigen/Dense>
#include <vector>

#include "shearstab/profiles.hpp"

namespace shearstab {

struct DomainSpec {
  DomainKind kind = DomainKind::Channel;
  double map_scale = 2.0;  // half-line only: y = L(1+xi)/(1-xi)
};

// Chebyshev-Gauss-Lobatto collocation. Node j is cos(j pi/N) mapped to the
// physical domain, so node 0 is the upper wall (channel) or y = inf
// (half-line) and node N is z = -1 or y = 0.
struct SpectralDiscretization {
  int N = 0;
  DomainSpec domain;
  Eigen::VectorXd xi;     // computational nodes in [-1, 1]
  Eigen::VectorXd nodes;  // physical nodes
  Eigen::VectorXd dxi_dz; // chain-rule factor (0 at y = inf)
  Eigen::MatrixXd D1, D2, D4;

  int size() const { return N + 1; }
};

SpectralDiscretization build_grid(int N, DomainSpec domain);

struct DiffMatrices {
  Eigen::MatrixXd D1, D2, D4;
};
DiffMatrices diff_matrices(const SpectralDiscretization& grid);

// Plain Chebyshev matrix on [-1, 1] with the negative-sum diagonal.
Eigen::MatrixXd cheb_matrix(int N);

enum class BCKind { Dirichlet, Clamped, Decay };

// One constraint: value (order 0) or first derivative (order 1) at a node.
struct Constraint {
  int node;
  int order;
  int row;  // operator row replaced by the constraint
};

// Dirichlet: value at both ends (half-line: y = 0 and the decay node y = inf).
// Clamped: value and derivative at each wall; on the half-line value and
// derivative at y = 0 plus value and derivative decay at infinity.
// Decay: value at y = inf only (half-line).
struct BCSpec {
  BCKind kind = BCKind::Dirichlet;
};

std::vector<Constraint> constraints(const BCSpec& bc, const SpectralDiscretization& grid);

// Row of the constraint functional (unit vector or a D1 row).
Eigen::RowVectorXd constraint_row(const Constraint& c, const SpectralDiscretization& grid);

// Replaces boundary rows by constraint rows. operator_order must equal the
// number of constraints (2 or 4).
Eigen::MatrixXd apply_bc(const Eigen::MatrixXd& op, int operator_order, const BCSpec& bc,
                         const SpectralDiscretization& grid);
Eigen::MatrixXcd apply_bc(const Eigen::MatrixXcd& op, int operator_order, const BCSpec& bc,
                          const SpectralDiscretization& grid);

// Chebyshev coefficients of nodal values (index k multiplies T_k(xi)).
Eigen::VectorXcd chebyshev_coefficients(const Eigen::VectorXcd& values);

// Fraction of coefficient 2-norm carried by modes k > 2N/3.
double chebyshev_tail_fraction(const Eigen::VectorXcd& values);

// Barycentric evaluation of the nodal interpolant at computational xi.
std::complex<double> interpolate_xi(const SpectralDiscretization& grid, const Eigen::VectorXcd& values,
                                    double xi);

// Physical -> computational coordinate.
double to_xi(const SpectralDiscretization& grid, double z);

}  // namespace shearstab
