#pragma once

#include <Eigen/Dense>
#include <complex>
#include <vector>

namespace shearstab {

using cplx = std::complex<double>;

struct PencilEigen {
  std::vector<cplx> values;  // finite eigenvalues only
  Eigen::MatrixXcd vectors;  // matching right eigenvectors (columns), if requested
  int infinite = 0;          // count of discarded beta = 0 eigenvalues
};

// A x = c B x through LAPACK zggev. Throws Numerical on LAPACK failure.
PencilEigen solve_pencil(const Eigen::MatrixXcd& A, const Eigen::MatrixXcd& B, bool want_vectors);

// ||(A - cB)x|| / ((||A||_F + |c| ||B||_F) ||x||)
double backward_error(const Eigen::MatrixXcd& A, const Eigen::MatrixXcd& B, cplx c, const Eigen::VectorXcd& x);

}  // namespace shearstab
