#include "shearstab/linalg.hpp"

#include <cmath>
#define lapack_complex_float std::complex<float>
#define lapack_complex_double std::complex<double>
#include <lapacke.h>

#include "shearstab/errors.hpp"

namespace shearstab {

PencilEigen solve_pencil(const Eigen::MatrixXcd& A, const Eigen::MatrixXcd& B, bool want_vectors) {
  const lapack_int n = static_cast<lapack_int>(A.rows());
  Eigen::MatrixXcd a = A, b = B;
  std::vector<cplx> alpha(n), beta(n);
  Eigen::MatrixXcd vr;
  if (want_vectors) vr.resize(n, n);
  cplx dummy;
  const lapack_int info = LAPACKE_zggev(LAPACK_COL_MAJOR, 'N', want_vectors ? 'V' : 'N', n, a.data(), n,
                                        b.data(), n, alpha.data(), beta.data(), &dummy, 1,
                                        want_vectors ? vr.data() : &dummy, want_vectors ? n : 1);
  if (info != 0) {
    fail(ErrorKind::Numerical, "zggev failed with info=" + std::to_string(info) + " (n=" + std::to_string(n) +
                                   ", ||A||_F=" + std::to_string(A.norm()) + ", ||B||_F=" + std::to_string(B.norm()) + ")");
  }
  PencilEigen out;
  std::vector<int> keep;
  for (lapack_int i = 0; i < n; ++i) {
    if (std::abs(beta[i]) == 0.0) {
      ++out.infinite;
      continue;
    }
    const cplx c = alpha[i] / beta[i];
    if (!std::isfinite(c.real()) || !std::isfinite(c.imag())) {
      ++out.infinite;
      continue;
    }
    out.values.push_back(c);
    keep.push_back(static_cast<int>(i));
  }
  if (want_vectors) {
    out.vectors.resize(n, static_cast<Eigen::Index>(keep.size()));
    for (std::size_t k = 0; k < keep.size(); ++k) out.vectors.col(k) = vr.col(keep[k]);
  }
  return out;
}

double backward_error(const Eigen::MatrixXcd& A, const Eigen::MatrixXcd& B, cplx c, const Eigen::VectorXcd& x) {
  const double scale = (A.norm() + std::abs(c) * B.norm()) * x.norm();
  if (scale == 0.0) return 0.0;
  return (A * x - c * (B * x)).norm() / scale;
}

}  // namespace shearstab
