#pragma once

#include <Eigen/Dense>
#include <functional>
#include <vector>

#include "shearstab/linalg.hpp"

namespace shearstab {

enum class ContourKind { ThreeSegment, HeatParabola };

struct QuadratureSpec {
  int order = 16;          // Gauss-Legendre nodes per panel
  int initial_panels = 4;  // per segment
  int max_doublings = 14;
  double tol = 1e-10;      // successive-doubling agreement
};

// ThreeSegment: G1 = (1+i)s + P - iB (s <= 0), G2 = P + i[-B, B],
// G3 = (-1+i)s + P + iB (s >= 0). HeatParabola: lambda = nu (a + ik)^2.
struct ContourSpec {
  ContourKind kind = ContourKind::ThreeSegment;
  double P = 1.0, B = 1.0;
  double a = 0.0;
  QuadratureSpec quad;

  static ContourSpec three_segment(double P, double B);
  // P = spectral abscissa + margin, B = max |Im| + margin.
  static ContourSpec enclosing(const Eigen::MatrixXcd& A, double margin = 1.0);
  static ContourSpec heat_parabola(double a);

  // True when lambda lies strictly inside (left of) the three-segment contour.
  bool encloses(cplx lambda, double margin = 0.0) const;
};

struct SemigroupResult {
  Eigen::VectorXcd value;
  double error_estimate = 0.0;
  int nodes = 0;
};

// (1/2 pi i) \oint e^{lambda t} (lambda - A)^{-1} x0 d lambda
SemigroupResult semigroup_apply(const Eigen::MatrixXcd& A, const Eigen::VectorXcd& x0, double t,
                                const ContourSpec& contour, bool parallel = true);
SemigroupResult semigroup_apply(const Eigen::MatrixXcd& A, const Eigen::VectorXcd& x0, double t);

struct HeatGreenResult {
  double value = 0.0;
  double imag_residue = 0.0;
  double error_estimate = 0.0;
  double gaussian_bound = 0.0;  // (4 pi nu t)^{-1/2} e^{-|x-z|^2/(4 nu t)}
  int nodes = 0;
};

HeatGreenResult heat_green(double t, double x, double z, double nu, const QuadratureSpec& quad = {});

// Grid of heat_green over (t_i, dx_j); row-major by t.
std::vector<HeatGreenResult> heat_green_grid(const std::vector<double>& ts, const std::vector<double>& dxs,
                                             double nu, bool parallel = true);

// Scalar potential A(x) of the operator nu d_x^2 + A.
using Potential = std::function<cplx(double)>;

struct ParabolicOptions {
  double x_far = 0.0;  // 0: first X in 10, 20, 40, ... where A has settled to 1e-10
  double rtol = 1e-11;
};

struct EvansEvaluation {
  cplx lambda;
  cplx tau;  // lambda = i tau
  Eigen::Matrix2cd M;  // [[psi+, psi-], [psi+', psi-']] at the reference point
  cplx detM;
  double cond = 0.0;      // sigma_min / sigma_max
  double inv_norm = 0.0;  // ||nu^{-1} M^{-1}||
  bool flagged = false;   // sigma_min < 1e-12 ||M||
};

double settle_distance(const Potential& A, const ParabolicOptions& opt);

EvansEvaluation evans_matrix(const Potential& A, cplx lambda, double y, double nu,
                             const ParabolicOptions& opt = {});

// Green function of (nu d^2 + A - lambda) at lambda = i tau:
// continuous at x = y with derivative jump +1/nu. For A = 0 this is
// -(1/(2 sqrt(lambda nu))) e^{-|x-y| sqrt(lambda/nu)}.
cplx parabolic_green(const Potential& A, cplx tau, double x, double y, double nu,
                     const ParabolicOptions& opt = {});

struct Region {
  double re_lo, re_hi, im_lo, im_hi;
};

struct EvansLocateResult {
  int winding = 0;
  std::vector<cplx> zeros;
  double boundary_min_ratio = 0.0;  // min |D| / max |D| on the boundary
  int boundary_samples = 0;
};

// Eigenvalues of nu d^2 + A inside the region (zeros of det M at y = 0).
EvansLocateResult evans_locate(const Potential& A, const Region& region, double nu,
                               const ParabolicOptions& opt = {});

}  // namespace shearstab
