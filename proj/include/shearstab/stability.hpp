#pragma once

#include <Eigen/Dense>
#include <functional>
#include <limits>
#include <vector>

#include "shearstab/linalg.hpp"
#include "shearstab/profiles.hpp"
#include "shearstab/spectral.hpp"

namespace shearstab {

struct EigenPair {
  cplx c;
  Eigen::VectorXcd phi;  // nodal values, scaled so the largest entry is 1
  double residual = 0.0;       // pencil backward error
  double tail_fraction = 0.0;  // Chebyshev tail of phi
  double bc_residual = 0.0;    // largest violation of the imposed conditions
};

struct EigenSolution {
  double alpha = 0.0;
  double reynolds = std::numeric_limits<double>::infinity();  // inf: inviscid
  std::vector<EigenPair> modes;    // accepted, Im(c) descending
  std::vector<EigenPair> flagged;  // rejected: continuous-spectrum artifacts, spurious
  bool resolution_warning = false;

  std::vector<cplx> eigenvalues() const;
  std::vector<double> residuals() const;
  // Largest Im(c) over accepted modes, -inf if none.
  double max_growth() const;
};

struct Pencil {
  Eigen::MatrixXcd A, B;
};

// (U - c)(D2 - a^2)phi = U'' phi with Dirichlet rows (B rows zeroed).
Pencil rayleigh_pencil(const ShearProfile& profile, double alpha, const SpectralDiscretization& grid);

// Coupled form in (phi, chi = (D2 - a^2)phi):
//   chi - (D2 - a^2)phi = 0
//   U chi - U'' phi - eps (D2 - a^2) chi = c chi,  eps = 1/(i a Re)
// Clamped walls (channel) or phi(0) = phi'(0) = 0, phi, chi -> 0 (half-line).
Pencil os_pencil(const ShearProfile& profile, double alpha, double Re, const SpectralDiscretization& grid);

void check_domain(const ShearProfile& profile, const SpectralDiscretization& grid);

EigenSolution rayleigh_spectrum(const ShearProfile& profile, double alpha, const SpectralDiscretization& grid);
EigenSolution os_spectrum(const ShearProfile& profile, double alpha, double Re, const SpectralDiscretization& grid);

// Eigenvalue-only OS solve (no vectors), filtered to |c| <= 10(1 + max|U|).
std::vector<cplx> os_eigenvalues(const ShearProfile& profile, double alpha, double Re,
                                 const SpectralDiscretization& grid);
double os_max_growth(const ShearProfile& profile, double alpha, double Re, const SpectralDiscretization& grid);

// N >= 4 Re^{1/4}
bool os_resolution_ok(int N, double Re);

// Solves (U - c)(D2 - a^2)phi - U'' phi = source with phi = 0 at the
// boundary nodes (source entries on those rows are ignored).
Eigen::VectorXcd rayleigh_resolvent(const ShearProfile& profile, double alpha, cplx c,
                                    const Eigen::VectorXcd& source, const SpectralDiscretization& grid);

// Neutral curves.

struct Interval {
  double lo, hi;
};

using GrowthFunction = std::function<double(double alpha, double Re)>;

struct NeutralOptions {
  int scan_points = 24;
  double alpha_tol = 1e-4;
  bool log_scan = true;
  bool parallel = true;
};

struct BranchPoint {
  double Re;
  double alpha;
  double bracket_lo, bracket_hi;  // opposite signs of max Im(c)
};

enum class BranchSide { Lower, Upper };

struct NeutralBranch {
  BranchSide side;
  std::vector<BranchPoint> points;  // ascending Re
};

struct NeutralRow {
  double Re;
  bool supercritical = false;
  double alpha_low = std::numeric_limits<double>::quiet_NaN();
  double alpha_up = std::numeric_limits<double>::quiet_NaN();
  double peak_alpha = 0.0, peak_growth = 0.0;
  std::pair<double, double> low_bracket{0.0, 0.0}, up_bracket{0.0, 0.0};
  std::vector<std::pair<double, double>> scan;  // (alpha, max Im c)
};

struct NeutralCurve {
  NeutralBranch lower{BranchSide::Lower, {}};
  NeutralBranch upper{BranchSide::Upper, {}};
  std::vector<NeutralRow> rows;
};

NeutralRow neutral_point(const GrowthFunction& growth, double Re, Interval alpha_window,
                         const NeutralOptions& options);
NeutralCurve neutral_curve(const GrowthFunction& growth, const std::vector<double>& Re_list,
                           Interval alpha_window, const NeutralOptions& options = {});
NeutralCurve neutral_curve(const ShearProfile& profile, const std::vector<double>& Re_list,
                           Interval alpha_window, const SpectralDiscretization& grid,
                           const NeutralOptions& options = {});

struct ExponentFit {
  double slope = 0.0, intercept = 0.0, r2 = 0.0;
  int points = 0;
};

// Least squares of log(alpha) on log(Re); needs >= 4 points in the window.
ExponentFit fit_exponents(const NeutralBranch& branch, Interval Re_window);

}  // namespace shearstab
