#pragma once

#include <Eigen/Dense>
#include <climits>
#include <complex>
#include <functional>
#include <map>
#include <string>
#include <vector>

namespace shearstab {

using cplx = std::complex<double>;

inline double weight_phi(double y) { return y / (1.0 + y); }

struct BLNormParams {
  double delta = 0.1;
  double beta = 0.0;   // optional e^{beta y} factor in every norm
  double gamma0 = 1.0;

  // delta = gamma0 nu^{1/4}
  static BLNormParams from_viscosity(double gamma0, double nu, double beta = 0.0);
  void validate() const;
};

enum class NormFlavor { WithoutBL, WithBL };  // ||.||_{l,0} and ||.||_{l,delta}

const char* flavor_name(NormFlavor flavor);

// Nodes on [0, y_max]: spacing h0 growing geometrically to h_max.
class YGrid {
 public:
  YGrid(double h0, double ratio, double h_max, double y_max);
  static YGrid for_params(const BLNormParams& params, double y_max = 40.0);

  const std::vector<double>& y() const { return y_; }
  std::size_t size() const { return y_.size(); }
  // Halved spacings, square-rooted ratio.
  YGrid refined() const;

  double h0, ratio, h_max, y_max;

 private:
  std::vector<double> y_;
};

double bl_weight(double y, int ell, const BLNormParams& params, NormFlavor flavor);

// Sampled sup of phi(y)^l |f(y)| (times (delta^{-1}e^{-y/delta}+1)^{-1} for WithBL).
double bl_norm(const std::vector<double>& y, const std::vector<cplx>& f, int ell, const BLNormParams& params,
               NormFlavor flavor);

struct AdaptiveNorm {
  double value;
  int refinements;
};

// Refines the grid until doubling changes the sup by < 1e-6 relative.
AdaptiveNorm bl_norm_adaptive(const std::function<cplx(double)>& f, int ell, const BLNormParams& params,
                              NormFlavor flavor, double y_max = 40.0);

// Closed-form y-profile of one Fourier mode with all derivatives.
class ModeProfile {
 public:
  // Fills out[0..max_order] with d^k/dy^k at y.
  using Eval = std::function<void(double y, int max_order, cplx* out)>;

  ModeProfile() = default;
  ModeProfile(Eval eval, int max_order = INT_MAX);

  void derivatives(double y, int max_order, cplx* out) const;
  cplx value(double y) const;
  int max_order() const { return max_order_; }
  bool empty() const { return !eval_; }

  static ModeProfile constant(cplx c);
  static ModeProfile exponential(cplx c, double rate);  // c e^{-rate y}
  static ModeProfile gaussian(cplx amp, double center, double width);  // amp e^{-((y-c)/w)^2}

  ModeProfile operator+(const ModeProfile& o) const;
  ModeProfile operator*(const ModeProfile& o) const;  // Leibniz
  ModeProfile scaled(cplx s) const;
  ModeProfile derivative(int k = 1) const;

 private:
  Eval eval_;
  int max_order_ = INT_MAX;
};

// Fourier-in-x modes f_alpha(y), alpha in Z.
using ModeFamily = std::map<int, ModeProfile>;

ModeFamily family_product(const ModeFamily& f, const ModeFamily& g);
ModeFamily family_sum(const ModeFamily& f, const ModeFamily& g);
ModeFamily family_dx(const ModeFamily& f);  // i alpha f_alpha
ModeFamily family_dy(const ModeFamily& f);

// Table[k][i] = d^k f / dy^k at grid node i, k = 0..max_order.
std::vector<std::vector<cplx>> tabulate(const ModeProfile& f, const YGrid& grid, int max_order);

struct Truncation {
  int n_alpha = 8;
  int n_ell = 12;
};

// Sum over keys of e^{z1 |key|} sum_l c[key][l] z2^l / l!. Keys are Fourier
// indices, or combined exponents for product bounds.
class GenSeries {
 public:
  GenSeries() = default;
  GenSeries(NormFlavor flavor, std::vector<int> keys, Eigen::MatrixXd coeffs);

  NormFlavor flavor() const { return flavor_; }
  const std::vector<int>& keys() const { return keys_; }
  const Eigen::MatrixXd& coeffs() const { return coeffs_; }
  int n_ell() const { return static_cast<int>(coeffs_.cols()) - 1; }
  double coeff(int key, int ell) const;

  double operator()(double z1, double z2) const { return partial(0, 0, z1, z2); }
  // d^a/dz1^a d^b/dz2^b of the evaluation.
  double partial(int a, int b, double z1, double z2) const;

  GenSeries dz1() const;  // |alpha| weights
  GenSeries dz2() const;  // l-shift

 private:
  NormFlavor flavor_ = NormFlavor::WithoutBL;
  std::vector<int> keys_;
  Eigen::MatrixXd coeffs_;  // rows follow keys_, columns l = 0..n_ell
};

// Coefficient (alpha, l) = ||d^l f_alpha||_{l, flavor} on the grid.
GenSeries gen_series(const ModeFamily& f, const BLNormParams& params, Truncation trunc, NormFlavor flavor,
                     const YGrid& grid);

// Cauchy product with binomial weights; dominates the product of the two
// truncated evaluations' common-order part.
GenSeries product_bound(const GenSeries& a, const GenSeries& b);

struct SeriesOps {
  GenSeries product, dz1, dz2;
};
SeriesOps series_ops(const GenSeries& a, const GenSeries& b);

// d_y^2 phi - alpha^2 phi = f on y > 0, phi(0) = 0.
struct LaplaceNorms {
  double alpha2_phi_00 = 0, alpha_dphi_00 = 0, d2phi_00 = 0, d2phi_0delta = 0;
  double f_00 = 0, f_0delta = 0;
  double grad_alpha_phi_00 = 0;  // |alpha| ||phi|| + ||phi'||
};

struct LaplaceSolution {
  int alpha = 0;
  std::vector<double> y;
  std::vector<cplx> phi, dphi, d2phi, f;
  LaplaceNorms norms;
};

LaplaceSolution laplace_solve_1d(int alpha, const std::function<cplx(double)>& f, const BLNormParams& params,
                                 const YGrid& grid, bool boundary_layer_estimates = true);

struct InequalityReport {
  std::string inequality;
  int samples = 0;
  double measured_constant = 0.0;
  bool pass = false;
};

struct EllipticOptions {
  double z2_max = 0.1;
  double z1_max = 0.5;
  int z_samples = 11;
  Truncation trunc{8, 12};
  double y_max = 40.0;
  int refine = 0;  // extra grid halvings
};

// Measured constants of the four elliptic generator inequalities.
std::vector<InequalityReport> elliptic_gen_estimate(const ModeFamily& omega, const BLNormParams& params,
                                                    const EllipticOptions& options = {});

struct DivfreeOptions {
  double z1_max = 0.5;
  double z2_max = 1.0;
  int z_samples = 6;
  Truncation trunc{8, 12};
  double y_max = 40.0;
  int refine = 0;
};

// Measured constants of the two divergence-free bilinear inequalities.
std::vector<InequalityReport> divfree_bilinear(const ModeFamily& u, const ModeFamily& v, const ModeFamily& g,
                                               const BLNormParams& params, const DivfreeOptions& options = {});

// Holomorphic functions on strips |Im z| <= rho or pencils
// |Im z| <= min(sigma Re z, sigma r).
using HoloFn = std::function<cplx(cplx)>;

struct StripDomain {
  bool pencil = false;
  double rho = 0.5;
  double sigma = 0.5, r = 1.0;
  double x_extent = 20.0;
  int nx = 2001, ny = 41;
};

double strip_norm(const HoloFn& f, const StripDomain& domain, double beta = 0.0);

struct StripReport {
  double norm = 0.0;
  double derivative_constant = 0.0;  // ||w d f||_{inner} (width - inner) / ||f||
  double product_ratio = 0.0;        // ||f g|| / (||f|| ||g||)
};

// inner_fraction sets rho' = fraction * rho (or sigma' for pencils); the
// pencil derivative check carries the weight z/(1+z).
StripReport strip_norms(const HoloFn& f, const HoloFn& g, const StripDomain& domain, double beta = 0.0,
                        double inner_fraction = 0.5);

struct CorpusOptions {
  unsigned seed = 7;
  int samples = 100;     // random product-inequality pairs
  bool stability = true;  // rerun elliptic/bilinear checks with doubled truncation and grid
};

// Product, dz1, Laplace, elliptic, bilinear and strip checks on the built-in corpus.
std::vector<InequalityReport> genfunc_corpus(const CorpusOptions& options = {});

}  // namespace shearstab
