#pragma once

#include <Eigen/Dense>
#include <complex>
#include <functional>
#include <map>
#include <optional>
#include <vector>

namespace shearstab {

using cplx = std::complex<double>;

// Symmetric or not; Q(a, b) must be bilinear.
using Bilinear = std::function<Eigen::VectorXcd(const Eigen::VectorXcd&, const Eigen::VectorXcd&)>;

struct BootstrapOptions {
  int order = 5;              // N
  double t_max = 0.0;         // 0: -log(eps)/Re(lambda) + 1
  double panel_width = 0.25;
  int panel_nodes = 16;       // Chebyshev-Lobatto interpolation nodes per panel
  int quad_order = 24;        // Gauss-Legendre nodes for each Duhamel integral
  double window_amplitude = 0.1;
  std::vector<double> sigma_grid;  // empty: 0, 0.05, ..., 6
  bool direct_check = true;
};

struct BootstrapResult {
  double epsilon = 0.0;
  cplx lambda;
  int order = 0;
  std::vector<double> t;                           // all sample times, ascending
  std::vector<std::vector<Eigen::VectorXcd>> terms;  // terms[j-1][i] = phi_j(t_i)
  std::vector<Eigen::VectorXcd> residual;          // R_app(t_i)
  std::vector<double> C;                           // C[j-1] = max |phi_j| eps^-j e^{-j Re(lambda) t}
  double C_residual = 0.0;                         // same for R_app with j = N+1
  double residual_slope = 0.0;                     // least squares on log|R_app| over the fit window
  double window_end = 0.0;                         // last t with |phi_app| <= window_amplitude
  double energy_constant = 0.0;                    // 2 mu(A) + 6 q + 1
  bool energy_condition = false;                   // 2 (N+1) Re(lambda) > energy_constant
  std::optional<double> sigma;                     // smallest admissible sigma on the grid
  double sigma0 = 0.0;                             // e^{-Re(lambda) sigma} / 2
  double T1 = 0.0;                                 // -log(eps)/Re(lambda) - sigma
  double escape_time = 0.0;                        // direct solve reaches sigma0 (NaN if not reached)
  double direct_ratio = 0.0;  // max |phi - phi_app| / (C_residual eps^{N+1} e^{(N+1) Re(lambda) t}) on the window

  double panel_h = 0.0;
  int panel_nodes = 0;

  Eigen::VectorXcd phi_app(double t) const;  // interpolated partial sum
};

BootstrapResult ode_bootstrap(const Eigen::MatrixXcd& A, const Bilinear& Q, const Eigen::VectorXcd& v0, cplx lambda,
                              double epsilon, const BootstrapOptions& options = {});

// First time the direct solution from phi(0) = eps v0 reaches |phi| >= level.
double escape_time(const Eigen::MatrixXcd& A, const Bilinear& Q, const Eigen::VectorXcd& phi0, double level,
                   double t_max);

struct EscapeFit {
  std::vector<double> epsilons, times;
  double slope = 0.0, intercept = 0.0;
};

// Escape times at a common level versus -log(eps).
EscapeFit escape_time_fit(const Eigen::MatrixXcd& A, const Bilinear& Q, const Eigen::VectorXcd& v0, double level,
                          const std::vector<double>& epsilons);

// phi' = eps phi + alpha phi^2, phi(0) = phi0.
struct RiccatiResult {
  bool blown_up = false;
  double value = 0.0;                 // valid when !blown_up
  std::optional<double> blowup_time;  // alpha > 0
  std::optional<double> limit;        // alpha < 0, eps > 0: -eps/alpha
};

RiccatiResult riccati_exact(double epsilon, double alpha, double phi0, double t);

// Real 2 pi-periodic trigonometric polynomial, coefficients c_k for |k| <= K.
class TrigPoly {
 public:
  TrigPoly() : c_(1, cplx(0.0)) {}
  explicit TrigPoly(int K) : c_(2 * K + 1, cplx(0.0)) {}
  static TrigPoly cosine(int k, double amp = 1.0);
  static TrigPoly sine(int k, double amp = 1.0);

  int bandwidth() const { return static_cast<int>(c_.size() / 2); }
  cplx& operator[](int k) { return c_[k + bandwidth()]; }
  cplx operator[](int k) const { return std::abs(k) > bandwidth() ? cplx(0.0) : c_[k + bandwidth()]; }

  TrigPoly derivative(int order = 1) const;
  TrigPoly operator*(const TrigPoly& o) const;
  TrigPoly operator+(const TrigPoly& o) const;
  TrigPoly scaled(double s) const;
  double operator()(double z) const;
  // Sampled sup over max(2048, 8 * bandwidth) equispaced points.
  double sup_norm() const;
  bool is_zero() const;

 private:
  std::vector<cplx> c_;
};

struct HopfSeries {
  double alpha = 1.0;
  std::vector<TrigPoly> u;           // u[n-1] = u_n
  std::vector<double> residuals;     // residuals[n-2]: recurrence residual on a physical grid
  std::vector<double> sup_norms;     // ||u_n||
  double ratio_bound = 0.0;          // max_{n >= 5} ||u_{n+1}|| / ||u_n||
};

HopfSeries hopf_series(const TrigPoly& u1, double alpha, int N);

struct HopfMajorantOptions {
  double eta0 = 1.0;
  double t_max = 0.0;  // 0: alpha eta0 / (6 M0)
  int t_samples = 41, z_samples = 41;
  int characteristics = 20;
  int rk4_steps = 2000;
};

struct HopfMajorantReport {
  int N = 0;
  double M0 = 0.0, eta0 = 0.0, T = 0.0;
  double inequality_residual = 0.0;  // max(0, alpha dt G_N - G_N dz G_N) on the grid
  double phi_at_T = 0.0;             // ramp at T
  double max_K_increase = 0.0;       // largest successive increase of K_N along characteristics
  double max_K = 0.0;                // sup of K_N along characteristics
  double residual_slope = 0.0;       // log-slope of the partial-sum residual in t
};

// Gen_M(f)(z) = sum_{l <= M} ||d^l f|| z^l / l!
double gen_trunc(const TrigPoly& f, int M, double z, int dz = 0);

HopfMajorantReport hopf_majorant(const HopfSeries& series, const HopfMajorantOptions& options = {});

// Sup over z of the residual of sum_{n <= N} s^n u_n in the Hopf equation, s = e^{alpha t}.
double hopf_partial_residual(const HopfSeries& series, double s);

struct EulerOptions {
  double aspect = 0.5;  // x-period 2 pi / aspect
  int modes = 16;       // y-modes |l| <= modes
  int order = 4;        // N
  double z = 0.1;       // analytic weight e^{z(|k| + |l|)} in reported norms
};

// Vorticity on the torus: omega[k] holds coefficients for l = -modes..modes.
using TorusField = std::map<int, Eigen::VectorXcd>;

struct EulerSeriesReport {
  cplx eigenvalue;                  // unstable eigenvalue of -L on the k = 1 block
  double eigen_residual = 0.0;      // ||(alpha + L) omega_1|| / ||omega_1||
  std::vector<TorusField> omega;    // omega[n-1]
  std::vector<double> wiener_norms; // sum |omega_hat|
  std::vector<double> gen_norms;    // sum |omega_hat| e^{z(|k| + |l|)}
  std::vector<double> h1_ratios;    // |lambda| ||(lambda + L)^{-1} f|| / ||f||, n >= 2
  std::vector<double> partial_sum_change;  // ||S_N - S_{N-1}|| / ||S_N|| at e^{Re(alpha) t} = 0.01
};

// Shear profile given by its cosine/sine coefficients in y: U(y) = sum_l U_hat[l] e^{ily}.
using ShearFourier = std::map<int, cplx>;
ShearFourier kolmogorov_profile();

// Unstable eigenvalue of -L on x-wavenumber k (largest real part).
cplx euler_eigenvalue(const ShearFourier& U, double aspect, int k, int modes, Eigen::VectorXcd* mode = nullptr);

EulerSeriesReport euler_series(const ShearFourier& U, const EulerOptions& options = {});

}  // namespace shearstab
