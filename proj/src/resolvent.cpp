#include "shearstab/resolvent.hpp"

#include <Eigen/Eigenvalues>
#include <cmath>
#include <numbers>
#include <sstream>

#include "shearstab/errors.hpp"
#include "shearstab/quadrature.hpp"
#include "shearstab/sweep.hpp"

namespace shearstab {

namespace {

constexpr cplx I(0.0, 1.0);

}  // namespace

ContourSpec ContourSpec::three_segment(double P, double B) {
  if (!(B > 0.0)) fail(ErrorKind::Configuration, "contour corner height B must be positive");
  ContourSpec c;
  c.kind = ContourKind::ThreeSegment;
  c.P = P;
  c.B = B;
  return c;
}

ContourSpec ContourSpec::enclosing(const Eigen::MatrixXcd& A, double margin) {
  Eigen::ComplexEigenSolver<Eigen::MatrixXcd> es(A, false);
  double re = -std::numeric_limits<double>::infinity(), im = 0.0;
  for (Eigen::Index i = 0; i < es.eigenvalues().size(); ++i) {
    re = std::max(re, es.eigenvalues()[i].real());
    im = std::max(im, std::abs(es.eigenvalues()[i].imag()));
  }
  return three_segment(re + margin, im + margin);
}

ContourSpec ContourSpec::heat_parabola(double a) {
  if (!(a >= 0.0)) fail(ErrorKind::Configuration, "heat parabola parameter a must be nonnegative");
  ContourSpec c;
  c.kind = ContourKind::HeatParabola;
  c.a = a;
  return c;
}

bool ContourSpec::encloses(cplx lambda, double margin) const {
  return lambda.real() < P - margin && std::abs(lambda.imag()) < B + (P - lambda.real()) - margin;
}

namespace {

struct NodeSpec {
  cplx lambda;
  cplx weight;  // includes d lambda / du, the panel weight and 1/(2 pi i)
};

// Nodes of all three segments for a given panel count per segment.
std::vector<NodeSpec> three_segment_nodes(const ContourSpec& c, int panels) {
  const GaussRule& g = gauss_legendre(c.quad.order);
  std::vector<NodeSpec> nodes;
  nodes.reserve(3 * panels * g.nodes.size());
  const cplx inv2pii = 1.0 / (2.0 * std::numbers::pi * I);
  const double h = 1.0 / panels;
  for (int p = 0; p < panels; ++p) {
    for (std::size_t q = 0; q < g.nodes.size(); ++q) {
      const double u = h * (p + 0.5 * (g.nodes[q] + 1.0));
      const double w = 0.5 * h * g.weights[q];
      const double s = u / (1.0 - u);
      const double ds = 1.0 / ((1.0 - u) * (1.0 - u));
      nodes.push_back({cplx(c.P, -c.B) - (1.0 + I) * s, (1.0 + I) * ds * w * inv2pii});
      nodes.push_back({cplx(c.P, c.B) + (-1.0 + I) * s, (-1.0 + I) * ds * w * inv2pii});
      const double y = -c.B + 2.0 * c.B * u;
      nodes.push_back({cplx(c.P, y), I * (2.0 * c.B) * w * inv2pii});
    }
  }
  return nodes;
}

}  // namespace

SemigroupResult semigroup_apply(const Eigen::MatrixXcd& A, const Eigen::VectorXcd& x0, double t,
                                const ContourSpec& contour, bool parallel) {
  if (contour.kind != ContourKind::ThreeSegment) {
    fail(ErrorKind::Configuration, "semigroup_apply needs a three-segment contour");
  }
  if (!(t >= 0.0)) fail(ErrorKind::Configuration, "time must be nonnegative");
  if (A.rows() != A.cols() || A.rows() != x0.size()) fail(ErrorKind::Input, "matrix/vector size mismatch");
  const Eigen::Index n = A.rows();
  {
    Eigen::ComplexEigenSolver<Eigen::MatrixXcd> es(A, false);
    for (Eigen::Index i = 0; i < n; ++i) {
      const cplx mu = es.eigenvalues()[i];
      if (!contour.encloses(mu, 1e-8)) {
        std::ostringstream os;
        os << "eigenvalue " << mu << " is not enclosed by the contour (P=" << contour.P << ", B=" << contour.B << ")";
        fail(ErrorKind::ContourCrossesSpectrum, os.str());
      }
    }
  }
  // The pole x0/(lambda - mu) is subtracted and e^{mu t} x0 added back;
  // this makes the t = 0 integral absolutely convergent.
  const double mu = contour.P - 1.0;
  const double scale = x0.norm() * std::exp(contour.P * t);
  const Eigen::MatrixXcd Id = Eigen::MatrixXcd::Identity(n, n);

  auto evaluate = [&](int panels) {
    const auto nodes = three_segment_nodes(contour, panels);
    std::vector<Eigen::VectorXcd> contrib(nodes.size());
    parallel_for(nodes.size(), parallel, [&](std::size_t k) {
      const cplx lam = nodes[k].lambda;
      const cplx e = std::exp(lam * t);
      if (e == 0.0) {
        contrib[k] = Eigen::VectorXcd::Zero(n);
        return;
      }
      Eigen::PartialPivLU<Eigen::MatrixXcd> lu(lam * Id - A);
      const Eigen::VectorXcd r = lu.solve(x0);
      if (!r.allFinite()) fail(ErrorKind::ContourCrossesSpectrum, "lambda - A is singular on a contour node");
      contrib[k] = (e * nodes[k].weight) * (r - x0 / (lam - mu));
    });
    return std::make_pair(pairwise_sum(contrib, Eigen::VectorXcd(Eigen::VectorXcd::Zero(n))),
                          static_cast<int>(nodes.size()));
  };

  int panels = std::max(1, contour.quad.initial_panels);
  auto [prev, count] = evaluate(panels);
  for (int d = 0; d < contour.quad.max_doublings; ++d) {
    panels *= 2;
    auto [cur, cnt] = evaluate(panels);
    const double diff = (cur - prev).norm();
    const Eigen::VectorXcd value = cur + std::exp(mu * t) * x0;
    if (diff <= contour.quad.tol * value.norm() + 1e-14 * scale) {
      return {value, diff, cnt};
    }
    prev = std::move(cur);
    count = cnt;
  }
  fail(ErrorKind::Quadrature, "contour quadrature did not converge after node doubling");
}

SemigroupResult semigroup_apply(const Eigen::MatrixXcd& A, const Eigen::VectorXcd& x0, double t) {
  return semigroup_apply(A, x0, t, ContourSpec::enclosing(A));
}

HeatGreenResult heat_green(double t, double x, double z, double nu, const QuadratureSpec& quad) {
  if (!(t > 0.0) || !(nu > 0.0)) fail(ErrorKind::Configuration, "heat_green needs t > 0 and nu > 0");
  const double d = std::abs(x - z);
  const double a = d / (2.0 * nu * t);
  // e^{-K^2 nu t} < 1e-16
  const double K = std::sqrt(37.0 / (nu * t));
  const GaussRule& g = gauss_legendre(quad.order);
  const cplx inv2pii = 1.0 / (2.0 * std::numbers::pi * I);

  auto integrate = [&](int panels) {
    // Even panel count: k = 0 is a panel edge, never a node.
    const double h = 2.0 * K / panels;
    std::vector<cplx> parts(panels);
    for (int p = 0; p < panels; ++p) {
      cplx s_sum = 0.0;
      for (std::size_t q = 0; q < g.nodes.size(); ++q) {
        const double k = -K + h * (p + 0.5 * (g.nodes[q] + 1.0));
        const cplx root = cplx(a, k);  // sqrt(lambda/nu) along the contour
        const cplx lam = nu * root * root;
        const cplx green = std::exp(-d * root) / (2.0 * nu * root);
        const cplx dlam = 2.0 * I * nu * root;
        s_sum += g.weights[q] * std::exp(lam * t) * green * dlam;
      }
      parts[p] = 0.5 * h * s_sum * inv2pii;
    }
    return pairwise_sum(parts, cplx(0.0));
  };

  int panels = 2 * std::max(1, quad.initial_panels / 2);
  cplx prev = integrate(panels);
  for (int dbl = 0; dbl < quad.max_doublings; ++dbl) {
    panels *= 2;
    const cplx cur = integrate(panels);
    const double diff = std::abs(cur - prev);
    if (diff <= quad.tol * std::abs(cur) + 1e-300) {
      HeatGreenResult r;
      r.value = cur.real();
      r.imag_residue = std::abs(cur.imag());
      r.error_estimate = diff;
      r.gaussian_bound = std::exp(-d * d / (4.0 * nu * t)) / std::sqrt(4.0 * std::numbers::pi * nu * t);
      r.nodes = panels * static_cast<int>(g.nodes.size());
      return r;
    }
    prev = cur;
  }
  fail(ErrorKind::Quadrature, "heat-parabola quadrature did not converge");
}

std::vector<HeatGreenResult> heat_green_grid(const std::vector<double>& ts, const std::vector<double>& dxs,
                                             double nu, bool parallel) {
  const std::size_t nt = ts.size(), nd = dxs.size();
  std::vector<HeatGreenResult> out(nt * nd);
  parallel_for(nt * nd, parallel, [&](std::size_t k) { out[k] = heat_green(ts[k / nd], dxs[k % nd], 0.0, nu); });
  return out;
}

}  // namespace shearstab
