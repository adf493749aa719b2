#include "shearstab/profiles.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numbers>
#include <sstream>

#include "shearstab/errors.hpp"
#include "shearstab/ode.hpp"

namespace shearstab {

namespace {

// sech^2 without overflow, valid for |x| = inf.
double sech2(double x) {
  const double e = std::exp(-2.0 * std::abs(x));
  return 4.0 * e / ((1.0 + e) * (1.0 + e));
}

double param_or(const ParameterMap& p, const std::string& key, double fallback) {
  auto it = p.find(key);
  return it == p.end() ? fallback : it->second;
}

void reject_unknown(const ParameterMap& p, std::initializer_list<const char*> allowed,
                    const char* kind) {
  for (const auto& [key, value] : p) {
    bool ok = false;
    for (const char* a : allowed) ok = ok || key == a;
    if (!ok) fail(ErrorKind::Configuration, std::string("unknown parameter '") + key + "' for " + kind);
  }
}

// f''' = -f f''/2 as a first-order system (f, f', f'').
Eigen::Vector3d blasius_rhs(double, const Eigen::Vector3d& s) {
  return Eigen::Vector3d(s[1], s[2], -0.5 * s[0] * s[2]);
}

struct BlasiusTable {
  double h = 0.01;
  double eta_max = 15.0;
  std::vector<Eigen::Vector3d> states;

  Eigen::Vector3d at(double eta) const {
    if (!(eta > 0.0)) return states.front();
    if (eta >= eta_max) {
      const Eigen::Vector3d& last = states.back();
      return Eigen::Vector3d(last[0] + (eta - eta_max), 1.0, 0.0);
    }
    const auto i = std::min<std::size_t>(static_cast<std::size_t>(eta / h), states.size() - 2);
    const double t0 = static_cast<double>(i) * h;
    if (eta == t0) return states[i];
    return rk4<Eigen::Vector3d>(blasius_rhs, t0, states[i], eta, 1);
  }
};

double blasius_mismatch(double s, double eta_max) {
  OdeOptions opt;
  opt.rtol = 1e-13;
  opt.atol = 1e-15;
  const Eigen::Vector3d end = dopri5<Eigen::Vector3d>(blasius_rhs, 0.0, Eigen::Vector3d(0, 0, s), eta_max, opt);
  return end[1] - 1.0;
}

class CubicSpline {
 public:
  CubicSpline(std::vector<double> x, std::vector<double> y) : x_(std::move(x)), y_(std::move(y)) {
    const std::size_t n = x_.size();
    m_.assign(n, 0.0);
    if (n < 3) return;
    std::vector<double> c(n, 0.0), d(n, 0.0);
    for (std::size_t i = 1; i + 1 < n; ++i) {
      const double h0 = x_[i] - x_[i - 1], h1 = x_[i + 1] - x_[i];
      const double a = h0 / 6.0, b = (h0 + h1) / 3.0, cc = h1 / 6.0;
      const double r = (y_[i + 1] - y_[i]) / h1 - (y_[i] - y_[i - 1]) / h0;
      const double denom = b - a * c[i - 1];
      c[i] = cc / denom;
      d[i] = (r - a * d[i - 1]) / denom;
    }
    for (std::size_t i = n - 2; i >= 1; --i) {
      m_[i] = d[i] - c[i] * m_[i + 1];
    }
  }

  // order 0, 1 or 2; constant extension outside the table.
  double eval(double z, int order) const {
    if (!(z >= x_.front())) return order == 0 ? y_.front() : 0.0;
    if (!(z <= x_.back())) return order == 0 ? y_.back() : 0.0;
    std::size_t i = static_cast<std::size_t>(std::upper_bound(x_.begin(), x_.end(), z) - x_.begin());
    i = std::clamp<std::size_t>(i, 1, x_.size() - 1) - 1;
    const double h = x_[i + 1] - x_[i];
    const double a = (x_[i + 1] - z) / h, b = (z - x_[i]) / h;
    switch (order) {
      case 0:
        return a * y_[i] + b * y_[i + 1] + ((a * a * a - a) * m_[i] + (b * b * b - b) * m_[i + 1]) * h * h / 6.0;
      case 1:
        return (y_[i + 1] - y_[i]) / h - (3.0 * a * a - 1.0) * h / 6.0 * m_[i] +
               (3.0 * b * b - 1.0) * h / 6.0 * m_[i + 1];
      default:
        return a * m_[i] + b * m_[i + 1];
    }
  }

 private:
  std::vector<double> x_, y_, m_;
};

}  // namespace

const char* profile_kind_name(ProfileKind kind) {
  switch (kind) {
    case ProfileKind::Poiseuille: return "poiseuille";
    case ProfileKind::Exponential: return "exponential";
    case ProfileKind::Tanh: return "tanh";
    case ProfileKind::Blasius: return "blasius";
    case ProfileKind::Kolmogorov: return "kolmogorov";
    case ProfileKind::Custom: return "custom";
  }
  return "?";
}

const char* domain_kind_name(DomainKind kind) {
  switch (kind) {
    case DomainKind::Channel: return "channel";
    case DomainKind::HalfLine: return "half_line";
    case DomainKind::Torus: return "torus";
  }
  return "?";
}

ProfileKind parse_profile_kind(std::string_view name) {
  for (ProfileKind k : {ProfileKind::Poiseuille, ProfileKind::Exponential, ProfileKind::Tanh,
                        ProfileKind::Blasius, ProfileKind::Kolmogorov, ProfileKind::Custom}) {
    if (name == profile_kind_name(k)) return k;
  }
  fail(ErrorKind::UnsupportedProfile, "unknown profile '" + std::string(name) + "'");
}

ShearProfile::ShearProfile(ProfileKind kind, DomainKind domain, Fn u, Fn du, Fn d2u,
                           ParameterMap params, bool lower_accuracy)
    : kind_(kind),
      domain_(domain),
      u_(std::make_shared<const Fn>(std::move(u))),
      du_(std::make_shared<const Fn>(std::move(du))),
      d2u_(std::make_shared<const Fn>(std::move(d2u))),
      params_(std::make_shared<const ParameterMap>(std::move(params))),
      lower_accuracy_(lower_accuracy) {}

ShearProfile make_profile(ProfileKind kind, const ParameterMap& params) {
  switch (kind) {
    case ProfileKind::Poiseuille:
      reject_unknown(params, {}, "poiseuille");
      return ShearProfile(
          kind, DomainKind::Channel, [](double z) { return 1.0 - z * z; },
          [](double z) { return -2.0 * z; }, [](double) { return -2.0; }, params);
    case ProfileKind::Exponential:
      reject_unknown(params, {}, "exponential");
      return ShearProfile(
          kind, DomainKind::HalfLine, [](double z) { return -std::expm1(-z); },
          [](double z) { return std::exp(-z); }, [](double z) { return -std::exp(-z); }, params);
    case ProfileKind::Tanh: {
      reject_unknown(params, {"z0"}, "tanh");
      const double z0 = param_or(params, "z0", 1.0);
      const double shift = std::tanh(z0);
      ParameterMap p = params;
      p["z0"] = z0;
      return ShearProfile(
          kind, DomainKind::HalfLine, [z0, shift](double z) { return std::tanh(z - z0) + shift; },
          [z0](double z) { return sech2(z - z0); },
          [z0](double z) { return -2.0 * std::tanh(z - z0) * sech2(z - z0); }, p);
    }
    case ProfileKind::Blasius: {
      reject_unknown(params, {"tolerance"}, "blasius");
      return blasius_solve(param_or(params, "tolerance", 1e-10));
    }
    case ProfileKind::Kolmogorov: {
      reject_unknown(params, {"amplitude"}, "kolmogorov");
      const double a = param_or(params, "amplitude", 1.0);
      ParameterMap p = params;
      p["amplitude"] = a;
      return ShearProfile(
          kind, DomainKind::Torus, [a](double z) { return a * std::cos(z); },
          [a](double z) { return -a * std::sin(z); }, [a](double z) { return -a * std::cos(z); }, p);
    }
    case ProfileKind::Custom:
      fail(ErrorKind::Configuration, "custom profile needs a (z, U) table");
  }
  fail(ErrorKind::UnsupportedProfile, "unknown profile kind");
}

ShearProfile make_profile(std::string_view name, const ParameterMap& params) {
  return make_profile(parse_profile_kind(name), params);
}

ShearProfile blasius_solve(double tolerance, BlasiusShooting* info) {
  if (!(tolerance > 0.0)) fail(ErrorKind::Configuration, "Blasius tolerance must be positive");
  const double eta_max = 15.0;
  double lo = 0.1, hi = 1.0;
  double flo = blasius_mismatch(lo, eta_max), fhi = blasius_mismatch(hi, eta_max);
  if (flo * fhi > 0.0) {
    fail(ErrorKind::NonConvergence, "Blasius shooting bracket [0.1, 1] does not change sign");
  }
  // Illinois regula falsi: superlinear, never leaves the bracket.
  double s = lo, fs = flo;
  int side = 0, it = 0;
  for (; it < 200; ++it) {
    s = (lo * fhi - hi * flo) / (fhi - flo);
    fs = blasius_mismatch(s, eta_max);
    if (std::abs(fs) < tolerance && hi - lo < 1e-3) break;
    if (std::abs(fs) < 0.01 * tolerance) break;
    if (fs * fhi > 0.0) {
      hi = s;
      fhi = fs;
      if (side == 1) flo *= 0.5;
      side = 1;
    } else {
      lo = s;
      flo = fs;
      if (side == -1) fhi *= 0.5;
      side = -1;
    }
    if (hi - lo < 1e-15) break;
  }
  if (!(std::abs(fs) < tolerance)) {
    std::ostringstream os;
    os.precision(17);
    os << "Blasius shooting stalled; last bracket [" << lo << ", " << hi << "]";
    fail(ErrorKind::NonConvergence, os.str());
  }

  auto table = std::make_shared<BlasiusTable>();
  table->eta_max = eta_max;
  const int steps = static_cast<int>(std::lround(eta_max / table->h));
  table->states.reserve(steps + 1);
  Eigen::Vector3d state(0.0, 0.0, s);
  table->states.push_back(state);
  OdeOptions opt;
  opt.rtol = 1e-13;
  opt.atol = 1e-15;
  for (int i = 0; i < steps; ++i) {
    state = dopri5<Eigen::Vector3d>(blasius_rhs, i * table->h, state, (i + 1) * table->h, opt);
    table->states.push_back(state);
  }
  // f'' must have decayed at the truncation point.
  if (std::abs(table->states.back()[2]) > std::max(tolerance, 1e-8)) {
    fail(ErrorKind::NonConvergence, "Blasius f'' has not decayed at eta_max");
  }
  if (info) {
    info->fpp0 = s;
    info->eta_max = eta_max;
    info->residual = std::abs(fs);
    info->iterations = it + 1;
  }
  ParameterMap p{{"tolerance", tolerance}, {"fpp0", s}, {"eta_max", eta_max}};
  return ShearProfile(
      ProfileKind::Blasius, DomainKind::HalfLine, [table](double eta) { return table->at(eta)[1]; },
      [table](double eta) { return table->at(eta)[2]; },
      [table](double eta) {
        const Eigen::Vector3d st = table->at(eta);
        return -0.5 * st[0] * st[2];
      },
      p);
}

ShearProfile custom_profile(std::vector<double> z, std::vector<double> u, DomainKind domain) {
  if (z.size() != u.size() || z.size() < 4) {
    fail(ErrorKind::Input, "custom profile needs at least 4 (z, U) samples");
  }
  for (std::size_t i = 1; i < z.size(); ++i) {
    if (!(z[i] > z[i - 1])) fail(ErrorKind::Input, "custom profile z samples must increase");
  }
  auto spline = std::make_shared<CubicSpline>(std::move(z), std::move(u));
  return ShearProfile(
      ProfileKind::Custom, domain, [spline](double x) { return spline->eval(x, 0); },
      [spline](double x) { return spline->eval(x, 1); }, [spline](double x) { return spline->eval(x, 2); },
      {}, true);
}

ShearProfile load_custom_csv(const std::string& path, DomainKind domain) {
  std::ifstream in(path);
  if (!in) fail(ErrorKind::Configuration, "cannot open profile table '" + path + "'");
  std::vector<double> z, u;
  std::string line;
  bool first = true;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    std::replace(line.begin(), line.end(), ',', ' ');
    std::istringstream ls(line);
    double a, b;
    if (!(ls >> a >> b)) {
      if (first) {
        first = false;
        continue;
      }
      fail(ErrorKind::Input, "malformed row in profile table: " + line);
    }
    first = false;
    z.push_back(a);
    u.push_back(b);
  }
  return custom_profile(std::move(z), std::move(u), domain);
}

ScanRange default_scan_range(const ShearProfile& profile) {
  switch (profile.domain()) {
    case DomainKind::Channel: return {-1.0, 1.0};
    case DomainKind::Torus: return {0.0, 2.0 * std::numbers::pi};
    case DomainKind::HalfLine: break;
  }
  if (profile.kind() == ProfileKind::Blasius) return {0.0, profile.params().at("eta_max")};
  return {0.0, 30.0};
}

std::vector<double> inflection_points(const ShearProfile& profile, int scan_points) {
  return inflection_points(profile, default_scan_range(profile), scan_points);
}

std::vector<double> inflection_points(const ShearProfile& profile, ScanRange range, int scan_points) {
  if (scan_points < 3) fail(ErrorKind::Configuration, "scan needs at least 3 points");
  auto sgn = [](double v) { return (v > 0.0) - (v < 0.0); };
  std::vector<double> z(scan_points), s(scan_points);
  for (int i = 0; i < scan_points; ++i) {
    z[i] = range.lo + (range.hi - range.lo) * i / (scan_points - 1);
    s[i] = sgn(profile.d2U(z[i]));
  }
  std::vector<double> roots;
  for (int i = 0; i + 1 < scan_points; ++i) {
    if (s[i] * s[i + 1] < 0) {
      double a = z[i], b = z[i + 1];
      const double sa = s[i];
      while (b - a > 1e-12 * std::max(1.0, std::abs(a))) {
        const double m = 0.5 * (a + b);
        const int sm = sgn(profile.d2U(m));
        if (sm == 0) {
          a = b = m;
          break;
        }
        (sm == sa ? a : b) = m;
      }
      roots.push_back(0.5 * (a + b));
    } else if (s[i + 1] == 0 && i + 2 < scan_points && s[i] * s[i + 2] < 0) {
      roots.push_back(z[i + 1]);
    }
  }
  return roots;
}

}  // namespace shearstab
