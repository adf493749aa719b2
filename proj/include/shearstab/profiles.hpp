#pragma once

#include <functional>
#include <map>
#include <memory>
#include <string>
#include <string_view>
#include <vector>

namespace shearstab {

enum class ProfileKind { Poiseuille, Exponential, Tanh, Blasius, Kolmogorov, Custom };
enum class DomainKind { Channel, HalfLine, Torus };

using ParameterMap = std::map<std::string, double>;

const char* profile_kind_name(ProfileKind kind);
const char* domain_kind_name(DomainKind kind);

// Throws UnsupportedProfile for unknown names.
ProfileKind parse_profile_kind(std::string_view name);

// Steady base flow U(z) with U' and U''. Immutable; copies share state.
// Half-line profiles accept z = +inf and return the far-field limit.
class ShearProfile {
 public:
  using Fn = std::function<double(double)>;

  ShearProfile(ProfileKind kind, DomainKind domain, Fn u, Fn du, Fn d2u,
               ParameterMap params = {}, bool lower_accuracy = false);

  ProfileKind kind() const { return kind_; }
  DomainKind domain() const { return domain_; }
  const ParameterMap& params() const { return *params_; }
  bool lower_accuracy() const { return lower_accuracy_; }

  double U(double z) const { return (*u_)(z); }
  double dU(double z) const { return (*du_)(z); }
  double d2U(double z) const { return (*d2u_)(z); }

 private:
  ProfileKind kind_;
  DomainKind domain_;
  std::shared_ptr<const Fn> u_, du_, d2u_;
  std::shared_ptr<const ParameterMap> params_;
  bool lower_accuracy_;
};

// Parameters: tanh{z0=1}, blasius{tolerance=1e-10}, kolmogorov{amplitude=1}.
// Custom profiles need a table; use custom_profile or load_custom_csv.
ShearProfile make_profile(ProfileKind kind, const ParameterMap& params = {});
ShearProfile make_profile(std::string_view name, const ParameterMap& params = {});

struct BlasiusShooting {
  double fpp0 = 0.0;
  double eta_max = 15.0;
  double residual = 0.0;  // |f'(eta_max) - 1|
  int iterations = 0;
};

ShearProfile blasius_solve(double tolerance, BlasiusShooting* info = nullptr);

// Natural cubic spline through the samples; U'' is flagged lower-accuracy.
ShearProfile custom_profile(std::vector<double> z, std::vector<double> u,
                            DomainKind domain = DomainKind::Channel);

// Two columns (z, U), optional header line, '#' comments.
ShearProfile load_custom_csv(const std::string& path,
                             DomainKind domain = DomainKind::Channel);

// Physical interval scanned for sign changes of U''.
struct ScanRange {
  double lo, hi;
};
ScanRange default_scan_range(const ShearProfile& profile);

std::vector<double> inflection_points(const ShearProfile& profile, int scan_points = 2000);
std::vector<double> inflection_points(const ShearProfile& profile, ScanRange range,
                                      int scan_points);

}  // namespace shearstab
