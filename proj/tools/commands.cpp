#include "commands.hpp"

#include <cmath>
#include <random>

#include "shearstab/errors.hpp"
#include "shearstab/genfunc.hpp"
#include "shearstab/instability.hpp"
#include "shearstab/profiles.hpp"
#include "shearstab/resolvent.hpp"
#include "shearstab/spectral.hpp"
#include "shearstab/stability.hpp"
#include "shearstab/sweep.hpp"

namespace shearstab::cli {

namespace {

std::string num(double x) { return format_number(x); }

ShearProfile profile_from(const Params& p) {
  const std::string name = p.str("profile", "poiseuille");
  ParameterMap params;
  if (p.has("profile-param")) {
    std::string spec = p.str("profile-param", "");
    std::size_t pos = 0;
    while (pos <= spec.size()) {
      const std::size_t end = std::min(spec.find(',', pos), spec.size());
      const std::string item = spec.substr(pos, end - pos);
      const auto eq = item.find('=');
      if (eq == std::string::npos) fail(ErrorKind::Configuration, "--profile-param expects key=value pairs");
      params[item.substr(0, eq)] = parse_number(item.substr(eq + 1), "--profile-param");
      pos = end + 1;
    }
  }
  if (name == "custom") {
    if (!p.has("csv")) fail(ErrorKind::Configuration, "custom profile needs --csv");
    const std::string domain = p.str("domain", "channel");
    if (domain != "channel" && domain != "halfline") fail(ErrorKind::Configuration, "unknown domain '" + domain + "'");
    return load_custom_csv(p.str("csv", ""), domain == "channel" ? DomainKind::Channel : DomainKind::HalfLine);
  }
  return make_profile(name, params);
}

SpectralDiscretization grid_for(const ShearProfile& profile, const Params& p, int default_n) {
  DomainSpec d;
  d.kind = profile.domain();
  d.map_scale = p.num("map-scale", 2.0);
  return build_grid(p.integer("n", default_n), d);
}

cplx parse_complex(const std::string& text, const std::string& what) {
  const auto v = parse_list(text);
  if (v.size() > 2) fail(ErrorKind::Configuration, what + " expects re[,im]");
  return {v[0], v.size() == 2 ? v[1] : 0.0};
}

Potential potential_from(const Params& p) {
  const std::string kind = p.str("potential", "sech2");
  const double amp = p.num("amplitude", 2.0);
  if (kind == "zero") return [](double) { return cplx(0.0); };
  if (kind == "sech2") {
    return [amp](double x) {
      const double s = 1.0 / std::cosh(x);
      return cplx(amp * s * s);
    };
  }
  fail(ErrorKind::Configuration, "unknown potential '" + kind + "'");
}

}  // namespace

Table run_spectrum(const Params& p) {
  const ShearProfile profile = profile_from(p);
  const SpectralDiscretization grid = grid_for(profile, p, 64);
  const auto alphas = p.range("alpha", "1");
  const bool viscous = p.has("re");
  const auto Res = viscous ? p.range("re", "1") : std::vector<double>{INFINITY};
  std::vector<std::pair<double, double>> points;
  for (double Re : Res) {
    for (double a : alphas) points.emplace_back(Re, a);
  }
  std::vector<std::vector<std::vector<std::string>>> rows(points.size());
  parallel_for(points.size(), true, [&](std::size_t i) {
    const auto [Re, a] = points[i];
    const EigenSolution sol = viscous ? os_spectrum(profile, a, Re, grid) : rayleigh_spectrum(profile, a, grid);
    for (const auto& m : sol.modes) {
      rows[i].push_back({num(Re), num(a), m.c.imag() > 0.0 ? "1" : "0", num(m.c.real()), num(m.c.imag())});
    }
  });
  Table t{{"Re", "alpha", "Re_c_flag", "c_real", "c_imag"}, {}};
  for (auto& block : rows) {
    for (auto& r : block) t.add(std::move(r));
  }
  return t;
}

Table run_neutral_curve(const Params& p) {
  const ShearProfile profile = profile_from(p);
  const SpectralDiscretization grid = grid_for(profile, p, 96);
  const auto Res = p.range("re", "log:5000:10000:4");
  const auto window = p.range("alpha", "0.5:1.5");
  if (window.size() != 2) fail(ErrorKind::Configuration, "--alpha must be a window a:b");
  NeutralOptions opt;
  opt.scan_points = p.integer("scan-points", opt.scan_points);
  opt.alpha_tol = p.num("tol", opt.alpha_tol);
  if (!(opt.alpha_tol > 0.0)) fail(ErrorKind::Configuration, "--tol must be positive");
  const GrowthFunction growth = [&](double a, double Re) { return os_max_growth(profile, a, Re, grid); };
  Table t{{"Re", "alpha_low", "alpha_up", "status"}, {}};
  for (double Re : Res) {
    try {
      const NeutralRow row = neutral_point(growth, Re, {window[0], window[1]}, opt);
      t.add({num(Re), num(row.alpha_low), num(row.alpha_up), row.supercritical ? "unstable_band" : "stable"});
    } catch (const Error& e) {
      if (e.kind() != ErrorKind::WindowTooNarrow) throw;
      t.add({num(Re), "nan", "nan", "window_too_narrow"});
    }
  }
  return t;
}

Table run_resolvent(const Params& p) {
  const std::string kind = p.str("kind", "rayleigh");
  if (kind == "rayleigh") {
    const ShearProfile profile = profile_from(p);
    const SpectralDiscretization grid = grid_for(profile, p, 64);
    const double a = p.num("alpha", 1.0);
    const cplx c = parse_complex(p.str("c", "0,0.1"), "--c");
    const Eigen::VectorXcd source = Eigen::VectorXcd::Ones(grid.size());
    const Eigen::VectorXcd phi = rayleigh_resolvent(profile, a, c, source, grid);
    Table t{{"z", "phi_real", "phi_imag"}, {}};
    for (int j = grid.N; j >= 0; --j) t.add({num(grid.nodes[j]), num(phi[j].real()), num(phi[j].imag())});
    return t;
  }
  const Potential A = potential_from(p);
  const double nu = p.num("nu", 1.0);
  if (kind == "parabolic") {
    const cplx tau = parse_complex(p.str("tau", "-1,0"), "--tau");
    const auto xs = p.range("dx", "-2:2:9");
    Table t{{"x", "y", "green_real", "green_imag"}, {}};
    for (double x : xs) {
      const cplx g = parabolic_green(A, tau, x, 0.0, nu);
      t.add({num(x), "0", num(g.real()), num(g.imag())});
    }
    return t;
  }
  if (kind == "evans") {
    const auto r = parse_list(p.str("region", "0.5,1.5,-0.5,0.5"));
    if (r.size() != 4) fail(ErrorKind::Configuration, "--region expects re_lo,re_hi,im_lo,im_hi");
    const EvansLocateResult res = evans_locate(A, {r[0], r[1], r[2], r[3]}, nu);
    Table t{{"zero", "lambda_real", "lambda_imag", "winding"}, {}};
    for (std::size_t i = 0; i < res.zeros.size(); ++i) {
      t.add({std::to_string(i), num(res.zeros[i].real()), num(res.zeros[i].imag()), std::to_string(res.winding)});
    }
    return t;
  }
  fail(ErrorKind::Configuration, "unknown resolvent kind '" + kind + "'");
}

Table run_heat_kernel(const Params& p) {
  const auto ts = p.range("t", "1");
  const auto dxs = p.range("dx", "0");
  const double nu = p.num("nu", 1.0);
  const auto res = heat_green_grid(ts, dxs, nu, true);
  Table t{{"t", "dx", "nu", "value", "gaussian_bound", "error_estimate"}, {}};
  for (std::size_t i = 0; i < ts.size(); ++i) {
    for (std::size_t j = 0; j < dxs.size(); ++j) {
      const auto& r = res[i * dxs.size() + j];
      t.add({num(ts[i]), num(dxs[j]), num(nu), num(r.value), num(r.gaussian_bound), num(r.error_estimate)});
    }
  }
  return t;
}

Table run_semigroup(const Params& p) {
  Eigen::MatrixXcd A;
  if (p.has("matrix")) {
    std::vector<std::vector<double>> rows;
    std::string spec = p.str("matrix", "");
    std::size_t pos = 0;
    while (pos <= spec.size()) {
      const std::size_t end = std::min(spec.find(';', pos), spec.size());
      rows.push_back(parse_list(spec.substr(pos, end - pos)));
      pos = end + 1;
    }
    A.resize(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(rows.size()));
    for (std::size_t i = 0; i < rows.size(); ++i) {
      if (rows[i].size() != rows.size()) fail(ErrorKind::Configuration, "--matrix must be square");
      for (std::size_t j = 0; j < rows.size(); ++j) A(i, j) = rows[i][j];
    }
  } else {
    const int n = p.integer("size", 4);
    if (n < 1) fail(ErrorKind::Configuration, "--size must be positive");
    std::mt19937_64 rng(static_cast<unsigned>(p.integer("seed", 1)));
    std::normal_distribution<double> N01;
    A.resize(n, n);
    for (int i = 0; i < n; ++i) {
      for (int j = 0; j < n; ++j) A(i, j) = N01(rng) / std::sqrt(static_cast<double>(n));
    }
  }
  Eigen::VectorXcd x0 = Eigen::VectorXcd::Ones(A.rows());
  if (p.has("x0")) {
    const auto v = parse_list(p.str("x0", ""));
    if (static_cast<Eigen::Index>(v.size()) != A.rows()) fail(ErrorKind::Configuration, "--x0 length mismatch");
    for (std::size_t i = 0; i < v.size(); ++i) x0[static_cast<Eigen::Index>(i)] = v[i];
  }
  ContourSpec contour = ContourSpec::enclosing(A);
  contour.quad.tol = p.num("tol", contour.quad.tol);
  if (!(contour.quad.tol > 0.0)) fail(ErrorKind::Configuration, "--tol must be positive");
  Table t{{"t", "component", "real", "imag", "error_estimate"}, {}};
  for (double time : p.range("t", "1")) {
    const SemigroupResult r = semigroup_apply(A, x0, time, contour);
    for (Eigen::Index i = 0; i < r.value.size(); ++i) {
      t.add({num(time), std::to_string(i), num(r.value[i].real()), num(r.value[i].imag()), num(r.error_estimate)});
    }
  }
  return t;
}

Table run_genfunc_check(const Params& p) {
  CorpusOptions opt;
  opt.seed = static_cast<unsigned>(p.integer("seed", 7));
  opt.samples = p.integer("samples", 100);
  if (opt.samples < 1) fail(ErrorKind::Configuration, "--samples must be positive");
  Table t{{"inequality", "samples", "measured_constant", "pass"}, {}};
  for (const auto& r : genfunc_corpus(opt)) {
    t.add({r.inequality, std::to_string(r.samples), num(r.measured_constant), r.pass ? "true" : "false"});
  }
  return t;
}

Table run_instability(const Params& p) {
  const std::string mode = p.str("mode", "bootstrap");
  if (mode == "riccati") {
    const double eps = p.num("epsilon", 0.1), a = p.num("alpha", 1.0), phi0 = p.num("phi0", 0.01);
    Table t{{"t", "value", "status", "blowup_time", "limit"}, {}};
    for (double time : p.range("t", "0:20:5")) {
      const RiccatiResult r = riccati_exact(eps, a, phi0, time);
      t.add({num(time), r.blown_up ? "nan" : num(r.value), r.blown_up ? "blowup" : "finite",
             r.blowup_time ? num(*r.blowup_time) : "nan", r.limit ? num(*r.limit) : "nan"});
    }
    return t;
  }
  if (mode == "bootstrap") {
    const double lam = p.num("lambda", 1.0);
    Eigen::MatrixXcd A(1, 1);
    A(0, 0) = lam;
    const Bilinear Q = [](const Eigen::VectorXcd& a, const Eigen::VectorXcd& b) {
      return Eigen::VectorXcd(a.cwiseProduct(b));
    };
    BootstrapOptions opt;
    opt.order = p.integer("order", 5);
    const BootstrapResult r = ode_bootstrap(A, Q, Eigen::VectorXcd::Ones(1), lam, p.num("epsilon", 1e-4), opt);
    Table t{{"quantity", "value"}, {}};
    for (int j = 1; j <= opt.order; ++j) t.add({"C_" + std::to_string(j), num(r.C[j - 1])});
    t.add({"C_residual", num(r.C_residual)});
    t.add({"residual_slope", num(r.residual_slope)});
    t.add({"energy_constant", num(r.energy_constant)});
    t.add({"energy_condition", r.energy_condition ? "true" : "false"});
    t.add({"sigma", r.sigma ? num(*r.sigma) : "nan"});
    t.add({"sigma0", num(r.sigma0)});
    t.add({"T1", num(r.T1)});
    t.add({"escape_time", num(r.escape_time)});
    t.add({"direct_ratio", num(r.direct_ratio)});
    return t;
  }
  if (mode == "hopf") {
    const double a = p.num("alpha", 1.0);
    const HopfSeries s = hopf_series(TrigPoly::cosine(1), a, p.integer("order", 12));
    HopfMajorantOptions mo;
    mo.eta0 = p.num("eta0", 1.0);
    const HopfMajorantReport rep = hopf_majorant(s, mo);
    Table t{{"n", "sup_norm", "recurrence_residual", "inequality_residual", "max_K_increase", "residual_slope"}, {}};
    for (std::size_t n = 1; n <= s.u.size(); ++n) {
      t.add({std::to_string(n), num(s.sup_norms[n - 1]), n >= 2 ? num(s.residuals[n - 2]) : "0",
             num(rep.inequality_residual), num(rep.max_K_increase), num(rep.residual_slope)});
    }
    return t;
  }
  if (mode == "euler") {
    EulerOptions opt;
    opt.aspect = p.num("aspect", opt.aspect);
    opt.modes = p.integer("modes", opt.modes);
    opt.order = p.integer("order", opt.order);
    const EulerSeriesReport r = euler_series(kolmogorov_profile(), opt);
    Table t{{"n", "eigen_real", "eigen_imag", "wiener_norm", "gen_norm", "h1_ratio", "partial_sum_change"}, {}};
    for (int n = 1; n <= opt.order; ++n) {
      t.add({std::to_string(n), num(r.eigenvalue.real()), num(r.eigenvalue.imag()), num(r.wiener_norms[n - 1]),
             num(r.gen_norms[n - 1]), n >= 2 ? num(r.h1_ratios[n - 2]) : "nan",
             n >= 2 ? num(r.partial_sum_change[n - 2]) : "nan"});
    }
    return t;
  }
  fail(ErrorKind::Configuration, "unknown instability mode '" + mode + "'");
}

}  // namespace shearstab::cli
