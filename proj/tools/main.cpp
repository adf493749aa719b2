#include <fstream>
#include <functional>
#include <iostream>
#include <vector>

#include "CLI11.hpp"
#include "commands.hpp"
#include "config.hpp"
#include "shearstab/errors.hpp"

namespace {

using namespace shearstab;
using namespace shearstab::cli;

struct Command {
  CLI::App* app;
  Params params;
  std::vector<std::pair<std::string, CLI::Option*>> options;
  std::function<Table(const Params&)> run;
  std::string default_format = "csv";
};

const std::vector<std::pair<const char*, const char*>> kCommonFlags{
    {"profile", "base flow: poiseuille, exponential, tanh, blasius, kolmogorov, custom"},
    {"n", "Chebyshev polynomial degree"},
    {"map-scale", "half-line map scale L"},
    {"alpha", "wavenumber value or range"},
    {"re", "Reynolds number value or range"},
    {"nu", "viscosity"},
    {"t", "time value or range"},
    {"dx", "separation |x - z| value or range"},
    {"tol", "tolerance"},
    {"order", "series order N"},
    {"seed", "seed for randomized corpora"},
};

void add_flag(Command& c, const std::string& key, const std::string& help) {
  CLI::Option* o = c.app->add_option("--" + key, c.params.values[key], help);
  c.options.emplace_back(key, o);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Shear-flow stability and instability toolkit"};
  app.require_subcommand(1);
  std::string out_path, format, config_path;

  std::vector<std::unique_ptr<Command>> commands;
  const auto make = [&](const std::string& name, const std::string& help, std::function<Table(const Params&)> run,
                        std::vector<std::pair<std::string, std::string>> extra) {
    auto c = std::make_unique<Command>();
    c->app = app.add_subcommand(name, help);
    c->run = std::move(run);
    for (const auto& [k, h] : kCommonFlags) add_flag(*c, k, h);
    for (const auto& [k, h] : extra) add_flag(*c, k, h);
    c->app->add_option("--out", out_path, "output file (default stdout)");
    c->app->add_option("--format", format, "csv or json");
    c->app->add_option("--config", config_path, "key=value file; flags override it");
    commands.push_back(std::move(c));
    return commands.back().get();
  };

  const std::vector<std::pair<std::string, std::string>> profile_extra{
      {"profile-param", "profile parameters k=v[,k=v]"},
      {"csv", "custom profile table (z,U)"},
      {"domain", "custom profile domain: channel or halfline"}};
  make("spectrum", "Rayleigh (no --re) or Orr-Sommerfeld eigenvalues", run_spectrum, profile_extra);
  auto neutral_extra = profile_extra;
  neutral_extra.emplace_back("scan-points", "alpha scan points per Reynolds number");
  make("neutral-curve", "lower and upper marginal branches", run_neutral_curve, neutral_extra);
  auto resolvent_extra = profile_extra;
  for (const auto& e : std::vector<std::pair<std::string, std::string>>{
           {"kind", "rayleigh, parabolic or evans"},
           {"c", "complex phase speed re,im"},
           {"tau", "complex tau re,im (lambda = i tau)"},
           {"potential", "zero or sech2"},
           {"amplitude", "potential amplitude"},
           {"region", "re_lo,re_hi,im_lo,im_hi"}}) {
    resolvent_extra.push_back(e);
  }
  make("resolvent", "Rayleigh resolvent, parabolic Green function or Evans zeros", run_resolvent, resolvent_extra);
  make("heat-kernel", "temporal Green function of the heat equation", run_heat_kernel, {});
  make("semigroup", "e^{At} x0 by contour integration", run_semigroup,
       {{"matrix", "rows separated by ';'"}, {"x0", "initial vector"}, {"size", "random matrix size"}});
  auto* gen = make("genfunc-check", "generator-function inequality corpus", run_genfunc_check,
                   {{"samples", "random product pairs"}});
  gen->default_format = "json";
  make("instability", "bootstrap, riccati, hopf or euler", run_instability,
       {{"mode", "bootstrap, riccati, hopf or euler"},
        {"epsilon", "amplitude or Riccati linear rate"},
        {"phi0", "Riccati initial value"},
        {"lambda", "scalar unstable eigenvalue"},
        {"eta0", "Hopf majorant window"},
        {"aspect", "torus aspect a (x-period 2 pi / a)"},
        {"modes", "Fourier modes |l| <= modes"}});

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }

  for (auto& c : commands) {
    if (!c->app->parsed()) continue;
    try {
      for (const auto& [k, o] : c->options) {
        if (o->count() > 0) c->params.given.insert(k);
      }
      if (!config_path.empty()) {
        auto config = read_config(config_path);
        for (auto [key, target] : {std::pair{"out", &out_path}, std::pair{"format", &format}}) {
          const auto it = config.find(key);
          if (it == config.end()) continue;
          if (target->empty()) *target = it->second;
          config.erase(it);
        }
        c->params.merge(config);
      }
      const std::string fmt = format.empty() ? c->default_format : format;
      if (fmt != "csv" && fmt != "json") fail(ErrorKind::Configuration, "unknown format '" + fmt + "'");
      const Table table = c->run(c->params);
      std::ofstream file;
      if (!out_path.empty()) {
        file.open(out_path);
        if (!file) fail(ErrorKind::Configuration, "cannot write " + out_path);
      }
      std::ostream& os = out_path.empty() ? std::cout : file;
      if (fmt == "csv") {
        write_csv(os, table);
      } else {
        write_json(os, table);
      }
      return 0;
    } catch (const Error& e) {
      std::cerr << "error (" << error_kind_name(e.kind()) << "): " << e.what() << '\n';
      return is_configuration_error(e.kind()) ? 2 : 3;
    } catch (const std::exception& e) {
      std::cerr << "error: " << e.what() << '\n';
      return 3;
    }
  }
  return 2;
}
