#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

#include <fmt/format.h>
#include <omp.h>

#include "CLI11.hpp"
#include "json.hpp"
#include "kerrdg/config.hpp"
#include "kerrdg/error.hpp"

namespace {

using json = nlohmann::json;

struct Flags {
  std::string config;
  std::optional<std::string> out;
  int threads = 0;
  std::optional<std::string> scheme, flux;
  std::optional<int> degree;
  std::vector<std::size_t> elements;
  std::optional<double> cfl, tfinal;
  bool full_scale = false;
};

json load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw kerrdg::ConfigError("cannot read config '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  try {
    json j = json::parse(ss.str());
    if (!j.is_object()) throw kerrdg::ConfigError("parse error: top level must be an object");
    return j;
  } catch (const json::parse_error& e) {
    throw kerrdg::ConfigError(path + ": parse error: " + e.what());
  }
}

kerrdg::RunManifest build_manifest(const Flags& f, const std::string& experiment) {
  json j = f.config.empty() ? json::object() : load_config(f.config);
  if (j.contains("experiment") && j["experiment"] != experiment)
    throw kerrdg::ConfigError(fmt::format("config is for experiment {}, not {}", j["experiment"].dump(), experiment));
  j["experiment"] = experiment;
  if (f.out) j["output_dir"] = *f.out;
  if (f.threads > 0) j["threads"] = f.threads;
  if (f.scheme) j["scheme"] = *f.scheme;
  if (f.flux) j["flux"] = *f.flux;
  if (f.degree) j["degree"] = *f.degree;
  if (!f.elements.empty()) j["elements"] = f.elements;
  if (f.cfl) j["cfl"] = *f.cfl;
  if (f.tfinal) j["t_final"] = *f.tfinal;
  if (f.full_scale) {
    if (!j.contains("soliton")) j["soliton"] = json::object();
    if (j["soliton"].is_object()) j["soliton"]["full_scale"] = true;
  }
  return kerrdg::parse_config(j.dump());
}

int run_experiment(const Flags& f, const std::string& experiment) {
  kerrdg::RunManifest m = build_manifest(f, experiment);
  for (const auto& w : m.warnings) std::cerr << "warning: " << w << "\n";
  kerrdg::ManifestOutcome out = kerrdg::run_manifest(m);
  std::cout << out.summary;
  for (const auto& p : out.files) std::cout << "wrote " << p.string() << "\n";
  return 0;
}

int run_profile(const Flags& f) {
  kerrdg::ModelParams p = kerrdg::kink_model();
  if (!f.config.empty()) {
    json j = load_config(f.config);
    j["experiment"] = "kink_convergence";
    p = kerrdg::parse_config(j.dump()).model;
  }
  kerrdg::KinkProfile prof = kerrdg::kink_profile(p);
  std::filesystem::path path = std::filesystem::path(f.out.value_or("out")) / "kink_profile.csv";
  kerrdg::write_kink_profile_csv(path, prof);
  std::cout << fmt::format("phi0 {:.17g}\nperiod defect {:.3e}\nslope defect {:.3e}\nwrote {}\n", prof.phi0(),
                           prof.period_defect(), prof.slope_defect(), path.string());
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Energy-stable DG solver for 1D Maxwell equations in Kerr/Raman/Lorentz media"};
  app.require_subcommand(1);
  Flags f;
  app.add_option("--config", f.config, "JSON run configuration")->check(CLI::ExistingFile);
  app.add_option("--out", f.out, "output directory");
  app.add_option("--threads", f.threads, "OpenMP threads (0: runtime default)")->check(CLI::NonNegativeNumber);
  app.add_option("--scheme", f.scheme, "leapfrog | implicit");
  app.add_option("--flux", f.flux, "central | alternating_i | alternating_ii | upwind");
  app.add_option("--degree", f.degree, "polynomial degree k");
  app.add_option("--elements", f.elements, "element count(s), comma separated")->delimiter(',');
  app.add_option("--cfl", f.cfl, "CFL number");
  app.add_option("--tfinal", f.tfinal, "final time");
  app.add_flag("--full-scale", f.full_scale, "soliton on 6400 elements");
  app.fallthrough();

  struct Sub {
    const char* name;
    const char* experiment;
    const char* help;
  };
  const Sub subs[] = {{"kink-convergence", "kink_convergence", "kink/antikink convergence table"},
                      {"soliton", "soliton", "soliton propagation with third-harmonic generation"},
                      {"run", "single_run", "single kink run with energy trace"},
                      {"energy-audit", "energy_audit", "discrete energy identity on random states"},
                      {"kink-profile", "", "travelling-wave profile table"}};
  std::vector<CLI::App*> cmds;
  for (const auto& s : subs) cmds.push_back(app.add_subcommand(s.name, s.help));

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int rc = app.exit(e);
    return rc == 0 ? 0 : 1;
  }

  try {
    if (f.threads > 0) omp_set_num_threads(f.threads);
    for (std::size_t i = 0; i < cmds.size(); ++i) {
      if (!cmds[i]->parsed()) continue;
      if (std::string(subs[i].experiment).empty()) return run_profile(f);
      return run_experiment(f, subs[i].experiment);
    }
  } catch (const kerrdg::ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 1;
  } catch (const kerrdg::InvalidArgument& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 1;
  } catch (const kerrdg::SolverError& e) {
    std::cerr << "solver failure: " << e.what() << "\n";
    return 2;
  } catch (const std::filesystem::filesystem_error& e) {
    std::cerr << "output error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 1;
}
