#include "kerrdg/config.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <initializer_list>
#include <numbers>

#include <fmt/format.h>
#include <omp.h>

#include "json.hpp"
#include "kerrdg/error.hpp"

namespace kerrdg {

using json = nlohmann::json;

const char* to_string(Experiment e) {
  switch (e) {
    case Experiment::KinkConvergence: return "kink_convergence";
    case Experiment::Soliton: return "soliton";
    case Experiment::SingleRun: return "single_run";
    case Experiment::EnergyAudit: return "energy_audit";
  }
  return "?";
}

const char* to_string(DtRule r) { return r == DtRule::Accuracy ? "accuracy" : "fixed"; }

Experiment parse_experiment(const std::string& s) {
  for (auto e : {Experiment::KinkConvergence, Experiment::Soliton, Experiment::SingleRun, Experiment::EnergyAudit})
    if (s == to_string(e)) return e;
  throw ConfigError("unknown experiment '" + s + "'");
}

SchemeKind parse_scheme(const std::string& s) {
  if (s == "leapfrog") return SchemeKind::LeapFrog;
  if (s == "implicit") return SchemeKind::FullyImplicit;
  throw ConfigError("unknown scheme '" + s + "' (leapfrog | implicit)");
}

namespace {

const char* flux_key(FluxKind f) {
  switch (f) {
    case FluxKind::Central: return "central";
    case FluxKind::AlternatingI: return "alternating_i";
    case FluxKind::AlternatingII: return "alternating_ii";
    case FluxKind::Upwind: return "upwind";
  }
  return "?";
}

}  // namespace

FluxKind parse_flux(const std::string& s) {
  for (auto f : {FluxKind::Central, FluxKind::AlternatingI, FluxKind::AlternatingII, FluxKind::Upwind})
    if (s == flux_key(f)) return f;
  throw ConfigError("unknown flux '" + s + "' (central | alternating_i | alternating_ii | upwind)");
}

namespace {

std::string where(const std::string& path, const std::string& key) { return path.empty() ? key : path + "." + key; }

void reject_unknown(const json& obj, const std::string& path, std::initializer_list<const char*> allowed) {
  for (auto it = obj.begin(); it != obj.end(); ++it) {
    bool ok = std::any_of(allowed.begin(), allowed.end(), [&](const char* a) { return it.key() == a; });
    if (!ok) throw ConfigError("unknown key '" + where(path, it.key()) + "'");
  }
}

[[noreturn]] void mismatch(const std::string& path, const char* expected) {
  throw ConfigError("type mismatch at '" + path + "': expected " + expected);
}

bool read(const json& o, const std::string& path, const char* key, double& out) {
  if (!o.contains(key)) return false;
  const json& v = o.at(key);
  if (!v.is_number()) mismatch(where(path, key), "number");
  out = v.get<double>();
  return true;
}

bool read(const json& o, const std::string& path, const char* key, int& out) {
  if (!o.contains(key)) return false;
  const json& v = o.at(key);
  if (!v.is_number_integer()) mismatch(where(path, key), "integer");
  out = v.get<int>();
  return true;
}

bool read(const json& o, const std::string& path, const char* key, std::uint64_t& out) {
  if (!o.contains(key)) return false;
  const json& v = o.at(key);
  if (!v.is_number_unsigned()) mismatch(where(path, key), "non-negative integer");
  out = v.get<std::uint64_t>();
  return true;
}

bool read(const json& o, const std::string& path, const char* key, bool& out) {
  if (!o.contains(key)) return false;
  const json& v = o.at(key);
  if (!v.is_boolean()) mismatch(where(path, key), "boolean");
  out = v.get<bool>();
  return true;
}

bool read(const json& o, const std::string& path, const char* key, std::string& out) {
  if (!o.contains(key)) return false;
  const json& v = o.at(key);
  if (!v.is_string()) mismatch(where(path, key), "string");
  out = v.get<std::string>();
  return true;
}

bool read(const json& o, const std::string& path, const char* key, std::vector<double>& out) {
  if (!o.contains(key)) return false;
  const json& v = o.at(key);
  if (!v.is_array()) mismatch(where(path, key), "array of numbers");
  out.clear();
  for (const json& x : v) {
    if (!x.is_number()) mismatch(where(path, key), "array of numbers");
    out.push_back(x.get<double>());
  }
  return true;
}

// a positive integer or a non-empty array of them
bool read_elements(const json& o, std::vector<std::size_t>& out) {
  if (!o.contains("elements")) return false;
  const json& v = o.at("elements");
  out.clear();
  auto one = [&](const json& x) {
    if (!x.is_number_unsigned() || x.get<std::uint64_t>() == 0) mismatch("elements", "positive integer(s)");
    out.push_back(x.get<std::size_t>());
  };
  if (v.is_array()) {
    if (v.empty()) mismatch("elements", "positive integer(s)");
    for (const json& x : v) one(x);
  } else {
    one(v);
  }
  return true;
}

ModelParams default_model(Experiment e) {
  switch (e) {
    case Experiment::Soliton: return soliton_model();
    case Experiment::EnergyAudit: return energy_audit_model();
    default: return kink_model();
  }
}

bool is_kink(Experiment e) { return e == Experiment::KinkConvergence || e == Experiment::SingleRun; }

}  // namespace

RunManifest parse_config(const std::string& text) {
  if (std::all_of(text.begin(), text.end(), [](unsigned char c) { return std::isspace(c); }))
    throw ConfigError("parse error: empty configuration");
  json root;
  try {
    root = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("parse error: ") + e.what());
  }
  if (!root.is_object()) throw ConfigError("parse error: top level must be an object");
  reject_unknown(root, "",
                 {"experiment", "scheme", "flux", "degree", "elements", "cfl", "dt_rule", "t_final", "output_dir",
                  "seed", "threads", "track_energy", "energy_guard", "length", "model", "soliton", "audit"});

  RunManifest m;
  std::string s;
  if (!read(root, "", "experiment", s)) throw ConfigError("missing required key 'experiment'");
  m.experiment = parse_experiment(s);
  const Experiment ex = m.experiment;

  m.flux = ex == Experiment::Soliton ? FluxKind::AlternatingI
           : ex == Experiment::EnergyAudit ? FluxKind::Central
                                           : FluxKind::Upwind;
  if (read(root, "", "scheme", s)) m.scheme = parse_scheme(s);
  if (read(root, "", "flux", s)) m.flux = parse_flux(s);
  read(root, "", "degree", m.degree);
  if (m.degree < 1 || m.degree > kMaxModes - 1)
    throw ConfigError(fmt::format("'degree' must lie in [1, {}]", kMaxModes - 1));

  bool full_scale = false;
  const json empty = json::object();
  const json& sol = root.contains("soliton") ? root.at("soliton") : empty;
  if (!sol.is_object()) mismatch("soliton", "object");
  reject_unknown(sol, "soliton",
                 {"amplitude", "carrier", "delay", "snapshot_times", "pulse_every", "full_scale"});
  read(sol, "soliton", "full_scale", full_scale);
  m.full_scale = full_scale;

  switch (ex) {
    case Experiment::KinkConvergence: m.elements = {100, 200, 400}; break;
    case Experiment::SingleRun: m.elements = {100}; break;
    case Experiment::Soliton: m.elements = {full_scale ? std::size_t{6400} : std::size_t{1600}}; break;
    case Experiment::EnergyAudit: m.elements = {16}; break;
  }
  read_elements(root, m.elements);
  if (ex != Experiment::KinkConvergence && m.elements.size() != 1)
    throw ConfigError("'elements' must be a single count for this experiment");

  m.dt_rule = is_kink(ex) ? DtRule::Accuracy : DtRule::Fixed;
  if (read(root, "", "dt_rule", s)) {
    if (s == "accuracy") m.dt_rule = DtRule::Accuracy;
    else if (s == "fixed") m.dt_rule = DtRule::Fixed;
    else throw ConfigError("unknown dt_rule '" + s + "' (accuracy | fixed)");
  }

  try {
    m.cfl = is_kink(ex) ? default_kink_cfl(m.scheme, m.degree)
            : ex == Experiment::Soliton ? default_soliton_cfl(m.scheme, m.flux)
                                        : 0.1;
  } catch (const InvalidArgument&) {
    m.cfl = 0.0;
  }
  const bool has_cfl = read(root, "", "cfl", m.cfl);
  if (!has_cfl && !(m.cfl > 0.0)) throw ConfigError("missing 'cfl': no tabulated default for this degree");
  if (!(m.cfl > 0.0) || !std::isfinite(m.cfl)) throw ConfigError("'cfl' must be positive");

  m.length = is_kink(ex) ? kKinkPeriod : ex == Experiment::Soliton ? 45.0 : 2.0 * std::numbers::pi;
  double len = m.length;
  if (read(root, "", "length", len)) {
    if (is_kink(ex) && len != kKinkPeriod) throw ConfigError("'length' is fixed by the kink period");
    if (!(len > 0.0) || !std::isfinite(len)) throw ConfigError("'length' must be positive");
    m.length = len;
  }

  m.t_final = is_kink(ex) ? kKinkPeriod / kKinkVelocity : ex == Experiment::Soliton ? 80.0 : 0.0;
  read(root, "", "t_final", m.t_final);
  if (!(m.t_final >= 0.0) || !std::isfinite(m.t_final)) throw ConfigError("'t_final' must be >= 0");

  read(root, "", "output_dir", m.output_dir);
  if (m.output_dir.empty()) throw ConfigError("'output_dir' must not be empty");
  read(root, "", "seed", m.seed);
  read(root, "", "threads", m.threads);
  if (m.threads < 0) throw ConfigError("'threads' must be >= 0");
  read(root, "", "track_energy", m.track_energy);
  read(root, "", "energy_guard", m.energy_guard);

  m.model = default_model(ex);
  if (root.contains("model")) {
    const json& mo = root.at("model");
    if (!mo.is_object()) mismatch("model", "object");
    reject_unknown(mo, "model",
                   {"eps_inf", "eps_s", "a", "theta", "omega0", "omega_p", "omega_v", "inv_tau", "inv_tau_v"});
    ModelParams& p = m.model;
    bool changed = read(mo, "model", "eps_inf", p.eps_inf);
    changed = read(mo, "model", "eps_s", p.eps_s) || changed;
    changed = read(mo, "model", "omega0", p.omega0) || changed;
    read(mo, "model", "a", p.a);
    read(mo, "model", "theta", p.theta);
    read(mo, "model", "omega_v", p.omega_v);
    read(mo, "model", "inv_tau", p.inv_tau);
    read(mo, "model", "inv_tau_v", p.inv_tau_v);
    if (!read(mo, "model", "omega_p", p.omega_p) && changed) {
      if (p.eps_s < p.eps_inf) throw ConfigError("model: eps_s must be >= eps_inf");
      p.omega_p = plasma_frequency(p.eps_inf, p.eps_s, p.omega0);
    }
  }
  try {
    m.model.validate();
  } catch (const InvalidArgument& e) {
    throw ConfigError(std::string("model: ") + e.what());
  }
  if (m.energy_guard && !m.model.energy_positivity_guaranteed())
    m.warnings.push_back(fmt::format("theta = {} lies outside [0, 3/4]: discrete energy positivity is not guaranteed",
                                     m.model.theta));

  read(sol, "soliton", "amplitude", m.amplitude);
  read(sol, "soliton", "carrier", m.carrier);
  read(sol, "soliton", "delay", m.delay);
  read(sol, "soliton", "snapshot_times", m.snapshot_times);
  read(sol, "soliton", "pulse_every", m.pulse_every);
  if (!(m.carrier > 0.0)) throw ConfigError("'soliton.carrier' must be positive");
  if (m.pulse_every < 0.0) throw ConfigError("'soliton.pulse_every' must be >= 0");

  if (root.contains("audit")) {
    const json& au = root.at("audit");
    if (!au.is_object()) mismatch("audit", "object");
    reject_unknown(au, "audit", {"states"});
    read(au, "audit", "states", m.states);
  }
  if (m.states < 0) throw ConfigError("'audit.states' must be >= 0");
  return m;
}

std::string manifest_text(const RunManifest& m) {
  json j;
  j["experiment"] = to_string(m.experiment);
  j["scheme"] = to_string(m.scheme);
  j["flux"] = flux_key(m.flux);
  j["degree"] = m.degree;
  j["elements"] = m.elements;
  j["cfl"] = m.cfl;
  j["dt_rule"] = to_string(m.dt_rule);
  j["t_final"] = m.t_final;
  j["length"] = m.length;
  j["output_dir"] = m.output_dir;
  j["seed"] = m.seed;
  j["threads"] = m.threads;
  j["track_energy"] = m.track_energy;
  j["energy_guard"] = m.energy_guard;
  const ModelParams& p = m.model;
  j["model"] = {{"eps_inf", p.eps_inf}, {"eps_s", p.eps_s},     {"a", p.a},
                {"theta", p.theta},     {"omega0", p.omega0},   {"omega_p", p.omega_p},
                {"omega_v", p.omega_v}, {"inv_tau", p.inv_tau}, {"inv_tau_v", p.inv_tau_v}};
  j["soliton"] = {{"amplitude", m.amplitude},     {"carrier", m.carrier},         {"delay", m.delay},
                  {"snapshot_times", m.snapshot_times}, {"pulse_every", m.pulse_every}, {"full_scale", m.full_scale}};
  j["audit"] = {{"states", m.states}};
  return j.dump(2) + "\n";
}

}  // namespace kerrdg
