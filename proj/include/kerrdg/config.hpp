#ifndef KERRDG_CONFIG_HPP
#define KERRDG_CONFIG_HPP

#include <cstdint>
#include <filesystem>
#include <string>
#include <utility>
#include <vector>

#include "kerrdg/run.hpp"

namespace kerrdg {

enum class Experiment { KinkConvergence, Soliton, SingleRun, EnergyAudit };
enum class DtRule { Accuracy, Fixed };  // cfl * h^{(k+1)/2} or cfl * h

const char* to_string(Experiment e);
const char* to_string(DtRule r);
Experiment parse_experiment(const std::string& s);
SchemeKind parse_scheme(const std::string& s);
FluxKind parse_flux(const std::string& s);

struct RunManifest {
  Experiment experiment = Experiment::KinkConvergence;
  SchemeKind scheme = SchemeKind::LeapFrog;
  FluxKind flux = FluxKind::Upwind;
  int degree = 2;
  std::vector<std::size_t> elements{100, 200, 400};
  double cfl = 1.0;
  DtRule dt_rule = DtRule::Accuracy;
  double t_final = 0.0;
  std::string output_dir = "out";
  std::uint64_t seed = 20240601;
  int threads = 0;  // 0: OpenMP default
  bool track_energy = true;
  bool energy_guard = false;
  ModelParams model;
  // soliton
  double amplitude = 2.0;
  double carrier = 12.57;
  double delay = 20.0;
  double length = 45.0;
  std::vector<double> snapshot_times{40.0, 80.0};
  double pulse_every = 0.5;
  bool full_scale = false;
  // energy audit
  int states = 100;

  std::vector<std::string> warnings;

  bool operator==(const RunManifest&) const = default;
};

// Strict JSON schema; errors name the offending key path. Defaults depend on the experiment.
RunManifest parse_config(const std::string& text);
// Canonical JSON with every field spelled out; parse_config(manifest_text(m)) == m.
std::string manifest_text(const RunManifest& m);

// CSV writers: fixed headers, %.17g floats, "\n" line endings.
void write_energy_csv(const std::filesystem::path& path, const std::vector<EnergyRow>& rows);
void write_convergence_csv(const std::filesystem::path& path, const std::vector<ConvergenceRow>& rows);
void write_snapshot_csv(const std::filesystem::path& path, const SimState& s, const Mesh& mesh, const Basis& basis,
                        int per_cell = 4);
void write_pulse_area_csv(const std::filesystem::path& path, const std::vector<std::pair<double, double>>& rows);
void write_audit_csv(const std::filesystem::path& path, const std::vector<EnergyAuditRow>& rows);
void write_kink_profile_csv(const std::filesystem::path& path, const KinkProfile& profile);
void write_text(const std::filesystem::path& path, const std::string& text);

struct ManifestOutcome {
  std::vector<std::filesystem::path> files;
  std::string summary;  // human-readable lines for the terminal
};

// Runs the experiment and writes every output plus manifest.json into m.output_dir.
ManifestOutcome run_manifest(const RunManifest& m);

}  // namespace kerrdg

#endif
