#include <cmath>
#include <fstream>

#include <fmt/format.h>
#include <omp.h>

#include "kerrdg/config.hpp"
#include "kerrdg/error.hpp"

namespace kerrdg {

namespace {

std::string g17(double v) { return fmt::format("{:.17g}", v); }

class CsvFile {
 public:
  CsvFile(const std::filesystem::path& path, const std::string& header) : path_(path) {
    if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
    out_.open(path, std::ios::binary | std::ios::trunc);
    if (!out_) throw ConfigError("cannot write '" + path.string() + "'");
    out_ << header << '\n';
  }
  template <class... T>
  void row(const T&... v) {
    std::string line;
    ((line += (line.empty() ? "" : ",") + cell(v)), ...);
    out_ << line << '\n';
  }
  ~CsvFile() = default;
  void close() {
    out_.close();
    if (!out_) throw ConfigError("failed writing '" + path_.string() + "'");
  }

 private:
  static std::string cell(double v) { return g17(v); }
  static std::string cell(std::size_t v) { return std::to_string(v); }
  static std::string cell(int v) { return std::to_string(v); }
  std::filesystem::path path_;
  std::ofstream out_;
};

}  // namespace

void write_text(const std::filesystem::path& path, const std::string& text) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw ConfigError("cannot write '" + path.string() + "'");
  out << text;
  out.close();
  if (!out) throw ConfigError("failed writing '" + path.string() + "'");
}

void write_energy_csv(const std::filesystem::path& path, const std::vector<EnergyRow>& rows) {
  CsvFile f(path,
            "step,time,energy,rel_deviation,J_dissipation,sigma_dissipation,jump_dissipation,theta_in,theta_out,"
            "identity_residual");
  for (const auto& r : rows)
    f.row(r.step, r.time, r.energy, r.rel_deviation, r.j_dissipation, r.sigma_dissipation, r.jump_dissipation,
          r.theta_in, r.theta_out, r.identity_residual);
  f.close();
}

void write_convergence_csv(const std::filesystem::path& path, const std::vector<ConvergenceRow>& rows) {
  CsvFile f(path, "N,l2_error,l2_order,linf_error,linf_order");
  for (const auto& r : rows) f.row(r.n, r.l2_error, r.l2_order, r.linf_error, r.linf_order);
  f.close();
}

void write_snapshot_csv(const std::filesystem::path& path, const SimState& s, const Mesh& mesh, const Basis& basis,
                        int per_cell) {
  CsvFile f(path, "x,E,H,P,J,Q,sigma");
  Samples e = sample_field(s.E, mesh, basis, per_cell);
  Samples h = sample_field(s.H, mesh, basis, per_cell);
  Samples p = sample_field(s.P, mesh, basis, per_cell);
  Samples j = sample_field(s.J, mesh, basis, per_cell);
  Samples q = sample_field(s.Q, mesh, basis, per_cell);
  Samples g = sample_field(s.sigma, mesh, basis, per_cell);
  for (std::size_t i = 0; i < e.x.size(); ++i) f.row(e.x[i], e.v[i], h.v[i], p.v[i], j.v[i], q.v[i], g.v[i]);
  f.close();
}

void write_pulse_area_csv(const std::filesystem::path& path, const std::vector<std::pair<double, double>>& rows) {
  CsvFile f(path, "time,area");
  for (const auto& [t, a] : rows) f.row(t, a);
  f.close();
}

void write_audit_csv(const std::filesystem::path& path, const std::vector<EnergyAuditRow>& rows) {
  CsvFile f(path, "index,energy_before,energy_after,identity_residual,relative_residual");
  for (const auto& r : rows) f.row(r.index, r.energy_before, r.energy_after, r.identity_residual, r.relative_residual);
  f.close();
}

void write_kink_profile_csv(const std::filesystem::path& path, const KinkProfile& prof) {
  CsvFile f(path, "xi,E,Phi");
  for (std::size_t i = 0; i < prof.size(); ++i)
    f.row(static_cast<double>(i) * prof.step(), prof.E_table()[i], prof.Phi_table()[i]);
  f.close();
}

namespace {

std::string stats_line(const StepStats& st) {
  return fmt::format("steps {}  newton {} (max {})  gmres {}  max global residual {:.3e}  max local residual {:.3e}",
                     st.steps, st.total_newton_iters, st.max_newton_iters, st.total_linear_iters,
                     st.max_global_residual, st.max_local_residual);
}

void kink_experiment(const RunManifest& m, const std::filesystem::path& dir, ManifestOutcome& out) {
  KinkProfile prof = kink_profile(m.model);
  out.files.push_back(dir / "kink_profile.csv");
  write_kink_profile_csv(out.files.back(), prof);
  KinkRunSpec spec;
  spec.scheme = m.scheme;
  spec.flux = m.flux;
  spec.degree = m.degree;
  spec.elements = m.elements;
  spec.cfl = m.cfl;
  spec.t_final = m.t_final;
  spec.fixed_dt = m.dt_rule == DtRule::Fixed;
  spec.track_energy = m.track_energy;
  spec.params = m.model;
  KinkConvergence kc = run_kink_convergence(prof, spec);
  out.summary += fmt::format("kink profile: phi0 {:.17g}  period defect {:.3e}\n", prof.phi0(), prof.period_defect());
  out.summary += fmt::format("{:>6} {:>12} {:>8} {:>12} {:>8}\n", "N", "L2", "order", "Linf", "order");
  for (const auto& r : kc.table)
    out.summary += fmt::format("{:>6} {:>12.3e} {:>8.2f} {:>12.3e} {:>8.2f}\n", r.n, r.l2_error, r.l2_order,
                               r.linf_error, r.linf_order);
  out.files.push_back(dir / "convergence.csv");
  write_convergence_csv(out.files.back(), kc.table);
  for (const auto& run : kc.runs) {
    Mesh mesh(0.0, prof.period(), run.n);
    Basis basis(m.degree);
    out.files.push_back(dir / fmt::format("snapshot_N{}.csv", run.n));
    write_snapshot_csv(out.files.back(), run.result.final_state, mesh, basis);
    if (m.track_energy) {
      out.files.push_back(dir / fmt::format("energy_N{}.csv", run.n));
      write_energy_csv(out.files.back(), run.result.energy);
    }
    out.summary += fmt::format("N={}: dt {:.6g}, {}\n", run.n, run.dt, stats_line(run.result.stats));
  }
}

void soliton_experiment(const RunManifest& m, const std::filesystem::path& dir, ManifestOutcome& out) {
  SolitonRunSpec spec;
  spec.scheme = m.scheme;
  spec.flux = m.flux;
  spec.degree = m.degree;
  spec.elements = m.elements.front();
  spec.cfl = m.cfl;
  spec.accuracy_dt = m.dt_rule == DtRule::Accuracy;
  spec.t_final = m.t_final;
  spec.length = m.length;
  spec.drive = {m.amplitude, m.carrier, m.delay};
  spec.params = m.model;
  spec.snapshot_times = m.snapshot_times;
  spec.pulse_every = m.pulse_every;
  spec.track_energy = m.track_energy;
  SolitonRun run = run_soliton(spec);
  Mesh mesh(0.0, m.length, spec.elements);
  Basis basis(m.degree);
  for (const auto& sn : run.snapshots) {
    out.files.push_back(dir / fmt::format("snapshot_t{:g}.csv", std::round(sn.time * 1e6) / 1e6));
    write_snapshot_csv(out.files.back(), sn.state, mesh, basis);
  }
  out.files.push_back(dir / "pulse_area.csv");
  write_pulse_area_csv(out.files.back(), run.pulse_area);
  if (m.track_energy) {
    out.files.push_back(dir / "energy.csv");
    write_energy_csv(out.files.back(), run.result.energy);
  }
  out.summary += fmt::format("soliton: N={} k={} dt {:.6g}, {}\n", spec.elements, m.degree, run.dt,
                             stats_line(run.result.stats));
  DaughterPulse d = daughter_pulse(run.result.final_state.E, mesh, basis, m.model, m.carrier);
  out.summary += fmt::format("t={:g}: main pulse {:.4f} at x={:.3f}\n", run.result.final_state.time, d.main_peak,
                             d.main_x);
  if (d.found)
    out.summary += fmt::format("leading pulse [{:.3f}, {:.3f}]: peak {:.4e} ({:.2f}% of main), omega {:.4f} = {:.3f} "
                               "carrier\n",
                               d.x_first, d.x_last, d.peak, 100.0 * d.ratio, d.omega, d.omega / m.carrier);
}

void audit_experiment(const RunManifest& m, const std::filesystem::path& dir, ManifestOutcome& out) {
  EnergyAuditSpec spec;
  spec.scheme = m.scheme;
  spec.flux = m.flux;
  spec.degree = m.degree;
  spec.elements = m.elements.front();
  spec.states = m.states;
  spec.seed = m.seed;
  spec.cfl = m.cfl;
  spec.length = m.length;
  spec.params = m.model;
  auto rows = energy_audit(spec);
  double worst = 0.0;
  for (const auto& r : rows) worst = std::max(worst, r.relative_residual);
  out.files.push_back(dir / "audit.csv");
  write_audit_csv(out.files.back(), rows);
  out.summary += fmt::format("energy audit {} / {}: {} states, max relative identity residual {:.3e}\n",
                             to_string(m.scheme), to_string(m.flux), rows.size(), worst);
}

}  // namespace

ManifestOutcome run_manifest(const RunManifest& m) {
  if (m.threads > 0) omp_set_num_threads(m.threads);
  const std::filesystem::path dir(m.output_dir);
  ManifestOutcome out;
  out.files.push_back(dir / "manifest.json");
  write_text(out.files.back(), manifest_text(m));
  switch (m.experiment) {
    case Experiment::KinkConvergence:
    case Experiment::SingleRun: kink_experiment(m, dir, out); break;
    case Experiment::Soliton: soliton_experiment(m, dir, out); break;
    case Experiment::EnergyAudit: audit_experiment(m, dir, out); break;
  }
  return out;
}

}  // namespace kerrdg
