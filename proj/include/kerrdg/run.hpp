#ifndef KERRDG_RUN_HPP
#define KERRDG_RUN_HPP

#include <cstdint>
#include <functional>
#include <random>
#include <optional>
#include <string>
#include <vector>

#include "kerrdg/analysis.hpp"
#include "kerrdg/energy.hpp"
#include "kerrdg/integrators.hpp"
#include "kerrdg/kink.hpp"
#include "kerrdg/soliton.hpp"

namespace kerrdg {

struct EnergyRow {
  std::size_t step = 0;
  double time = 0.0;
  double energy = 0.0;
  double rel_deviation = 0.0;  // NaN when E_h^0 = 0
  double j_dissipation = 0.0;
  double sigma_dissipation = 0.0;
  double jump_dissipation = 0.0;
  double theta_in = 0.0;
  double theta_out = 0.0;
  double identity_residual = 0.0;
  // energy change over this step, both ends measured with this step's dt
  double delta = 0.0;
  bool certified = true;
};

struct StepStats {
  std::size_t steps = 0;
  int max_newton_iters = 0;
  int total_newton_iters = 0;
  int total_linear_iters = 0;
  int max_local_iters = 0;
  double max_global_residual = 0.0;
  double max_local_residual = 0.0;
  bool any_global_solve = false;
};

// Time grid: uniform dt with a shortened last step.
std::vector<double> time_steps(double t_final, double dt);

struct RunConfig {
  SchemeKind scheme = SchemeKind::LeapFrog;
  double dt = 0.0;
  double t_final = 0.0;
  StepOptions step;
  bool track_energy = true;
};

// Called after each step with the state at t^{n+1}; also once with the initial state (step 0).
using StepObserver = std::function<void(const SimState& state, std::size_t step)>;

struct RunResult {
  SimState final_state;
  std::vector<EnergyRow> energy;
  StepStats stats;
};

RunResult run_scheme(const DgOperator& op, const SimState& initial, const RunConfig& cfg,
                     const StepObserver& observer = {});

// Default CFL numbers per scheme, degree and flux.
double default_kink_cfl(SchemeKind scheme, int degree);
double kink_time_step(double cfl, double h, int degree);
double default_soliton_cfl(SchemeKind scheme, FluxKind flux);

struct KinkRunSpec {
  SchemeKind scheme = SchemeKind::LeapFrog;
  FluxKind flux = FluxKind::Upwind;
  int degree = 2;
  std::vector<std::size_t> elements{100, 200, 400};
  std::optional<double> cfl;
  std::optional<double> t_final;  // default one period, 6/v
  bool fixed_dt = false;          // dt = cfl * h instead of cfl * h^{(k+1)/2}
  ModelParams params = kink_model();  // must match the profile
  StepOptions step;
  bool track_energy = false;
};

struct KinkRun {
  std::size_t n = 0;
  double dt = 0.0;
  ErrorNorms error;
  RunResult result;
};

struct KinkConvergence {
  std::vector<KinkRun> runs;
  std::vector<ConvergenceRow> table;
};

KinkConvergence run_kink_convergence(const KinkProfile& prof, const KinkRunSpec& spec);

struct SolitonRunSpec {
  SchemeKind scheme = SchemeKind::LeapFrog;
  FluxKind flux = FluxKind::AlternatingI;
  int degree = 2;
  std::size_t elements = 1600;
  std::optional<double> cfl;
  bool accuracy_dt = false;  // dt = cfl * h^{(k+1)/2} instead of cfl * h
  double t_final = 80.0;
  double length = 45.0;
  SolitonDrive drive{2.0, 12.57, 20.0};
  ModelParams params = soliton_model();
  std::vector<double> snapshot_times{40.0, 80.0};
  double pulse_every = 0.5;
  std::vector<double> probes{};
  StepOptions step;
  bool track_energy = true;
};

struct Snapshot {
  double time = 0.0;
  SimState state;
};

struct SolitonRun {
  double dt = 0.0;
  std::vector<Snapshot> snapshots;
  std::vector<std::pair<double, double>> pulse_area;
  std::vector<double> probe_times;
  std::vector<std::vector<double>> probe_series;  // one series per probe point
  RunResult result;
};

SolitonRun run_soliton(const SolitonRunSpec& spec);

// Newton driven to round-off, so the identity residual reflects the scheme rather than the solver.
StepOptions tight_step_options();

// Soliton medium with visible Lorentz damping, so every ledger term is active.
ModelParams energy_audit_model();

// Sum of three random Fourier modes per field on a periodic mesh; D and Y consistent with E.
SimState random_smooth_state(const Mesh& mesh, const Basis& basis, const ModelParams& params, std::mt19937_64& rng);

struct EnergyAuditSpec {
  SchemeKind scheme = SchemeKind::LeapFrog;
  FluxKind flux = FluxKind::Central;
  int degree = 2;
  std::size_t elements = 16;
  int states = 100;
  std::uint64_t seed = 20240601;
  double cfl = 0.1;  // dt = cfl * h
  double length = 6.283185307179586;
  ModelParams params = energy_audit_model();
  StepOptions step = tight_step_options();
};

struct EnergyAuditRow {
  int index = 0;
  double energy_before = 0.0;
  double energy_after = 0.0;
  double identity_residual = 0.0;
  double relative_residual = 0.0;
};

// One step from each random state, periodic boundary.
std::vector<EnergyAuditRow> energy_audit(const EnergyAuditSpec& spec);

}  // namespace kerrdg

#endif
