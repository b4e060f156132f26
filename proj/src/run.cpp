#include "kerrdg/run.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "kerrdg/error.hpp"

namespace kerrdg {

std::vector<double> time_steps(double t_final, double dt) {
  if (!(dt > 0.0) || !(t_final >= 0.0)) throw InvalidArgument("need dt > 0 and t_final >= 0");
  if (t_final == 0.0) return {};
  auto n = static_cast<std::size_t>(std::ceil(t_final / dt * (1.0 - 1e-12)));
  n = std::max<std::size_t>(n, 1);
  std::vector<double> steps(n, dt);
  steps.back() = t_final - static_cast<double>(n - 1) * dt;
  return steps;
}

namespace {

void account(StepStats& st, const StepReport& r) {
  ++st.steps;
  st.max_newton_iters = std::max(st.max_newton_iters, r.newton_iters);
  st.total_newton_iters += r.newton_iters;
  st.total_linear_iters += r.linear_iters;
  st.max_local_iters = std::max(st.max_local_iters, r.local_newton_max_iters);
  st.max_local_residual = std::max(st.max_local_residual, r.local_residual);
  if (r.used_global_solve) {
    st.any_global_solve = true;
    st.max_global_residual = std::max(st.max_global_residual, r.final_residual);
  }
}

EnergyRow row_from(const EnergyLedger& L, std::size_t step, double time, double e0, double base) {
  EnergyRow r;
  r.step = step;
  r.time = time;
  r.energy = L.energy_after;
  r.rel_deviation = e0 != 0.0 ? (L.energy_after - base) / base : std::numeric_limits<double>::quiet_NaN();
  r.j_dissipation = L.j_dissipation;
  r.sigma_dissipation = L.sigma_dissipation;
  r.jump_dissipation = L.jump_dissipation;
  r.theta_in = L.theta_in;
  r.theta_out = L.theta_out;
  r.identity_residual = L.identity_residual;
  r.delta = L.delta();
  r.certified = L.certified;
  return r;
}

// base tracks E_h^0 re-expressed in the energy of the current step length
void push_ledger(RunResult& rr, const EnergyLedger& L, std::size_t step, double time, double t0, double& base) {
  if (rr.energy.empty()) {
    base = L.energy_before;
    EnergyRow r0;
    r0.step = 0;
    r0.time = t0;
    r0.energy = L.energy_before;
    r0.certified = L.certified;
    rr.energy.push_back(r0);
  } else {
    base += L.energy_before - rr.energy.back().energy;
  }
  rr.energy.push_back(row_from(L, step, time, rr.energy.front().energy, base));
}

}  // namespace

RunResult run_scheme(const DgOperator& op, const SimState& initial, const RunConfig& cfg,
                     const StepObserver& observer) {
  RunResult rr;
  double base = 0.0;
  const auto dts = time_steps(cfg.t_final, cfg.dt);
  const NewtonConfig& nc = cfg.step.newton;
  const double t0 = initial.time;
  if (observer) observer(initial, 0);

  if (cfg.scheme == SchemeKind::FullyImplicit) {
    SimState s = initial;
    for (std::size_t n = 0; n < dts.size(); ++n) {
      StepResult res = step_implicit(s, dts[n], op, cfg.step);
      account(rr.stats, res.report);
      if (cfg.track_energy) {
        EnergyLedger L = energy_identity_check(s, res.state, nullptr, cfg.scheme, op, dts[n]);
        push_ledger(rr, L, n + 1, res.state.time, t0, base);
      }
      s = std::move(res.state);
      if (observer) observer(s, n + 1);
    }
    rr.final_state = std::move(s);
    return rr;
  }

  if (dts.empty()) {
    rr.final_state = initial;
    return rr;
  }
  SimState s = start_leapfrog(initial, dts[0], op, nc);
  SimState prev;
  double prev_dt = dts[0];
  for (std::size_t n = 0; n < dts.size(); ++n) {
    const double dt = dts[n];
    StepResult res = step_leapfrog(s, dt, op, cfg.step);
    account(rr.stats, res.report);
    if (cfg.track_energy) {
      if (n > 0) {
        StepReport tmp;
        DgField c = dt == prev_dt ? res.state.H_half : leapfrog_forward_half(s, prev_dt, op, nc, tmp);
        EnergyLedger L = energy_identity_check(prev, s, &c, cfg.scheme, op, prev_dt);
        push_ledger(rr, L, n, s.time, t0, base);
      }
      prev = s;
      if (n > 0 && dt != prev_dt) {
        // level n seen through a step of length dt
        StepReport tmp;
        prev.H_half = leapfrog_half_step(s.E, s.H, -1.0, dt, s.time, s.time - 0.5 * dt, op, nc, tmp);
      }
      prev_dt = dt;
    }
    s = std::move(res.state);
    if (observer) observer(s, n + 1);
  }
  if (cfg.track_energy) {
    StepReport tmp;
    DgField c = leapfrog_forward_half(s, prev_dt, op, nc, tmp);
    EnergyLedger L = energy_identity_check(prev, s, &c, cfg.scheme, op, prev_dt);
    push_ledger(rr, L, dts.size(), s.time, t0, base);
  }
  rr.final_state = std::move(s);
  return rr;
}

double default_kink_cfl(SchemeKind scheme, int degree) {
  if (scheme == SchemeKind::LeapFrog) {
    switch (degree) {
      case 1: return 0.2 / kKinkVelocity;
      case 2: return 1.0;
      case 3: return 2.0;
      default: break;
    }
  } else {
    switch (degree) {
      case 1: return 5.0;
      case 2: return 10.0;
      case 3: return 20.0;
      default: break;
    }
  }
  throw InvalidArgument("no tabulated kink CFL for this degree");
}

double kink_time_step(double cfl, double h, int degree) { return cfl * std::pow(h, 0.5 * (degree + 1)); }

double default_soliton_cfl(SchemeKind scheme, FluxKind flux) {
  const bool alt = flux == FluxKind::AlternatingI || flux == FluxKind::AlternatingII;
  if (scheme == SchemeKind::LeapFrog) return alt ? 0.1 : 0.05;
  return alt ? 0.5 : 0.3;
}

KinkConvergence run_kink_convergence(const KinkProfile& prof, const KinkRunSpec& spec) {
  KinkConvergence out;
  const ModelParams& params = spec.params;
  const double T = spec.t_final.value_or(prof.period() / prof.velocity());
  const double cfl = spec.cfl.value_or(default_kink_cfl(spec.scheme, spec.degree));
  std::vector<ErrorNorms> errs;
  for (std::size_t n : spec.elements) {
    Mesh mesh(0.0, prof.period(), n);
    DgOperator op(mesh, spec.degree, params, spec.flux, BoundaryKind::Periodic);
    SimState init = kink_initial_state(prof, mesh, op.basis(), params);
    RunConfig rc;
    rc.scheme = spec.scheme;
    rc.dt = spec.fixed_dt ? cfl * mesh.h() : kink_time_step(cfl, mesh.h(), spec.degree);
    rc.t_final = T;
    rc.step = spec.step;
    rc.track_energy = spec.track_energy;
    KinkRun kr;
    kr.n = n;
    kr.dt = rc.dt;
    kr.result = run_scheme(op, init, rc);
    kr.error = error_norms(kr.result.final_state.E, [&](double x) { return kink_exact_E(prof, x, T); }, mesh,
                           op.basis());
    errs.push_back(kr.error);
    out.runs.push_back(std::move(kr));
  }
  out.table = convergence_table(spec.elements, errs);
  return out;
}

SolitonRun run_soliton(const SolitonRunSpec& spec) {
  SolitonRun out;
  Mesh mesh(0.0, spec.length, spec.elements);
  SolitonBoundary bnd(spec.drive, spec.params);
  DgOperator op(mesh, spec.degree, spec.params, spec.flux, BoundaryKind::SolitonIO, bnd.drivers());
  SimState init = make_zero_state(mesh, op.basis(), HLayout::Collocated);
  RunConfig rc;
  rc.scheme = spec.scheme;
  const double cfl = spec.cfl.value_or(default_soliton_cfl(spec.scheme, spec.flux));
  rc.dt = spec.accuracy_dt ? kink_time_step(cfl, mesh.h(), spec.degree) : cfl * mesh.h();
  rc.t_final = spec.t_final;
  rc.step = spec.step;
  rc.track_energy = spec.track_energy;
  out.dt = rc.dt;

  std::size_t next_snap = 0;
  std::vector<double> snaps = spec.snapshot_times;
  std::sort(snaps.begin(), snaps.end());
  double next_pulse = 0.0;
  out.probe_series.resize(spec.probes.size());
  const double eps_t = 1e-9 * rc.dt;
  StepObserver obs = [&](const SimState& s, std::size_t) {
    while (next_snap < snaps.size() && s.time + eps_t >= snaps[next_snap]) {
      out.snapshots.push_back({s.time, s});
      ++next_snap;
    }
    if (spec.pulse_every > 0.0 && s.time + eps_t >= next_pulse) {
      Samples smp = sample_field(s.E, mesh, op.basis(), 8);
      out.pulse_area.emplace_back(s.time, pulse_area(smp, 0.01).area);
      while (next_pulse <= s.time + eps_t) next_pulse += spec.pulse_every;
    }
    if (!spec.probes.empty()) {
      out.probe_times.push_back(s.time);
      for (std::size_t i = 0; i < spec.probes.size(); ++i)
        out.probe_series[i].push_back(s.E.eval(mesh, op.basis(), spec.probes[i]));
    }
  };
  out.result = run_scheme(op, init, rc, obs);
  return out;
}

StepOptions tight_step_options() {
  StepOptions o;
  o.newton.abs_tol = 1e-13;
  return o;
}

ModelParams energy_audit_model() {
  ModelParams p = soliton_model();
  p.inv_tau = 0.5;
  return p;
}

SimState random_smooth_state(const Mesh& mesh, const Basis& basis, const ModelParams& params, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> U(-1.0, 1.0);
  std::uniform_real_distribution<double> phase(0.0, 2.0 * std::numbers::pi);
  const double L = mesh.length(), x0 = mesh.x_left();
  auto field = [&](double amp) {
    std::array<double, 3> a{}, ph{};
    for (int m = 0; m < 3; ++m) {
      a[m] = amp * U(rng);
      ph[m] = phase(rng);
    }
    return project_l2(
        [=](double x) {
          double v = 0.0;
          for (int m = 0; m < 3; ++m) v += a[m] * std::sin(2.0 * std::numbers::pi * (m + 1) * (x - x0) / L + ph[m]);
          return v;
        },
        mesh, basis);
  };
  SimState s = make_zero_state(mesh, basis, HLayout::Collocated);
  s.E = field(0.5);
  s.H = field(0.5);
  s.P = field(0.2);
  s.J = field(0.5);
  s.Q = field(0.1);
  s.sigma = field(0.1);
  s.Y = project_pointwise(s.E, basis, [](double e) { return e * e * e; });
  s.D = constitutive_project(s.E, s.P, s.Q, s.Y, params, basis);
  return s;
}

std::vector<EnergyAuditRow> energy_audit(const EnergyAuditSpec& spec) {
  if (spec.states < 0) throw InvalidArgument("state count must be non-negative");
  Mesh mesh(0.0, spec.length, spec.elements);
  DgOperator op(mesh, spec.degree, spec.params, spec.flux, BoundaryKind::Periodic);
  std::mt19937_64 rng(spec.seed);
  RunConfig rc;
  rc.scheme = spec.scheme;
  rc.dt = spec.cfl * mesh.h();
  rc.t_final = rc.dt;
  rc.track_energy = true;
  rc.step = spec.step;
  std::vector<EnergyAuditRow> rows;
  for (int i = 0; i < spec.states; ++i) {
    SimState s = random_smooth_state(mesh, op.basis(), spec.params, rng);
    RunResult rr = run_scheme(op, s, rc);
    EnergyAuditRow r;
    r.index = i;
    r.energy_before = rr.energy.front().energy;
    r.energy_after = rr.energy.back().energy;
    r.identity_residual = rr.energy.back().identity_residual;
    const double scale = std::max(std::abs(r.energy_before), std::abs(r.energy_after));
    r.relative_residual = scale > 0.0 ? r.identity_residual / scale : r.identity_residual;
    rows.push_back(r);
  }
  return rows;
}

}  // namespace kerrdg
