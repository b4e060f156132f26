#include <cmath>
#include <numbers>
#include <ostream>
#include <random>
#include <string>

#include <gtest/gtest.h>

#include "kerrdg/energy.hpp"
#include "kerrdg/error.hpp"
#include "kerrdg/integrators.hpp"
#include "kerrdg/newton.hpp"
#include "kerrdg/run.hpp"

using namespace kerrdg;

namespace {

constexpr FluxKind kAll[] = {FluxKind::Central, FluxKind::AlternatingI, FluxKind::AlternatingII, FluxKind::Upwind};

ModelParams vacuum() {
  ModelParams p;
  p.eps_inf = 1.0;
  return p;
}

// E = H = sin(2 pi (x + t)) solves the free system with eps_inf = 1.
SimState plane_wave(const Mesh& mesh, const Basis& b) {
  SimState s = make_zero_state(mesh, b);
  auto f = [](double x) { return std::sin(2.0 * std::numbers::pi * x); };
  s.E = project_l2(f, mesh, b);
  s.H = s.E;
  s.D = s.E;
  s.Y = project_pointwise(s.E, b, [](double e) { return e * e * e; });
  return s;
}

RunResult run(const DgOperator& op, const SimState& s0, SchemeKind scheme, double dt, double T,
              bool energy = false, StepOptions opt = {}) {
  RunConfig rc;
  rc.scheme = scheme;
  rc.dt = dt;
  rc.t_final = T;
  rc.track_energy = energy;
  rc.step = opt;
  return run_scheme(op, s0, rc);
}

double bisect(const std::function<double(double)>& g, double lo, double hi) {
  for (int i = 0; i < 200; ++i) {
    double mid = 0.5 * (lo + hi);
    if ((g(lo) < 0) == (g(mid) < 0))
      lo = mid;
    else
      hi = mid;
  }
  return 0.5 * (lo + hi);
}

}  // namespace

TEST(Gmres, SolvesSmallSystem) {
  Eigen::Matrix4d A;
  A << 4, 1, 0, 0, 1, 3, 1, 0, 0, 1, 2, 0.5, 0.2, 0, 0.5, 5;
  std::vector<double> b{1, 2, 3, 4}, x(4, 0.0);
  LinearOperator op = [&](std::span<const double> v, std::span<double> out) {
    Eigen::Map<const Eigen::Vector4d> vv(v.data());
    Eigen::Map<Eigen::Vector4d>(out.data()) = A * vv;
  };
  KrylovResult r = gmres(op, b, x, 30, 1e-14, 100);
  EXPECT_TRUE(r.converged);
  Eigen::Vector4d ref = A.partialPivLu().solve(Eigen::Vector4d(1, 2, 3, 4));
  for (int i = 0; i < 4; ++i) EXPECT_NEAR(x[i], ref[i], 1e-12);
}

TEST(NewtonKrylov, ScalarCubeRoot) {
  VectorFunction F = [](std::span<const double> u, std::span<double> r) { r[0] = u[0] * u[0] * u[0] - 8.0; };
  std::vector<double> u{3.0};
  StepReport rep = newton_krylov(F, u, NewtonConfig{});
  EXPECT_TRUE(rep.converged);
  EXPECT_LE(rep.final_residual, 1e-10);
  EXPECT_NEAR(u[0], 2.0, 1e-11);
}

TEST(NewtonKrylov, AffineResidual) {
  Eigen::Matrix3d A;
  A << 3, 1, 0, 1, 4, 1, 0, 1, 5;
  Eigen::Vector3d b(1, -2, 0.5);
  VectorFunction F = [&](std::span<const double> u, std::span<double> r) {
    Eigen::Map<Eigen::Vector3d>(r.data()) = A * Eigen::Map<const Eigen::Vector3d>(u.data()) - b;
  };
  Eigen::Vector3d ref = A.lu().solve(b);
  NewtonConfig cfg;
  cfg.gmres_forcing = 0.0;
  // one step is exact up to the difference-quotient rounding floor, about sqrt(eps) * |R|
  cfg.abs_tol = 1e-6;
  std::vector<double> u(3, 0.0);
  StepReport rep = newton_krylov(F, u, cfg);
  EXPECT_TRUE(rep.converged);
  EXPECT_EQ(rep.newton_iters, 1);
  EXPECT_LE(rep.final_residual, 1e-7);
  // below that floor a second step finishes the job
  cfg.abs_tol = 1e-10;
  std::vector<double> w(3, 0.0);
  rep = newton_krylov(F, w, cfg);
  EXPECT_TRUE(rep.converged);
  EXPECT_LE(rep.newton_iters, 2);
  EXPECT_LE(rep.final_residual, 1e-10);
  for (int i = 0; i < 3; ++i) EXPECT_NEAR(w[i], ref[i], 1e-10);
}

TEST(NewtonKrylov, StartAtSolution) {
  VectorFunction F = [](std::span<const double> u, std::span<double> r) { r[0] = u[0] * u[0] * u[0] - 8.0; };
  std::vector<double> u{2.0};
  StepReport rep = newton_krylov(F, u, NewtonConfig{});
  EXPECT_EQ(rep.newton_iters, 0);
  EXPECT_TRUE(rep.converged);
}

TEST(LocalNewton, ScalarKerrPrototype) {
  const double ei = 2.25, a = 0.07, th = 0.3, e0 = 0.0, d = 3.0;
  auto g = [&](double e) { return ei * e + a * (1 - th) * 1.5 * (e * e + e0 * e0) * (e - e0) - d; };
  auto sys = [&](const LocalVector& x, LocalVector& r, LocalMatrix& J) {
    double e = x[0];
    r[0] = g(e);
    J(0, 0) = ei + a * (1 - th) * 1.5 * (3 * e * e - 2 * e * e0 + e0 * e0);
  };
  LocalVector x(1);
  x[0] = 0.0;
  LocalNewtonResult res = local_newton(sys, x, 1e-13, 50);
  EXPECT_TRUE(res.converged);
  EXPECT_NEAR(x[0], bisect(g, 0.0, 10.0), 1e-12);
}

TEST(LocalNewton, AffineSystemOneIteration) {
  Mesh mesh(0.0, 1.0, 1);
  Basis b(3);
  ModelParams p = soliton_model();
  p.a = 0.0;
  ConstitutiveKernel ker(b, p, 0.01);
  std::vector<double> E{0.3, -0.2, 0.1, 0.05}, P{0.1, 0, 0, 0}, J{0, 0.2, 0, 0}, Q(4, 0.0), sg(4, 0.0), Y(4, 0.0);
  ElementOld old{E, P, J, Q, sg, Y};
  LocalVector target(4);
  target << 1.0, 0.5, -0.25, 0.125;
  auto sys = [&](const LocalVector& x, LocalVector& r, LocalMatrix& Jm) {
    LocalVector d(4);
    ker.apply(old, {x.data(), 4}, {d.data(), 4}, &Jm, nullptr);
    r = d - target;
  };
  LocalVector x(4);
  for (int m = 0; m < 4; ++m) x[m] = E[m];
  LocalNewtonResult res = local_newton(sys, x, 1e-13, 50);
  EXPECT_TRUE(res.converged);
  EXPECT_EQ(res.iterations, 1);

  LocalNewtonResult again = local_newton(sys, x, 1e-13, 50);
  EXPECT_LE(again.iterations, 1);
  EXPECT_LE(again.residual, 1e-13);
}

TEST(LocalNewton, LinearLeapFrogStepUsesOneIteration) {
  Mesh mesh(0.0, 2.0 * std::numbers::pi, 16);
  ModelParams p = soliton_model();
  p.a = 0.0;
  DgOperator op(mesh, 2, p, FluxKind::Central, BoundaryKind::Periodic);
  std::mt19937_64 rng(4);
  SimState s = random_smooth_state(mesh, op.basis(), p, rng);
  const double dt = 0.1 * mesh.h();
  SimState st = start_leapfrog(s, dt, op, NewtonConfig{});
  StepResult r = step_leapfrog(st, dt, op, StepOptions{});
  EXPECT_TRUE(r.report.converged);
  EXPECT_FALSE(r.report.used_global_solve);
  EXPECT_EQ(r.report.local_newton_max_iters, 1);
}

TEST(Step, ZeroStateIsFixedPoint) {
  Mesh mesh(0.0, 6.0, 8);
  for (auto scheme : {SchemeKind::LeapFrog, SchemeKind::FullyImplicit})
    for (auto flux : kAll)
      for (auto bc : {BoundaryKind::Periodic, BoundaryKind::SolitonIO}) {
        DgOperator op(mesh, 2, soliton_model(), flux, bc);
        SimState s = make_zero_state(mesh, op.basis());
        if (scheme == SchemeKind::LeapFrog) s = start_leapfrog(s, 0.1, op, NewtonConfig{});
        StepResult r = step(scheme, s, 0.1, op, StepOptions{});
        EXPECT_EQ(r.report.newton_iters, 0);
        EXPECT_TRUE(r.report.converged);
        for (const DgField* f : {&r.state.E, &r.state.H, &r.state.D, &r.state.P, &r.state.J, &r.state.Q,
                                 &r.state.sigma, &r.state.Y})
          for (double c : f->coeffs()) EXPECT_EQ(c, 0.0);
        EXPECT_NEAR(r.state.time, 0.1, 1e-15);
      }
}

TEST(Step, LocalAndGlobalLeapFrogAgree) {
  Mesh mesh(0.0, 2.0 * std::numbers::pi, 12);
  ModelParams p = energy_audit_model();
  std::mt19937_64 rng(8);
  for (auto flux : {FluxKind::Central, FluxKind::AlternatingI, FluxKind::AlternatingII}) {
    DgOperator op(mesh, 2, p, flux, BoundaryKind::Periodic);
    SimState s = random_smooth_state(mesh, op.basis(), p, rng);
    const double dt = 0.1 * mesh.h();
    SimState st = start_leapfrog(s, dt, op, NewtonConfig{});
    StepOptions local, global;
    global.strategy = SolveStrategy::Global;
    StepResult a = step_leapfrog(st, dt, op, local);
    StepResult g = step_leapfrog(st, dt, op, global);
    EXPECT_FALSE(a.report.used_global_solve);
    EXPECT_TRUE(g.report.used_global_solve);
    EXPECT_LT(max_abs_diff(a.state.E, g.state.E), 1e-10);
    EXPECT_LT(max_abs_diff(a.state.H_half, g.state.H_half), 1e-10);
    EXPECT_LT(max_abs_diff(a.state.D, g.state.D), 1e-10);
    EXPECT_LT(max_abs_diff(a.state.P, g.state.P), 1e-10);
    EXPECT_LT(max_abs_diff(a.state.Q, g.state.Q), 1e-10);
  }
}

TEST(Step, ConstitutiveConsistencyAfterStep) {
  Mesh mesh(0.0, 2.0 * std::numbers::pi, 10);
  ModelParams p = energy_audit_model();
  std::mt19937_64 rng(21);
  for (auto scheme : {SchemeKind::LeapFrog, SchemeKind::FullyImplicit})
    for (auto flux : kAll) {
      DgOperator op(mesh, 2, p, flux, BoundaryKind::Periodic);
      SimState s = random_smooth_state(mesh, op.basis(), p, rng);
      RunResult rr = run(op, s, scheme, 0.1 * mesh.h(), 3 * 0.1 * mesh.h());
      const SimState& f = rr.final_state;
      DgField D = constitutive_project(f.E, f.P, f.Q, f.Y, p, op.basis());
      EXPECT_LT(max_abs_diff(D, f.D), 1e-10) << to_string(scheme) << " " << to_string(flux);
    }
}

TEST(Convergence, LinearPlaneWaveSpatialOrder) {
  for (int k = 1; k <= 2; ++k) {
    std::vector<ErrorNorms> err;
    std::vector<std::size_t> ns{8, 16, 32, 64, 128};
    for (auto n : ns) {
      Mesh mesh(0.0, 1.0, n);
      DgOperator op(mesh, k, vacuum(), FluxKind::AlternatingI, BoundaryKind::Periodic);
      const double dt = 0.05 * std::pow(mesh.h(), 0.5 * (k + 1));
      RunResult rr = run(op, plane_wave(mesh, op.basis()), SchemeKind::LeapFrog, dt, 0.5);
      err.push_back(error_norms(rr.final_state.E,
                                [](double x) { return std::sin(2.0 * std::numbers::pi * (x + 0.5)); }, mesh,
                                op.basis()));
    }
    // the alternating-flux error oscillates between meshes, so fit the slope over the sweep
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (std::size_t i = 0; i < ns.size(); ++i) {
      const double x = std::log(1.0 / ns[i]), y = std::log(err[i].l2);
      sx += x, sy += y, sxx += x * x, sxy += x * y;
    }
    const double m = static_cast<double>(ns.size());
    EXPECT_NEAR((m * sxy - sx * sy) / (m * sxx - sx * sx), k + 1.0, 0.3) << "k=" << k;
  }
}

TEST(Convergence, SecondOrderInTime) {
  Mesh mesh(0.0, 1.0, 16);
  for (auto scheme : {SchemeKind::LeapFrog, SchemeKind::FullyImplicit}) {
    DgOperator op(mesh, 2, vacuum(), FluxKind::Central, BoundaryKind::Periodic);
    SimState s0 = plane_wave(mesh, op.basis());
    const double T = 0.5, dt0 = 0.1 * mesh.h();
    DgField ref = run(op, s0, scheme, dt0 / 32, T).final_state.E;
    std::vector<double> e;
    for (int r : {1, 2, 4}) e.push_back(max_abs_diff(run(op, s0, scheme, dt0 / r, T).final_state.E, ref));
    for (std::size_t i = 1; i < e.size(); ++i)
      EXPECT_NEAR(std::log2(e[i - 1] / e[i]), 2.0, 0.3) << to_string(scheme);
  }
}

TEST(Stability, OversizedLeapFrogStepBlowsUp) {
  Mesh mesh(0.0, 1.0, 32);
  DgOperator op(mesh, 1, vacuum(), FluxKind::Central, BoundaryKind::Periodic);
  SimState s0 = plane_wave(mesh, op.basis());
  bool blown = false;
  try {
    RunResult rr = run(op, s0, SchemeKind::LeapFrog, 2.0 * mesh.h(), 400 * 2.0 * mesh.h());
    double m = 0.0;
    for (double c : rr.final_state.E.coeffs()) m = std::isfinite(c) ? std::max(m, std::abs(c)) : 1e300;
    blown = m > 1e3;
  } catch (const SolverError&) {
    blown = true;
  }
  EXPECT_TRUE(blown);
}

TEST(Stability, StableLeapFrogStepStaysBounded) {
  Mesh mesh(0.0, 1.0, 32);
  DgOperator op(mesh, 1, vacuum(), FluxKind::Central, BoundaryKind::Periodic);
  SimState s0 = plane_wave(mesh, op.basis());
  RunResult rr = run(op, s0, SchemeKind::LeapFrog, 0.1 * mesh.h(), 400 * 0.1 * mesh.h());
  double before = 0.0, after = 0.0;
  for (double c : s0.E.coeffs()) before += c * c;
  for (double c : rr.final_state.E.coeffs()) after += c * c;
  EXPECT_NEAR(after / before, 1.0, 0.1);
}

namespace kerrdg {
void PrintTo(SchemeKind s, std::ostream* os) { *os << to_string(s); }
void PrintTo(FluxKind f, std::ostream* os) { *os << to_string(f); }
}  // namespace kerrdg

class EnergyIdentity : public ::testing::TestWithParam<std::tuple<SchemeKind, FluxKind>> {};

TEST_P(EnergyIdentity, RandomStatesOneStep) {
  EnergyAuditSpec spec;
  spec.scheme = std::get<0>(GetParam());
  spec.flux = std::get<1>(GetParam());
  spec.states = 10;
  spec.seed = 12345;
  for (const auto& r : energy_audit(spec)) EXPECT_LT(r.relative_residual, 1e-11) << "state " << r.index;
}

INSTANTIATE_TEST_SUITE_P(AllCombinations, EnergyIdentity,
                         ::testing::Combine(::testing::Values(SchemeKind::LeapFrog, SchemeKind::FullyImplicit),
                                            ::testing::ValuesIn(kAll)),
                         [](const auto& info) {
                           return std::string(to_string(std::get<0>(info.param))) + "_" +
                                  to_string(std::get<1>(info.param));
                         });

TEST(EnergyBehaviour, ConservativeLimitLeapFrogAlternating) {
  Mesh mesh(0.0, 2.0 * std::numbers::pi, 16);
  ModelParams p = kink_model();
  ASSERT_EQ(p.inv_tau, 0.0);
  ASSERT_EQ(p.theta, 0.0);
  std::mt19937_64 rng(17);
  for (auto flux : {FluxKind::AlternatingI, FluxKind::AlternatingII, FluxKind::Central}) {
    DgOperator op(mesh, 2, p, flux, BoundaryKind::Periodic);
    SimState s = random_smooth_state(mesh, op.basis(), p, rng);
    RunResult rr = run(op, s, SchemeKind::LeapFrog, 0.05 * mesh.h(), 20 * 0.05 * mesh.h(), true, tight_step_options());
    const double e0 = rr.energy.front().energy;
    for (const auto& row : rr.energy) {
      EXPECT_EQ(row.j_dissipation, 0.0);
      EXPECT_EQ(row.sigma_dissipation, 0.0);
      EXPECT_EQ(row.jump_dissipation, 0.0);
      EXPECT_LT(row.identity_residual, 1e-12 * std::abs(e0));
      EXPECT_LT(std::abs(row.energy - e0), 1e-12 * std::abs(e0));
    }
  }
}

TEST(EnergyBehaviour, UpwindMonotoneOverThousandSteps) {
  Mesh mesh(0.0, 2.0 * std::numbers::pi, 16);
  ModelParams p = energy_audit_model();
  std::mt19937_64 rng(2024);
  for (auto scheme : {SchemeKind::LeapFrog, SchemeKind::FullyImplicit}) {
    DgOperator op(mesh, 2, p, FluxKind::Upwind, BoundaryKind::Periodic);
    SimState s = random_smooth_state(mesh, op.basis(), p, rng);
    const double dt = 0.1 * mesh.h();
    RunResult rr = run(op, s, scheme, dt, 1000 * dt, true);
    ASSERT_EQ(rr.energy.size(), 1001u);
    for (std::size_t i = 1; i < rr.energy.size(); ++i) EXPECT_LE(rr.energy[i].delta, 0.0) << "step " << i;
    EXPECT_LT(rr.energy.back().energy, rr.energy.front().energy);
  }
}

TEST(EnergyBehaviour, ImplicitNonIncreasingAtLargeSteps) {
  Mesh mesh(0.0, 2.0 * std::numbers::pi, 16);
  ModelParams p = energy_audit_model();
  std::mt19937_64 rng(77);
  for (auto flux : kAll)
    for (double cfl : {5.0, 20.0}) {
      DgOperator op(mesh, 2, p, flux, BoundaryKind::Periodic);
      SimState s = random_smooth_state(mesh, op.basis(), p, rng);
      RunResult rr = run(op, s, SchemeKind::FullyImplicit, cfl * mesh.h(), 10 * cfl * mesh.h(), true,
                         tight_step_options());
      for (std::size_t i = 1; i < rr.energy.size(); ++i)
        EXPECT_LE(rr.energy[i].delta, 1e-12 * rr.energy.front().energy) << to_string(flux) << " cfl " << cfl;
    }
}

TEST(NewtonKrylov, ImplicitSolitonStepIterationBound) {
  SolitonRunSpec spec;
  spec.scheme = SchemeKind::FullyImplicit;
  spec.flux = FluxKind::Upwind;
  spec.elements = 400;
  spec.cfl = 0.3;
  spec.drive.delay = 2.0;
  spec.t_final = 3.0;
  spec.snapshot_times = {};
  spec.track_energy = false;
  SolitonRun run = run_soliton(spec);
  EXPECT_LE(run.result.stats.max_newton_iters, 10);
  EXPECT_LE(run.result.stats.max_global_residual, 1e-10);
}
