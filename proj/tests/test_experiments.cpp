#include <cmath>
#include <complex>
#include <numbers>

#include <gtest/gtest.h>

#include "kerrdg/error.hpp"
#include "kerrdg/kink.hpp"
#include "kerrdg/run.hpp"
#include "kerrdg/soliton.hpp"

using namespace kerrdg;

namespace {

const KinkProfile& shared_profile() {
  static const KinkProfile prof = kink_profile(kink_model());
  return prof;
}

}  // namespace

TEST(KinkProfile, PeriodicToTolerance) {
  const KinkProfile& prof = shared_profile();
  EXPECT_EQ(prof.size(), 160001u);
  EXPECT_DOUBLE_EQ(prof.period(), 6.0);
  EXPECT_LT(prof.period_defect(), 1e-6);
  EXPECT_LT(prof.slope_defect(), 1e-6);
  EXPECT_NEAR(prof.phi0(), kKinkPhi0, 1e-12);
}

TEST(KinkProfile, LiteralSlopeDefectRegression) {
  KinkProfileOptions opt;
  opt.refine_periodicity = false;
  KinkProfile prof = kink_profile(kink_model(), opt);
  EXPECT_EQ(prof.phi0(), kKinkPhi0);
  EXPECT_GT(prof.period_defect(), 5e-5);
  EXPECT_LT(prof.period_defect(), 1e-4);
}

TEST(KinkProfile, SensitiveToInitialSlope) {
  KinkProfileOptions opt;
  opt.refine_periodicity = false;
  opt.phi0 = 1.1 * kKinkPhi0;
  double defect = 0.0;
  try {
    defect = kink_profile(kink_model(), opt).period_defect();
  } catch (const std::exception&) {
    defect = INFINITY;
  }
  EXPECT_TRUE(!std::isfinite(defect) || defect > 1e3 * shared_profile().period_defect());
}

TEST(KinkProfile, OddSymmetricKinkAntikink) {
  // the half-period zero drifts with the third-order march error
  const KinkProfile& prof = shared_profile();
  for (double xi : {0.3, 0.9, 1.7, 2.4}) EXPECT_NEAR(prof.E(xi), -prof.E(6.0 - xi), 2e-4);
  EXPECT_NEAR(prof.E(3.0), 0.0, 2e-4);
  EXPECT_GT(prof.E(1.5), 0.0);
  EXPECT_LT(prof.E(4.5), 0.0);
  KinkProfileOptions fine;
  fine.n_steps = 4 * fine.n_steps;
  KinkProfile refined = kink_profile(kink_model(), fine);
  EXPECT_NEAR(refined.E(3.0), 0.0, 1e-5);
  EXPECT_LT(std::abs(refined.E(3.0)), std::abs(prof.E(3.0)) / 30.0);
  for (double xi : {0.3, 0.9, 1.7, 2.4}) EXPECT_NEAR(refined.E(xi), -refined.E(6.0 - xi), 1e-5);
}

TEST(KinkProfile, SlopeIsDerivative) {
  const KinkProfile& prof = shared_profile();
  const double h = prof.step();
  for (std::size_t i : {1000u, 40000u, 80000u, 120000u, 159000u}) {
    double fd = (prof.E_table()[i + 1] - prof.E_table()[i - 1]) / (2 * h);
    EXPECT_NEAR(fd, prof.Phi_table()[i], 1e-6);
  }
}

TEST(KinkProfile, SingularityGuard) {
  ModelParams p = kink_model();
  KinkProfileOptions opt;
  opt.refine_periodicity = false;
  opt.phi0 = 3.0;  // E grows past the root of 1 - eps_inf v^2 - 3 a v^2 E^2
  EXPECT_THROW(kink_profile(p, opt), SolverError);
}

TEST(KinkInitialState, ConsistentFields) {
  const KinkProfile& prof = shared_profile();
  ModelParams p = kink_model();
  Mesh mesh(0.0, 6.0, 100);
  Basis b(2);
  SimState s = kink_initial_state(prof, mesh, b, p);
  const double v = prof.velocity();
  std::vector<double> e(b.n_quad()), h(b.n_quad()), d(b.n_quad());
  for (std::size_t j = 0; j < mesh.size(); ++j) {
    b.to_nodes(s.E.element(j), e);
    b.to_nodes(s.H.element(j), h);
    b.to_nodes(s.D.element(j), d);
    for (int q = 0; q < b.n_quad(); ++q) {
      EXPECT_NEAR(h[q], -e[q] / v, 1e-12);
      EXPECT_NEAR(d[q], e[q] / (v * v), 1e-4);
    }
  }
  for (double c : s.Q.coeffs()) EXPECT_EQ(c, 0.0);
  for (double c : s.sigma.coeffs()) EXPECT_EQ(c, 0.0);
}

TEST(KinkInitialState, ZeroProfile) {
  KinkProfile zero(std::vector<double>(11, 0.0), std::vector<double>(11, 0.0), 6.0, kKinkVelocity, 0.0);
  Mesh mesh(0.0, 6.0, 10);
  Basis b(2);
  SimState s = kink_initial_state(zero, mesh, b, kink_model());
  for (const DgField* f : {&s.E, &s.H, &s.D, &s.P, &s.J, &s.Y})
    for (double c : f->coeffs()) EXPECT_EQ(c, 0.0);
}

TEST(KinkRun, CoarseLeapFrogConverges) {
  KinkRunSpec spec;
  spec.elements = {25, 50};
  KinkConvergence kc = run_kink_convergence(shared_profile(), spec);
  ASSERT_EQ(kc.table.size(), 2u);
  EXPECT_GT(kc.table[1].l2_order, 2.5);
  EXPECT_LT(kc.table[1].l2_error, 1e-3);
  for (const auto& r : kc.runs) EXPECT_LE(r.result.stats.max_global_residual, 1e-10);
}

TEST(TimeGrid, ShortenedLastStep) {
  auto dts = time_steps(1.0, 0.3);
  ASSERT_EQ(dts.size(), 4u);
  EXPECT_NEAR(dts.back(), 0.1, 1e-14);
  auto even = time_steps(1.0, 0.25);
  ASSERT_EQ(even.size(), 4u);
  EXPECT_DOUBLE_EQ(even.back(), 0.25);
}

TEST(CflDefaults, Tables) {
  EXPECT_NEAR(default_kink_cfl(SchemeKind::LeapFrog, 1), 0.2 / kKinkVelocity, 1e-14);
  EXPECT_DOUBLE_EQ(default_kink_cfl(SchemeKind::LeapFrog, 2), 1.0);
  EXPECT_DOUBLE_EQ(default_kink_cfl(SchemeKind::LeapFrog, 3), 2.0);
  EXPECT_DOUBLE_EQ(default_kink_cfl(SchemeKind::FullyImplicit, 1), 5.0);
  EXPECT_DOUBLE_EQ(default_kink_cfl(SchemeKind::FullyImplicit, 2), 10.0);
  EXPECT_DOUBLE_EQ(default_kink_cfl(SchemeKind::FullyImplicit, 3), 20.0);
  EXPECT_DOUBLE_EQ(default_soliton_cfl(SchemeKind::LeapFrog, FluxKind::Central), 0.05);
  EXPECT_DOUBLE_EQ(default_soliton_cfl(SchemeKind::LeapFrog, FluxKind::AlternatingI), 0.1);
  EXPECT_DOUBLE_EQ(default_soliton_cfl(SchemeKind::FullyImplicit, FluxKind::Upwind), 0.3);
  EXPECT_DOUBLE_EQ(default_soliton_cfl(SchemeKind::FullyImplicit, FluxKind::AlternatingII), 0.5);
  EXPECT_NEAR(kink_time_step(1.0, 0.04, 2), 0.008, 1e-15);
}

TEST(Dispersion, Limits) {
  ModelParams p = soliton_model();
  EXPECT_EQ(dispersion_k(0.0, p), std::complex<double>(0.0, 0.0));
  ModelParams vac = p;
  vac.omega_p = 0.0;
  auto k = dispersion_k(7.0, vac);
  EXPECT_NEAR(k.real(), 7.0 * 1.5, 1e-14);
  EXPECT_EQ(k.imag(), 0.0);
}

TEST(Dispersion, GoldenValueAtCarrier) {
  // extended-precision evaluation of the closed form
  auto k = dispersion_k(12.57, soliton_model());
  EXPECT_NEAR(k.real(), 15.000987029192926297, 1e-12);
  EXPECT_NEAR(k.imag(), -5.1535689172478231918e-6, 1e-15);
}

TEST(Dispersion, BranchPointFlagged) {
  ModelParams p = soliton_model();
  p.inv_tau = 0.0;
  const double edge = std::sqrt(p.omega0 * p.omega0 + p.omega_p * p.omega_p / p.eps_inf);
  EXPECT_THROW(dispersion_k(edge, p), InvalidArgument);
  EXPECT_THROW(dispersion_k(p.omega0, p), InvalidArgument);
}

TEST(Dispersion, InverseRoundTrip) {
  ModelParams p = soliton_model();
  for (double w : {12.57, 20.0, 34.0, 37.71, 80.0}) {
    double kappa = dispersion_k(w, p).real();
    EXPECT_NEAR(dispersion_omega(kappa, p), w, 1e-9 * w);
  }
  EXPECT_THROW(dispersion_omega(-1.0, p), InvalidArgument);
}

TEST(ImpedanceJet, MatchesFiniteDifferences) {
  ModelParams p = soliton_model();
  const double w = 12.57;
  auto inv_z = [&](double x) { return -dispersion_k(x, p) / x; };
  auto jet = inverse_impedance_jet(w, p);
  EXPECT_LT(std::abs(jet.c[0] - inv_z(w)), 1e-14);
  const double h = 1e-3;
  std::complex<double> d1 = (inv_z(w + h) - inv_z(w - h)) / (2 * h);
  std::complex<double> d2 = (inv_z(w + h) - 2.0 * inv_z(w) + inv_z(w - h)) / (h * h);
  // fourth-order stencils for the next two
  const double H = 0.05;
  std::complex<double> d3 = (inv_z(w - 3 * H) - 8.0 * inv_z(w - 2 * H) + 13.0 * inv_z(w - H) - 13.0 * inv_z(w + H) +
                             8.0 * inv_z(w + 2 * H) - inv_z(w + 3 * H)) /
                            (8.0 * H * H * H);
  std::complex<double> d4 = (-inv_z(w - 3 * H) + 12.0 * inv_z(w - 2 * H) - 39.0 * inv_z(w - H) + 56.0 * inv_z(w) -
                             39.0 * inv_z(w + H) + 12.0 * inv_z(w + 2 * H) - inv_z(w + 3 * H)) /
                            (6.0 * H * H * H * H);
  EXPECT_LT(std::abs(jet.c[1] - d1), 1e-7);
  EXPECT_LT(std::abs(2.0 * jet.c[2] - d2), 1e-6);
  EXPECT_LT(std::abs(6.0 * jet.c[3] - d3) / std::abs(d3), 1e-3);
  EXPECT_LT(std::abs(24.0 * jet.c[4] - d4) / std::abs(d4), 1e-3);
}

TEST(Jet, ArithmeticOnPolynomials) {
  using J = Jet<4>;
  J x = J::variable(2.0);
  J y = sqrt(x * x * x) / x;  // sqrt(x)
  for (int n = 0; n <= 4; ++n) {
    // Taylor coefficients of sqrt(x) at 2: binom(1/2, n) 2^{1/2 - n}
    double b = 1.0;
    for (int i = 0; i < n; ++i) b *= (0.5 - i) / (i + 1);
    EXPECT_NEAR(y.c[n].real(), b * std::pow(2.0, 0.5 - n), 1e-14);
  }
}

TEST(SechDerivatives, MatchFiniteDifferences) {
  SolitonDrive d{2.0, 12.57, 20.0};
  const double h = 1e-4;
  for (double t : {17.0, 19.5, 20.0, 21.3, 24.0}) {
    auto f = sech_derivatives(t, d);
    auto fp = sech_derivatives(t + h, d), fm = sech_derivatives(t - h, d);
    EXPECT_NEAR(f[0], 2.0 / std::cosh(t - 20.0), 1e-15);
    for (int m = 0; m < kSeriesOrder; ++m)
      EXPECT_NEAR(f[m + 1], (fp[m] - fm[m]) / (2 * h), 1e-6 * (1.0 + std::abs(f[m + 1]))) << "m=" << m;
  }
}

TEST(SolitonBoundary, OffAtTimeZero) {
  SolitonDrive d{1.0, 12.57, 20.0};
  SolitonBoundary bc(d, soliton_model());
  EXPECT_LT(std::abs(bc.E(0.0)), 1e-8);
  EXPECT_LT(std::abs(bc.H(0.0)), 1e-7);
  EXPECT_NEAR(soliton_H_boundary(0.0, d, soliton_model()), bc.H(0.0), 1e-20);
}

TEST(SolitonBoundary, LeadingTermAtPeak) {
  SolitonDrive d{1.0, 12.57, 20.0};
  ModelParams p = soliton_model();
  SolitonBoundary full(d, p), lead(d, p, 1);
  const double t = 20.0;
  auto z = full.inverse_impedance();
  EXPECT_NEAR(lead.H(t), std::real(z.c[0] * std::exp(std::complex<double>(0.0, 12.57 * t))), 1e-14);
  auto f = sech_derivatives(t, d);
  double bound = 0.0;
  for (int m = 1; m <= kSeriesOrder; ++m) bound += std::abs(z.c[m]) * std::abs(f[m]);
  EXPECT_LE(std::abs(full.H(t) - lead.H(t)), bound + 1e-15);
  EXPECT_LT(std::abs(full.H(t) - lead.H(t)), 0.05 * std::abs(z.c[0]));
}

TEST(SolitonBoundary, NondispersiveImpedance) {
  SolitonDrive d{2.0, 12.57, 20.0};
  ModelParams p = soliton_model();
  p.omega_p = 0.0;
  SolitonBoundary bc(d, p);
  for (int m = 1; m <= kSeriesOrder; ++m) EXPECT_EQ(std::abs(bc.inverse_impedance().c[m]), 0.0);
  for (double t : {15.0, 19.9, 20.0, 23.2}) EXPECT_NEAR(bc.H(t), -1.5 * bc.E(t), 1e-13);
}

TEST(DaughterPulse, SyntheticThirdHarmonic) {
  ModelParams p = soliton_model();
  const double k1 = dispersion_k(12.57, p).real(), k3 = dispersion_k(3 * 12.57, p).real();
  Mesh mesh(0.0, 45.0, 1600);
  Basis b(2);
  DgField E = project_l2(
      [&](double x) { return std::cos(k1 * x) / std::cosh(x - 15.0) + 0.05 * std::cos(k3 * x) / std::cosh(x - 32.0); },
      mesh, b);
  DaughterPulse dp = daughter_pulse(E, mesh, b, p, 12.57);
  ASSERT_TRUE(dp.found);
  EXPECT_NEAR(dp.main_x, 15.0, 0.2);
  EXPECT_NEAR(dp.ratio, 0.05, 0.005);
  EXPECT_GT(dp.x_first, 20.0);
  EXPECT_NEAR(dp.wavenumber, k3, 0.02 * k3);
  EXPECT_NEAR(dp.omega, 3 * 12.57, 0.02 * 3 * 12.57);
}

TEST(DaughterPulse, AbsentWithoutLeadingLobe) {
  ModelParams p = soliton_model();
  const double k1 = dispersion_k(12.57, p).real();
  Mesh mesh(0.0, 45.0, 800);
  Basis b(2);
  DgField E = project_l2([&](double x) { return std::cos(k1 * x) / std::cosh(x - 30.0); }, mesh, b);
  DaughterPulse dp = daughter_pulse(E, mesh, b, p, 12.57);
  EXPECT_FALSE(dp.found);
}

TEST(SolitonRun, InflowEntersAndEnergyOrdering) {
  // central-flux energy lies between the two alternating-flux energies
  std::vector<std::vector<EnergyRow>> traces;
  for (auto flux : {FluxKind::Central, FluxKind::AlternatingI, FluxKind::AlternatingII}) {
    SolitonRunSpec spec;
    spec.flux = flux;
    spec.elements = 800;
    spec.cfl = 0.05;
    spec.t_final = 30.0;
    spec.snapshot_times = {};
    SolitonRun run = run_soliton(spec);
    traces.push_back(run.result.energy);
    double peak = 0.0;
    for (const auto& [t, a] : run.pulse_area) peak = std::max(peak, a);
    EXPECT_GT(peak, 1.0);
  }
  ASSERT_EQ(traces[0].size(), traces[1].size());
  ASSERT_EQ(traces[0].size(), traces[2].size());
  int checked = 0;
  for (std::size_t i = 0; i < traces[0].size(); i += 50) {
    if (traces[0][i].time < 25.0) continue;
    double c = traces[0][i].energy, a = traces[1][i].energy, b = traces[2][i].energy;
    EXPECT_GE(c, std::min(a, b) - 1e-9 * c) << "t=" << traces[0][i].time;
    EXPECT_LE(c, std::max(a, b) + 1e-9 * c) << "t=" << traces[0][i].time;
    ++checked;
  }
  EXPECT_GT(checked, 10);
}
