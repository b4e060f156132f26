#include "kerrdg/kink.hpp"

#include <cmath>
#include <limits>

#include "kerrdg/error.hpp"

namespace kerrdg {

KinkProfile::KinkProfile(std::vector<double> E, std::vector<double> Phi, double period, double velocity, double phi0)
    : E_(std::move(E)), Phi_(std::move(Phi)), period_(period), v_(velocity), phi0_(phi0) {
  if (E_.size() < 2 || E_.size() != Phi_.size()) throw InvalidArgument("profile table too short");
  h_ = period_ / static_cast<double>(E_.size() - 1);
}

double KinkProfile::interp(const std::vector<double>& t, double xi) const {
  double s = std::fmod(xi, period_);
  if (s < 0.0) s += period_;
  double u = s / h_;
  auto i = static_cast<std::size_t>(u);
  if (i >= t.size() - 1) i = t.size() - 2;
  double w = u - static_cast<double>(i);
  return (1.0 - w) * t[i] + w * t[i + 1];
}

double KinkProfile::E(double xi) const { return interp(E_, xi); }
double KinkProfile::Phi(double xi) const { return interp(Phi_, xi); }
double KinkProfile::period_defect() const { return std::abs(E_.back()); }
double KinkProfile::slope_defect() const { return std::abs(Phi_.back() - Phi_.front()); }

double kink_rhs(const ModelParams& p, double v, double E, double Phi) {
  const double v2 = v * v;
  const double w02 = p.omega0 * p.omega0;
  const double num = 6.0 * p.a * v2 * E * Phi * Phi +
                     (p.eps_inf * w02 + p.omega_p * p.omega_p - w02 / v2) * E + p.a * w02 * E * E * E;
  const double den = 1.0 - p.eps_inf * v2 - 3.0 * p.a * v2 * E * E;
  return num / den;
}

namespace {

using real = long double;

// The profile is exponentially sensitive to Phi(0), so the march runs in extended precision.
struct KinkOde {
  real a, v2, lin, cub;
  KinkOde(const ModelParams& p, double v) {
    const real w02 = static_cast<real>(p.omega0) * p.omega0;
    v2 = static_cast<real>(v) * v;
    a = p.a;
    lin = static_cast<real>(p.eps_inf) * w02 + static_cast<real>(p.omega_p) * p.omega_p - w02 / v2;
    cub = a * w02;
    eps = p.eps_inf;
  }
  real eps;
  // NaN once the denominator leaves the sign it has at E = 0
  real operator()(real E, real F) const {
    const real den0 = 1.0L - eps * v2;
    const real den = den0 - 3.0L * a * v2 * E * E;
    if (!(den * den0 > 0.0L)) return std::numeric_limits<real>::quiet_NaN();
    return (6.0L * a * v2 * E * F * F + lin * E + cub * E * E * E) / den;
  }
};

template <class Sink>
real march(const KinkOde& f, real phi0, int n, real period, Sink&& sink) {
  const real h = period / n;
  real e = 0.0L, g = phi0;
  sink(0, e, g);
  for (int i = 0; i < n; ++i) {
    // Shu-Osher SSP-RK3
    real e1 = e + h * g;
    real g1 = g + h * f(e, g);
    real e2 = 0.75L * e + 0.25L * (e1 + h * g1);
    real g2 = 0.75L * g + 0.25L * (g1 + h * f(e1, g1));
    e = e / 3.0L + 2.0L / 3.0L * (e2 + h * g2);
    g = g / 3.0L + 2.0L / 3.0L * (g2 + h * f(e2, g2));
    sink(i + 1, e, g);
  }
  return e;
}

KinkProfile tabulate(const ModelParams& p, double v, real phi0, int n, double period) {
  std::vector<double> E(n + 1), Phi(n + 1);
  const real end = march(KinkOde(p, v), phi0, n, period, [&](int i, real e, real g) {
    E[i] = static_cast<double>(e);
    Phi[i] = static_cast<double>(g);
  });
  if (!std::isfinite(end) || !std::isfinite(Phi[n]))
    throw SolverError("kink profile: denominator 1 - eps_inf v^2 - 3 a v^2 E^2 crosses zero", n, INFINITY);
  return KinkProfile(std::move(E), std::move(Phi), period, v, static_cast<double>(phi0));
}

// signed E at the end of the period; NaN when the march breaks down
real end_value(const KinkOde& f, real phi0, int n, real period) {
  real e = march(f, phi0, n, period, [](int, real, real) {});
  return std::isfinite(e) ? e : std::numeric_limits<real>::quiet_NaN();
}

}  // namespace

KinkProfile integrate_kink(const ModelParams& p, double v, double phi0, int n_steps, double period) {
  if (n_steps < 1) throw InvalidArgument("need at least one profile step");
  return tabulate(p, v, phi0, n_steps, period);
}

KinkProfile kink_profile(const ModelParams& p, const KinkProfileOptions& opt) {
  if (opt.n_steps < 1) throw InvalidArgument("need at least one profile step");
  if (!opt.refine_periodicity) return tabulate(p, opt.velocity, opt.phi0, opt.n_steps, opt.period);
  const KinkOde f(p, opt.velocity);
  const real P = opt.period;
  const real p0 = opt.phi0;
  const real f0 = end_value(f, p0, opt.n_steps, P);
  if (!std::isfinite(f0) || f0 == 0.0L) return tabulate(p, opt.velocity, p0, opt.n_steps, opt.period);
  // widen a bracket around phi0 until E(period) changes sign
  real lo = p0, flo = f0, hi = p0, fhi = f0;
  bool found = false;
  for (real d = 1e-18L; d < 1e-8L && !found; d *= 2.0L) {
    for (real sgn : {1.0L, -1.0L}) {
      real c = p0 + sgn * d * std::abs(p0);
      real fc = end_value(f, c, opt.n_steps, P);
      if (std::isfinite(fc) && (fc > 0.0L) != (f0 > 0.0L)) {
        hi = c;
        fhi = fc;
        found = true;
        break;
      }
    }
  }
  if (!found) return tabulate(p, opt.velocity, p0, opt.n_steps, opt.period);
  for (int it = 0; it < 200; ++it) {
    real mid = 0.5L * (lo + hi);
    if (mid == lo || mid == hi) break;
    real fm = end_value(f, mid, opt.n_steps, P);
    if (!std::isfinite(fm)) break;
    if ((fm > 0.0L) == (flo > 0.0L)) {
      lo = mid;
      flo = fm;
    } else {
      hi = mid;
      fhi = fm;
    }
  }
  real best = std::abs(flo) <= std::abs(fhi) ? lo : hi;
  return tabulate(p, opt.velocity, best, opt.n_steps, opt.period);
}

SimState kink_initial_state(const KinkProfile& prof, const Mesh& mesh, const Basis& basis, const ModelParams& p) {
  const double v = prof.velocity();
  SimState s = make_zero_state(mesh, basis, HLayout::Collocated);
  s.E = project_l2([&](double x) { return prof.E(x); }, mesh, basis);
  s.H = project_l2([&](double x) { return -prof.E(x) / v; }, mesh, basis);
  s.P = project_l2(
      [&](double x) {
        double e = prof.E(x);
        return (1.0 / (v * v) - p.eps_inf) * e - p.a * e * e * e;
      },
      mesh, basis);
  s.J = project_l2(
      [&](double x) {
        double e = prof.E(x), f = prof.Phi(x);
        return (p.eps_inf * v - 1.0 / v) * f + 3.0 * p.a * v * e * e * f;
      },
      mesh, basis);
  s.Y = project_pointwise(s.E, basis, [](double e) { return e * e * e; });
  s.D = constitutive_project(s.E, s.P, s.Q, s.Y, p, basis);
  return s;
}

double kink_exact_E(const KinkProfile& prof, double x, double t) { return prof.E(x - prof.velocity() * t); }

}  // namespace kerrdg
