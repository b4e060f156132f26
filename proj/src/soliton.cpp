#include "kerrdg/soliton.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <vector>

#include "kerrdg/analysis.hpp"
#include "kerrdg/error.hpp"

namespace kerrdg {

namespace {

using cd = std::complex<double>;
const cd I(0.0, 1.0);

}  // namespace

std::complex<double> dispersion_k(double omega, const ModelParams& p) {
  if (!std::isfinite(omega)) throw InvalidArgument("frequency must be finite");
  if (omega == 0.0) return 0.0;
  const double wp2 = p.omega_p * p.omega_p;
  if (wp2 == 0.0) return omega * std::sqrt(p.eps_inf);
  const cd den = omega * omega - I * omega * p.inv_tau - p.omega0 * p.omega0;
  const cd branch = den - wp2 / p.eps_inf;
  if (std::abs(den) == 0.0 || std::abs(branch) <= 1e-14 * (std::abs(den) + wp2 / p.eps_inf))
    throw InvalidArgument("dispersion relation evaluated at a branch point");
  return omega * std::sqrt(p.eps_inf) * std::sqrt(1.0 - (wp2 / p.eps_inf) / den);
}

double dispersion_omega(double kappa, const ModelParams& p, double omega_max) {
  if (!(kappa > 0.0) || !std::isfinite(kappa)) throw InvalidArgument("wavenumber must be positive");
  if (p.omega_p == 0.0) return kappa / std::sqrt(p.eps_inf);
  const double edge = std::sqrt(p.omega0 * p.omega0 + p.omega_p * p.omega_p / p.eps_inf);
  double lo = edge * (1.0 + 1e-6), hi = omega_max;
  auto f = [&](double w) { return dispersion_k(w, p).real() - kappa; };
  if (f(lo) > 0.0) throw InvalidArgument("wavenumber below the upper band");
  if (f(hi) < 0.0) throw InvalidArgument("wavenumber beyond the search range");
  for (int it = 0; it < 200 && hi - lo > 1e-14 * hi; ++it) {
    double mid = 0.5 * (lo + hi);
    (f(mid) < 0.0 ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

Jet<kSeriesOrder> inverse_impedance_jet(double omega, const ModelParams& p) {
  using J = Jet<kSeriesOrder>;
  dispersion_k(omega, p);  // branch check
  const J w = J::variable(omega);
  const J one = J::constant(1.0);
  const J den = w * w - (I * p.inv_tau) * w - J::constant(p.omega0 * p.omega0);
  const J ratio = J::constant(p.omega_p * p.omega_p / p.eps_inf) / den;
  // 1/Z = -k/omega = -sqrt(eps_inf) sqrt(1 - ratio)
  return cd(-std::sqrt(p.eps_inf)) * sqrt(one - ratio);
}

std::array<double, kSeriesOrder + 1> sech_derivatives(double t, const SolitonDrive& d) {
  // f^{(m)} = M sech(u) p_m(tanh u), p_{m+1}(T) = -T p_m(T) + (1 - T^2) p_m'(T)
  const double u = t - d.delay;
  const double T = std::tanh(u);
  const double sech = 1.0 / std::cosh(u);
  std::array<double, kSeriesOrder + 1> out{};
  std::vector<double> poly{1.0};
  for (int m = 0; m <= kSeriesOrder; ++m) {
    double val = 0.0;
    for (std::size_t i = poly.size(); i-- > 0;) val = val * T + poly[i];
    out[m] = d.amplitude * sech * val;
    std::vector<double> next(poly.size() + 1, 0.0);
    for (std::size_t i = 0; i < poly.size(); ++i) next[i + 1] -= poly[i];
    for (std::size_t i = 1; i < poly.size(); ++i) {
      double dp = static_cast<double>(i) * poly[i];
      next[i - 1] += dp;
      next[i + 1] -= dp;
    }
    poly = std::move(next);
  }
  return out;
}

SolitonBoundary::SolitonBoundary(const SolitonDrive& drive, const ModelParams& p, int terms)
    : d_(drive), jet_(inverse_impedance_jet(drive.carrier, p)), terms_(terms) {
  if (terms < 1 || terms > kSeriesOrder + 1) throw InvalidArgument("series terms out of range");
}

double SolitonBoundary::E(double t) const {
  return d_.amplitude / std::cosh(t - d_.delay) * std::cos(d_.carrier * t);
}

double SolitonBoundary::H(double t) const {
  auto f = sech_derivatives(t, d_);
  cd acc = 0.0;
  cd mi = 1.0;  // (-i)^m
  for (int m = 0; m < terms_; ++m) {
    acc += mi * jet_.c[m] * f[m];
    mi *= -I;
  }
  return std::real(acc * std::exp(I * (d_.carrier * t)));
}

Drivers SolitonBoundary::drivers() const {
  SolitonBoundary self = *this;
  return Drivers{[self](double t) { return self.E(t); }, [self](double t) { return self.H(t); }};
}

double soliton_H_boundary(double t, const SolitonDrive& drive, const ModelParams& p) {
  return SolitonBoundary(drive, p).H(t);
}

DaughterPulse daughter_pulse(const DgField& E, const Mesh& mesh, const Basis& basis, const ModelParams& p,
                             double carrier, int per_cell) {
  Samples smp = sample_field(E, mesh, basis, per_cell);
  DaughterPulse out;
  std::size_t im = 0;
  for (std::size_t i = 0; i < smp.v.size(); ++i)
    if (std::abs(smp.v[i]) > std::abs(smp.v[im])) im = i;
  out.main_peak = std::abs(smp.v[im]);
  out.main_x = smp.x[im];
  if (out.main_peak == 0.0) return out;
  const double lambda = 2.0 * std::numbers::pi / dispersion_k(carrier, p).real();
  PulseWindow w = leading_pulse(smp, 0.6 * lambda);
  out.peak = w.peak;
  out.x_first = smp.x[w.first];
  out.x_last = smp.x[w.last];
  out.ratio = w.peak / out.main_peak;
  out.found = out.x_first > out.main_x && w.last - w.first >= 8;
  if (!out.found) return out;
  const double dx = mesh.h() / per_cell;
  auto peaks = spectrum_probe(smp.v, dx, {w.first, w.last - w.first + 1});
  if (peaks.empty()) return out;
  out.wavenumber = peaks.front().omega;
  out.omega = dispersion_omega(out.wavenumber, p);
  return out;
}

}  // namespace kerrdg
