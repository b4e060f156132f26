#ifndef KERRDG_SOLITON_HPP
#define KERRDG_SOLITON_HPP

#include <array>
#include <complex>

#include "kerrdg/basis.hpp"
#include "kerrdg/integrators.hpp"
#include "kerrdg/model.hpp"

namespace kerrdg {

inline constexpr int kSeriesOrder = 8;

// Right-propagating wavenumber of the linear Lorentz medium, principal square root.
std::complex<double> dispersion_k(double omega, const ModelParams& p);

// Frequency above the upper band edge sqrt(omega0^2 + omega_p^2/eps_inf) with Re k = kappa.
double dispersion_omega(double kappa, const ModelParams& p, double omega_max = 1e4);

// Truncated Taylor series in one complex variable.
template <int N>
struct Jet {
  std::array<std::complex<double>, N + 1> c{};

  static Jet constant(std::complex<double> v) {
    Jet j;
    j.c[0] = v;
    return j;
  }
  static Jet variable(std::complex<double> v) {
    Jet j;
    j.c[0] = v;
    if (N >= 1) j.c[1] = 1.0;
    return j;
  }
};

template <int N>
Jet<N> operator+(Jet<N> a, const Jet<N>& b) {
  for (int i = 0; i <= N; ++i) a.c[i] += b.c[i];
  return a;
}
template <int N>
Jet<N> operator-(Jet<N> a, const Jet<N>& b) {
  for (int i = 0; i <= N; ++i) a.c[i] -= b.c[i];
  return a;
}
template <int N>
Jet<N> operator*(std::complex<double> s, Jet<N> a) {
  for (auto& v : a.c) v *= s;
  return a;
}
template <int N>
Jet<N> operator*(const Jet<N>& a, const Jet<N>& b) {
  Jet<N> r;
  for (int i = 0; i <= N; ++i)
    for (int j = 0; i + j <= N; ++j) r.c[i + j] += a.c[i] * b.c[j];
  return r;
}
template <int N>
Jet<N> operator/(const Jet<N>& a, const Jet<N>& b) {
  Jet<N> q;
  for (int n = 0; n <= N; ++n) {
    std::complex<double> s = a.c[n];
    for (int k = 1; k <= n; ++k) s -= b.c[k] * q.c[n - k];
    q.c[n] = s / b.c[0];
  }
  return q;
}
template <int N>
Jet<N> sqrt(const Jet<N>& a) {
  Jet<N> s;
  s.c[0] = std::sqrt(a.c[0]);
  for (int n = 1; n <= N; ++n) {
    std::complex<double> acc = a.c[n];
    for (int k = 1; k < n; ++k) acc -= s.c[k] * s.c[n - k];
    s.c[n] = acc / (2.0 * s.c[0]);
  }
  return s;
}

// Taylor coefficients of 1/Z = -k(omega)/omega about omega.
Jet<kSeriesOrder> inverse_impedance_jet(double omega, const ModelParams& p);

struct SolitonDrive {
  double amplitude = 1.0;   // M
  double carrier = 12.57;   // Omega_0
  double delay = 20.0;      // sech centre
};

// f^{(m)}(t) for f = M sech(t - delay), m = 0..kSeriesOrder.
std::array<double, kSeriesOrder + 1> sech_derivatives(double t, const SolitonDrive& d);

// Left-wall data E(0,t) = f(t) cos(Omega_0 t) and the matched H(0,t) from the impedance series.
class SolitonBoundary {
 public:
  SolitonBoundary(const SolitonDrive& drive, const ModelParams& p, int terms = kSeriesOrder + 1);

  double E(double t) const;
  double H(double t) const;
  const Jet<kSeriesOrder>& inverse_impedance() const { return jet_; }
  Drivers drivers() const;

 private:
  SolitonDrive d_;
  Jet<kSeriesOrder> jet_;
  int terms_;
};

double soliton_H_boundary(double t, const SolitonDrive& drive, const ModelParams& p);

// Third-harmonic daughter: the foremost envelope lobe of E ahead of the main pulse.
struct DaughterPulse {
  double main_peak = 0.0;
  double main_x = 0.0;
  double peak = 0.0;
  double x_first = 0.0;
  double x_last = 0.0;
  double ratio = 0.0;       // peak / main_peak
  double wavenumber = 0.0;  // dominant spatial frequency in the window
  double omega = 0.0;       // temporal frequency from the linear dispersion relation
  bool found = false;
};

DaughterPulse daughter_pulse(const DgField& E, const Mesh& mesh, const Basis& basis, const ModelParams& p,
                             double carrier, int per_cell = 4);

}  // namespace kerrdg

#endif
