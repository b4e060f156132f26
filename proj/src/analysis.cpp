#include "kerrdg/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include <fftw3.h>

#include "kerrdg/error.hpp"

namespace kerrdg {

ErrorNorms error_norms(const DgField& u, const ScalarFunction& exact, const Mesh& mesh, const Basis& basis) {
  if (u.n_elements() != mesh.size() || u.n_modes() != basis.n_modes())
    throw InvalidArgument("field does not match mesh/basis");
  const int nq = std::max(2 * basis.n_modes() + 2, 10);
  QuadratureRule rule = gauss_quadrature(nq);
  const auto n = static_cast<long>(mesh.size());
  std::vector<double> l2(n), li(n);
#pragma omp parallel for schedule(static)
  for (long j = 0; j < n; ++j) {
    auto c = u.element(j);
    double acc = 0.0, mx = 0.0;
    for (int q = 0; q < nq; ++q) {
      double d = basis.eval(c, rule.nodes[q]) - exact(mesh.to_physical(j, rule.nodes[q]));
      acc += rule.weights[q] * d * d;
      mx = std::max(mx, std::abs(d));
    }
    for (double xi : {-1.0, 1.0}) mx = std::max(mx, std::abs(basis.eval(c, xi) - exact(mesh.to_physical(j, xi))));
    l2[j] = acc;
    li[j] = mx;
  }
  ErrorNorms e;
  double total = 0.0;
  for (long j = 0; j < n; ++j) {
    total += l2[j];
    e.linf = std::max(e.linf, li[j]);
  }
  e.l2 = std::sqrt(total * mesh.jacobian());
  e.l2_rms = e.l2 / std::sqrt(mesh.length());
  return e;
}

std::vector<ConvergenceRow> convergence_table(const std::vector<std::size_t>& n, const std::vector<ErrorNorms>& err) {
  if (n.size() != err.size()) throw InvalidArgument("size mismatch in convergence table");
  std::vector<ConvergenceRow> rows;
  const double nan = std::numeric_limits<double>::quiet_NaN();
  for (std::size_t i = 0; i < n.size(); ++i) {
    ConvergenceRow r{n[i], err[i].l2_rms, nan, err[i].linf, nan};
    if (i > 0) {
      double ratio = std::log(static_cast<double>(n[i]) / static_cast<double>(n[i - 1]));
      r.l2_order = std::log(err[i - 1].l2_rms / err[i].l2_rms) / ratio;
      r.linf_order = std::log(err[i - 1].linf / err[i].linf) / ratio;
    }
    rows.push_back(r);
  }
  return rows;
}

Samples sample_field(const DgField& u, const Mesh& mesh, const Basis& basis, int per_cell) {
  if (per_cell < 1) throw InvalidArgument("need at least one sample per cell");
  Samples s;
  const std::size_t total = mesh.size() * per_cell;
  s.x.resize(total);
  s.v.resize(total);
  for (std::size_t j = 0; j < mesh.size(); ++j) {
    for (int i = 0; i < per_cell; ++i) {
      double xi = -1.0 + (2.0 * i + 1.0) / per_cell;
      s.x[j * per_cell + i] = mesh.to_physical(j, xi);
      s.v[j * per_cell + i] = basis.eval(u.element(j), xi);
    }
  }
  return s;
}

PulseBracket pulse_area(const Samples& s, double threshold) {
  const std::size_t n = s.x.size();
  if (n < 3 || s.v.size() != n) throw InvalidArgument("pulse area needs at least three samples");
  std::vector<double> a(n);
  for (std::size_t i = 0; i < n; ++i) a[i] = std::abs(s.v[i]);
  const std::size_t peak = static_cast<std::size_t>(std::max_element(a.begin(), a.end()) - a.begin());
  PulseBracket br{peak, peak, 0.0};
  if (a[peak] < threshold) return br;

  // local maxima of |E| from sign changes of the first difference; plateaus count at their outer end
  std::vector<std::size_t> maxima;
  for (std::size_t i = 0; i < n; ++i) {
    bool up = i == 0 || a[i] >= a[i - 1];
    bool down = i + 1 == n || a[i] >= a[i + 1];
    if (up && down) maxima.push_back(i);
  }
  auto it = std::find(maxima.begin(), maxima.end(), peak);
  std::size_t lo = static_cast<std::size_t>(it - maxima.begin()), hi = lo;
  while (lo > 0 && a[maxima[lo - 1]] >= threshold) --lo;
  while (hi + 1 < maxima.size() && a[maxima[hi + 1]] >= threshold) ++hi;
  std::size_t first = maxima[lo], last = maxima[hi];
  while (first > 0 && a[first - 1] >= threshold) --first;
  while (last + 1 < n && a[last + 1] >= threshold) ++last;
  br.first = first;
  br.last = last;
  for (std::size_t i = first; i < last; ++i) br.area += 0.5 * (a[i] + a[i + 1]) * (s.x[i + 1] - s.x[i]);
  return br;
}

PulseWindow leading_pulse(const Samples& s, double halfwidth, double rel_threshold, double lobe_fraction) {
  const std::size_t n = s.x.size();
  if (n < 2 || s.v.size() != n) throw InvalidArgument("leading pulse needs at least two samples");
  if (!(halfwidth >= 0.0)) throw InvalidArgument("envelope half width must be non-negative");
  const double dx = (s.x.back() - s.x.front()) / static_cast<double>(n - 1);
  const std::size_t w = static_cast<std::size_t>(halfwidth / dx);
  std::vector<double> a(n), env(n);
  for (std::size_t i = 0; i < n; ++i) a[i] = std::abs(s.v[i]);
  for (std::size_t i = 0; i < n; ++i) {
    std::size_t lo = i > w ? i - w : 0, hi = std::min(n - 1, i + w);
    env[i] = *std::max_element(a.begin() + lo, a.begin() + hi + 1);
  }
  const double top = *std::max_element(a.begin(), a.end());
  PulseWindow pw;
  if (top == 0.0) return pw;
  std::size_t front = n - 1;
  while (front > 0 && env[front] <= rel_threshold * top) --front;
  std::size_t i = front;
  double peak = env[front];
  while (i > 0) {
    peak = std::max(peak, env[i]);
    if (env[i] < lobe_fraction * peak) break;
    --i;
  }
  pw.first = i;
  pw.last = front;
  pw.peak = *std::max_element(a.begin() + i, a.begin() + front + 1);
  return pw;
}

std::vector<SpectralPeak> spectrum_probe(const std::vector<double>& series, double dt, SpectrumWindow window,
                                         double min_relative, int zero_pad) {
  if (window.length < 4) throw InvalidArgument("spectrum window too short");
  if (window.begin + window.length > series.size()) throw InvalidArgument("series shorter than spectrum window");
  if (!(dt > 0.0)) throw InvalidArgument("sampling step must be positive");
  const std::size_t L = window.length;
  const std::size_t M = L * static_cast<std::size_t>(std::max(1, zero_pad));
  double mean = 0.0;
  for (std::size_t i = 0; i < L; ++i) mean += series[window.begin + i];
  mean /= static_cast<double>(L);

  double* in = fftw_alloc_real(M);
  fftw_complex* out = fftw_alloc_complex(M / 2 + 1);
  fftw_plan plan = fftw_plan_dft_r2c_1d(static_cast<int>(M), in, out, FFTW_ESTIMATE);
  for (std::size_t i = 0; i < M; ++i) in[i] = 0.0;
  for (std::size_t i = 0; i < L; ++i) {
    double w = 0.5 - 0.5 * std::cos(2.0 * std::numbers::pi * static_cast<double>(i) / static_cast<double>(L - 1));
    in[i] = w * (series[window.begin + i] - mean);
  }
  fftw_execute(plan);
  std::vector<double> mag(M / 2 + 1);
  for (std::size_t i = 0; i < mag.size(); ++i) mag[i] = std::hypot(out[i][0], out[i][1]);
  fftw_destroy_plan(plan);
  fftw_free(in);
  fftw_free(out);

  const double mx = *std::max_element(mag.begin(), mag.end());
  std::vector<SpectralPeak> peaks;
  const double dw = 2.0 * std::numbers::pi / (static_cast<double>(M) * dt);
  for (std::size_t i = 1; i + 1 < mag.size(); ++i) {
    if (mag[i] > mag[i - 1] && mag[i] >= mag[i + 1] && mag[i] >= min_relative * mx) {
      // parabolic refinement of the bin
      double d = mag[i - 1] - 2.0 * mag[i] + mag[i + 1];
      double off = d != 0.0 ? 0.5 * (mag[i - 1] - mag[i + 1]) / d : 0.0;
      peaks.push_back({(static_cast<double>(i) + off) * dw, mag[i]});
    }
  }
  std::sort(peaks.begin(), peaks.end(), [](const SpectralPeak& a, const SpectralPeak& b) {
    return a.magnitude > b.magnitude;
  });
  return peaks;
}

}  // namespace kerrdg
