#ifndef KERRDG_ANALYSIS_HPP
#define KERRDG_ANALYSIS_HPP

#include <cstddef>
#include <vector>

#include "kerrdg/basis.hpp"
#include "kerrdg/dg_field.hpp"
#include "kerrdg/mesh.hpp"

namespace kerrdg {

struct ErrorNorms {
  double l2 = 0.0;
  double l2_rms = 0.0;  // l2 / sqrt(domain length)
  double linf = 0.0;
};

// Errors against an exact function, with a finer Gauss rule than the scheme's.
ErrorNorms error_norms(const DgField& u, const ScalarFunction& exact, const Mesh& mesh, const Basis& basis);

// Tables report the length-normalized L2 error.
struct ConvergenceRow {
  std::size_t n = 0;
  double l2_error = 0.0;
  double l2_order = 0.0;  // NaN on the first row
  double linf_error = 0.0;
  double linf_order = 0.0;
};

std::vector<ConvergenceRow> convergence_table(const std::vector<std::size_t>& n, const std::vector<ErrorNorms>& err);

struct Samples {
  std::vector<double> x;
  std::vector<double> v;
};

// per_cell equispaced interior points of every cell, increasing x.
Samples sample_field(const DgField& u, const Mesh& mesh, const Basis& basis, int per_cell);

struct PulseBracket {
  std::size_t first = 0;
  std::size_t last = 0;
  double area = 0.0;
};

// Trapezoidal integral of |E| over the envelope bracket around the largest |E|:
// the outermost local maxima of |E| that stay above threshold, widened to the threshold crossings.
PulseBracket pulse_area(const Samples& s, double threshold = 0.01);

struct PulseWindow {
  std::size_t first = 0;
  std::size_t last = 0;
  double peak = 0.0;
};

// Foremost lobe of the |v| envelope (running max over +-halfwidth): starts at the last sample
// above rel_threshold * max|v| and extends left until the envelope falls below lobe_fraction of the lobe peak.
PulseWindow leading_pulse(const Samples& s, double halfwidth, double rel_threshold = 1e-3,
                          double lobe_fraction = 0.1);

struct SpectralPeak {
  double omega = 0.0;
  double magnitude = 0.0;
};

struct SpectrumWindow {
  std::size_t begin = 0;
  std::size_t length = 0;
};

// Hann-windowed, zero-padded DFT of series[begin, begin+length) sampled every dt.
// Returns local maxima above min_relative * max, strongest first; omega is angular.
std::vector<SpectralPeak> spectrum_probe(const std::vector<double>& series, double dt, SpectrumWindow window,
                                         double min_relative = 0.01, int zero_pad = 8);

}  // namespace kerrdg

#endif
