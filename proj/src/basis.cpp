#include "kerrdg/basis.hpp"

#include <cmath>
#include <numbers>

#include "kerrdg/error.hpp"

namespace kerrdg {

namespace {

// P_n and P_n' by the three-term recurrence.
std::pair<double, double> legendre(int n, double x) {
  if (n == 0) return {1.0, 0.0};
  double p0 = 1.0, p1 = x;
  for (int i = 2; i <= n; ++i) {
    double p2 = ((2.0 * i - 1.0) * x * p1 - (i - 1.0) * p0) / i;
    p0 = p1;
    p1 = p2;
  }
  double dp;
  if (std::abs(std::abs(x) - 1.0) < 1e-15) {
    dp = 0.5 * n * (n + 1.0) * (x > 0 ? 1.0 : (n % 2 == 0 ? -1.0 : 1.0));
  } else {
    dp = n * (x * p1 - p0) / (x * x - 1.0);
  }
  return {p1, dp};
}

}  // namespace

QuadratureRule gauss_quadrature(int n) {
  if (n < 1) throw InvalidArgument("quadrature needs n >= 1");
  QuadratureRule r;
  r.nodes.resize(n);
  r.weights.resize(n);
  for (int i = 0; i < (n + 1) / 2; ++i) {
    double x = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
    for (int it = 0; it < 100; ++it) {
      auto [p, dp] = legendre(n, x);
      double dx = p / dp;
      x -= dx;
      if (std::abs(dx) < 1e-16) break;
    }
    auto [p, dp] = legendre(n, x);
    (void)p;
    double w = 2.0 / ((1.0 - x * x) * dp * dp);
    r.nodes[i] = -x;
    r.nodes[n - 1 - i] = x;
    r.weights[i] = w;
    r.weights[n - 1 - i] = w;
  }
  if (n % 2 == 1) r.nodes[n / 2] = 0.0;
  return r;
}

double legendre_orthonormal(int m, double xi) {
  return std::sqrt((2.0 * m + 1.0) / 2.0) * legendre(m, xi).first;
}

double legendre_orthonormal_deriv(int m, double xi) {
  return std::sqrt((2.0 * m + 1.0) / 2.0) * legendre(m, xi).second;
}

Basis::Basis(int degree) : k_(degree) {
  if (degree < 1) throw InvalidArgument("polynomial degree must be >= 1");
  if (degree + 1 > kMaxModes) throw InvalidArgument("polynomial degree too large");
  nq_ = 2 * (k_ + 1);
  rule_ = gauss_quadrature(nq_);
  const int nm = k_ + 1;
  phi_.resize(nq_ * nm);
  dphi_.resize(nq_ * nm);
  wphi_.resize(nq_ * nm);
  for (int q = 0; q < nq_; ++q) {
    for (int m = 0; m < nm; ++m) {
      phi_[q * nm + m] = legendre_orthonormal(m, rule_.nodes[q]);
      dphi_[q * nm + m] = legendre_orthonormal_deriv(m, rule_.nodes[q]);
      wphi_[q * nm + m] = rule_.weights[q] * phi_[q * nm + m];
    }
  }
  left_.resize(nm);
  right_.resize(nm);
  for (int m = 0; m < nm; ++m) {
    double s = std::sqrt((2.0 * m + 1.0) / 2.0);
    right_[m] = s;
    left_[m] = (m % 2 == 0) ? s : -s;
  }
}

double Basis::eval(std::span<const double> c, double xi) const {
  double v = 0.0;
  for (int m = 0; m <= k_; ++m) v += c[m] * legendre_orthonormal(m, xi);
  return v;
}

double Basis::eval_at_node(std::span<const double> c, int q) const {
  const double* p = &phi_[q * (k_ + 1)];
  double v = 0.0;
  for (int m = 0; m <= k_; ++m) v += c[m] * p[m];
  return v;
}

double Basis::left_trace(std::span<const double> c) const {
  double v = 0.0;
  for (int m = 0; m <= k_; ++m) v += c[m] * left_[m];
  return v;
}

double Basis::right_trace(std::span<const double> c) const {
  double v = 0.0;
  for (int m = 0; m <= k_; ++m) v += c[m] * right_[m];
  return v;
}

void Basis::to_nodes(std::span<const double> c, std::span<double> out) const {
  for (int q = 0; q < nq_; ++q) out[q] = eval_at_node(c, q);
}

void Basis::from_nodes(std::span<const double> vals, std::span<double> out) const {
  const int nm = k_ + 1;
  for (int m = 0; m < nm; ++m) out[m] = 0.0;
  for (int q = 0; q < nq_; ++q) {
    const double* w = &wphi_[q * nm];
    for (int m = 0; m < nm; ++m) out[m] += vals[q] * w[m];
  }
}

ElementOperators element_operators(const Basis& basis) {
  const int nm = basis.n_modes();
  ElementOperators ops;
  ops.mass = LocalMatrix::Zero(nm, nm);
  ops.stiffness = LocalMatrix::Zero(nm, nm);
  ops.lift_left.resize(nm);
  ops.lift_right.resize(nm);
  for (int i = 0; i < nm; ++i) {
    for (int j = 0; j < nm; ++j) {
      double m = 0.0, s = 0.0;
      for (int q = 0; q < basis.n_quad(); ++q) {
        m += basis.weights()[q] * basis.phi(q, i) * basis.phi(q, j);
        s += basis.weights()[q] * basis.phi(q, j) * basis.dphi(q, i);
      }
      ops.mass(i, j) = m;
      ops.stiffness(i, j) = s;
    }
    ops.lift_left(i) = basis.left(i);
    ops.lift_right(i) = basis.right(i);
  }
  return ops;
}

}  // namespace kerrdg
