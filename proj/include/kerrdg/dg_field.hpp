#ifndef KERRDG_DG_FIELD_HPP
#define KERRDG_DG_FIELD_HPP

#include <cstddef>
#include <functional>
#include <span>
#include <vector>

#include "kerrdg/basis.hpp"
#include "kerrdg/mesh.hpp"

namespace kerrdg {

// Modal coefficients, element-major: c[j * (k+1) + m].
class DgField {
 public:
  DgField() = default;
  DgField(std::size_t n_elements, int n_modes) : n_(n_elements), nm_(n_modes), c_(n_elements * n_modes, 0.0) {}

  static DgField zeros_like(const DgField& f) { return DgField(f.n_, f.nm_); }

  std::size_t n_elements() const { return n_; }
  int n_modes() const { return nm_; }
  std::size_t size() const { return c_.size(); }

  std::span<double> element(std::size_t j) { return {c_.data() + j * nm_, static_cast<std::size_t>(nm_)}; }
  std::span<const double> element(std::size_t j) const {
    return {c_.data() + j * nm_, static_cast<std::size_t>(nm_)};
  }
  double& operator()(std::size_t j, int m) { return c_[j * nm_ + m]; }
  double operator()(std::size_t j, int m) const { return c_[j * nm_ + m]; }

  std::span<double> coeffs() { return c_; }
  std::span<const double> coeffs() const { return c_; }
  std::vector<double>& data() { return c_; }
  const std::vector<double>& data() const { return c_; }

  bool same_shape(const DgField& o) const { return n_ == o.n_ && nm_ == o.nm_; }

  // Value at physical x; at an interior edge the left cell's trace is used.
  double eval(const Mesh& mesh, const Basis& basis, double x) const;

  DgField& operator+=(const DgField& o);
  DgField& operator-=(const DgField& o);
  DgField& operator*=(double s);
  void axpy(double a, const DgField& x);

  bool operator==(const DgField& o) const = default;

 private:
  std::size_t n_ = 0;
  int nm_ = 0;
  std::vector<double> c_;
};

DgField operator+(DgField a, const DgField& b);
DgField operator-(DgField a, const DgField& b);
DgField operator*(double s, DgField a);

double max_abs_diff(const DgField& a, const DgField& b);

using ScalarFunction = std::function<double(double)>;

// Quadrature L2 projection onto V_h.
DgField project_l2(const ScalarFunction& f, const Mesh& mesh, const Basis& basis);

enum class RadauSide { Minus, Plus };

// Gauss-Radau projection: moments against P^{k-1} plus the right (Minus) or left (Plus) trace.
DgField project_gauss_radau(const ScalarFunction& f, const Mesh& mesh, const Basis& basis, RadauSide side);

// Quadrature projection of a pointwise function of one field, pi(g(u)).
DgField project_pointwise(const DgField& u, const Basis& basis, const std::function<double(double)>& g);

}  // namespace kerrdg

#endif
