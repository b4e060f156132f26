#ifndef KERRDG_BASIS_HPP
#define KERRDG_BASIS_HPP

#include <span>
#include <utility>
#include <vector>

#include <Eigen/Dense>

namespace kerrdg {

inline constexpr int kMaxModes = 8;

using LocalMatrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::ColMajor, kMaxModes, kMaxModes>;
using LocalVector = Eigen::Matrix<double, Eigen::Dynamic, 1, Eigen::ColMajor, kMaxModes, 1>;

struct QuadratureRule {
  std::vector<double> nodes;
  std::vector<double> weights;
};

// n-point Gauss-Legendre rule on [-1, 1].
QuadratureRule gauss_quadrature(int n);

// Orthonormal Legendre polynomial sqrt((2m+1)/2) P_m(xi) and its derivative.
double legendre_orthonormal(int m, double xi);
double legendre_orthonormal_deriv(int m, double xi);

// Modal basis of degree k tabulated at 2(k+1) Gauss points.
class Basis {
 public:
  explicit Basis(int degree);

  int degree() const { return k_; }
  int n_modes() const { return k_ + 1; }
  int n_quad() const { return nq_; }

  const std::vector<double>& nodes() const { return rule_.nodes; }
  const std::vector<double>& weights() const { return rule_.weights; }

  double phi(int q, int m) const { return phi_[q * (k_ + 1) + m]; }
  double dphi(int q, int m) const { return dphi_[q * (k_ + 1) + m]; }
  // Weighted values w_q phi_m(xi_q), used for projecting quadrature data.
  double wphi(int q, int m) const { return wphi_[q * (k_ + 1) + m]; }
  double left(int m) const { return left_[m]; }
  double right(int m) const { return right_[m]; }

  double eval(std::span<const double> c, double xi) const;
  double eval_at_node(std::span<const double> c, int q) const;
  double left_trace(std::span<const double> c) const;
  double right_trace(std::span<const double> c) const;

  // Values at all quadrature nodes, out.size() == n_quad().
  void to_nodes(std::span<const double> c, std::span<double> out) const;
  // Quadrature projection of nodal values, out.size() == n_modes().
  void from_nodes(std::span<const double> vals, std::span<double> out) const;

 private:
  int k_, nq_;
  QuadratureRule rule_;
  std::vector<double> phi_, dphi_, wphi_, left_, right_;
};

// Reference-element matrices: mass M_ij, stiffness S_ij = int phi_j phi_i' and trace vectors.
struct ElementOperators {
  LocalMatrix mass;
  LocalMatrix stiffness;
  LocalVector lift_left;
  LocalVector lift_right;
};

ElementOperators element_operators(const Basis& basis);

}  // namespace kerrdg

#endif
