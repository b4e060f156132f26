#include "kerrdg/reference.hpp"

#include <cmath>

#include "kerrdg/error.hpp"

namespace kerrdg::reference {

namespace {

double at_node(const Basis& b, std::span<const double> c, int q) {
  double v = 0.0;
  for (int m = 0; m < b.n_modes(); ++m) v += c[m] * b.phi(q, m);
  return v;
}

}  // namespace

InterfaceFluxes compute_fluxes(const DgField& E, const DgField& H, const Basis& basis, FluxKind kind,
                               BoundaryKind boundary, double eps_inf, DriverValues drive) {
  const std::size_t n = E.n_elements();
  const double s = std::sqrt(eps_inf);
  InterfaceFluxes fl;
  fl.e_hat.assign(n + 1, 0.0);
  fl.h_tilde.assign(n + 1, 0.0);
  for (std::size_t i = 0; i <= n; ++i) {
    FluxPair f;
    if (boundary == BoundaryKind::Periodic || (i > 0 && i < n)) {
      const std::size_t l = i == 0 ? n - 1 : i - 1;
      const std::size_t r = i == n ? 0 : i;
      f = interface_flux(kind, basis.right_trace(E.element(l)), basis.left_trace(E.element(r)),
                         basis.right_trace(H.element(l)), basis.left_trace(H.element(r)), s);
    } else if (i == 0) {
      f = left_inflow_flux(kind, basis.left_trace(E.element(0)), basis.left_trace(H.element(0)), drive, s);
    } else {
      f = right_absorbing_flux(kind, basis.right_trace(E.element(n - 1)), basis.right_trace(H.element(n - 1)), s);
    }
    fl.e_hat[i] = f.e_hat;
    fl.h_tilde[i] = f.h_tilde;
  }
  return fl;
}

DgField weak_curl(const DgField& u, const std::vector<double>& flux, const Mesh& mesh, const Basis& basis) {
  const std::size_t n = u.n_elements();
  if (flux.size() != n + 1) throw InvalidArgument("flux vector must have N+1 entries");
  DgField out = DgField::zeros_like(u);
  const auto& w = basis.weights();
  for (std::size_t j = 0; j < n; ++j) {
    for (int m = 0; m < basis.n_modes(); ++m) {
      double vol = 0.0;
      for (int q = 0; q < basis.n_quad(); ++q) vol += w[q] * at_node(basis, u.element(j), q) * basis.dphi(q, m);
      out(j, m) = (-vol + flux[j + 1] * basis.right(m) - flux[j] * basis.left(m)) / mesh.jacobian();
    }
  }
  return out;
}

DgField constitutive_project(const DgField& E, const DgField& P, const DgField& Q, const DgField& Y,
                             const ModelParams& p, const Basis& basis) {
  DgField D = DgField::zeros_like(E);
  const auto& w = basis.weights();
  for (std::size_t j = 0; j < E.n_elements(); ++j) {
    for (int m = 0; m < basis.n_modes(); ++m) {
      double qe = 0.0;
      for (int q = 0; q < basis.n_quad(); ++q)
        qe += w[q] * at_node(basis, Q.element(j), q) * at_node(basis, E.element(j), q) * basis.phi(q, m);
      D(j, m) = p.eps_inf * E(j, m) + p.a * (1.0 - p.theta) * Y(j, m) + P(j, m) + p.a * p.theta * qe;
    }
  }
  return D;
}

DgField aux_y_update(const DgField& Y, const DgField& E_old, const DgField& E_new, const Basis& basis) {
  DgField out = Y;
  const auto& w = basis.weights();
  for (std::size_t j = 0; j < Y.n_elements(); ++j) {
    for (int m = 0; m < basis.n_modes(); ++m) {
      double acc = 0.0;
      for (int q = 0; q < basis.n_quad(); ++q) {
        double a = at_node(basis, E_old.element(j), q), b = at_node(basis, E_new.element(j), q);
        acc += w[q] * 1.5 * (a * a + b * b) * (b - a) * basis.phi(q, m);
      }
      out(j, m) += acc;
    }
  }
  return out;
}

DgField project_l2(const ScalarFunction& f, const Mesh& mesh, const Basis& basis) {
  DgField out(mesh.size(), basis.n_modes());
  const auto& w = basis.weights();
  const auto& xi = basis.nodes();
  for (std::size_t j = 0; j < mesh.size(); ++j) {
    for (int q = 0; q < basis.n_quad(); ++q) {
      double v = f(mesh.to_physical(j, xi[q]));
      for (int m = 0; m < basis.n_modes(); ++m) out(j, m) += w[q] * v * basis.phi(q, m);
    }
  }
  return out;
}

double continuous_energy(const SimState& s, const ModelParams& params, const Mesh& mesh, const Basis& basis) {
  require_oscillator_frequency(s, params);
  double total = 0.0;
  const auto& w = basis.weights();
  for (std::size_t j = 0; j < mesh.size(); ++j) {
    for (int q = 0; q < basis.n_quad(); ++q) {
      double h = at_node(basis, s.H.element(j), q);
      total += w[q] * mesh.jacobian() *
               energy_density(params, h * h, at_node(basis, s.E.element(j), q), at_node(basis, s.P.element(j), q),
                              at_node(basis, s.J.element(j), q), at_node(basis, s.Q.element(j), q),
                              at_node(basis, s.sigma.element(j), q));
    }
  }
  return total;
}

}  // namespace kerrdg::reference
