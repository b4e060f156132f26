#include "kerrdg/fluxes.hpp"

#include <cmath>

#include "kerrdg/error.hpp"

namespace kerrdg {

const char* to_string(FluxKind k) {
  switch (k) {
    case FluxKind::Central: return "central";
    case FluxKind::AlternatingI: return "alt1";
    case FluxKind::AlternatingII: return "alt2";
    case FluxKind::Upwind: return "upwind";
  }
  return "?";
}

const char* to_string(BoundaryKind k) {
  return k == BoundaryKind::Periodic ? "periodic" : "soliton-io";
}

InterfaceTraces assemble_traces(const DgField& E, const DgField& H, const Basis& basis, BoundaryKind boundary) {
  if (!E.same_shape(H)) throw InvalidArgument("field shape mismatch");
  const std::size_t n = E.n_elements();
  InterfaceTraces tr;
  tr.e_minus.assign(n + 1, 0.0);
  tr.e_plus.assign(n + 1, 0.0);
  tr.h_minus.assign(n + 1, 0.0);
  tr.h_plus.assign(n + 1, 0.0);
  for (std::size_t j = 0; j < n; ++j) {
    tr.e_plus[j] = basis.left_trace(E.element(j));
    tr.h_plus[j] = basis.left_trace(H.element(j));
    tr.e_minus[j + 1] = basis.right_trace(E.element(j));
    tr.h_minus[j + 1] = basis.right_trace(H.element(j));
  }
  if (boundary == BoundaryKind::Periodic) {
    tr.e_minus[0] = tr.e_minus[n];
    tr.h_minus[0] = tr.h_minus[n];
    tr.e_plus[n] = tr.e_plus[0];
    tr.h_plus[n] = tr.h_plus[0];
  }
  return tr;
}

FluxPair interface_flux(FluxKind kind, double em, double ep, double hm, double hp, double s) {
  switch (kind) {
    case FluxKind::Central: return {0.5 * (em + ep), 0.5 * (hm + hp)};
    case FluxKind::AlternatingI: return {ep, hm};
    case FluxKind::AlternatingII: return {em, hp};
    case FluxKind::Upwind:
      return {0.5 * (em + ep) + (hp - hm) / (2.0 * s), 0.5 * (hm + hp) + 0.5 * s * (ep - em)};
  }
  return {};
}

InterfaceFluxes eval_fluxes(const InterfaceTraces& tr, FluxKind kind, double eps_inf) {
  if (!(eps_inf > 0.0)) throw InvalidArgument("eps_inf must be positive");
  const double s = std::sqrt(eps_inf);
  InterfaceFluxes fl;
  const std::size_t n = tr.size();
  fl.e_hat.resize(n);
  fl.h_tilde.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    FluxPair f = interface_flux(kind, tr.e_minus[i], tr.e_plus[i], tr.h_minus[i], tr.h_plus[i], s);
    fl.e_hat[i] = f.e_hat;
    fl.h_tilde[i] = f.h_tilde;
  }
  return fl;
}

FluxPair left_inflow_flux(FluxKind kind, double ep, double hp, DriverValues drive, double s) {
  return interface_flux(kind, drive.E, ep, drive.H, hp, s);
}

FluxPair right_absorbing_flux(FluxKind kind, double em, double hm, double s) {
  if (kind == FluxKind::Upwind) return {0.5 * em - hm / (2.0 * s), 0.5 * hm - 0.5 * s * em};
  return {0.75 * em - hm / (4.0 * s), 0.75 * hm - 0.25 * s * em};
}

void boundary_fluxes(const InterfaceTraces& tr, FluxKind kind, double eps_inf, DriverValues drive,
                     InterfaceFluxes& fl) {
  if (!(eps_inf > 0.0)) throw InvalidArgument("eps_inf must be positive");
  const double s = std::sqrt(eps_inf);
  const std::size_t n = tr.size() - 1;
  FluxPair l = left_inflow_flux(kind, tr.e_plus[0], tr.h_plus[0], drive, s);
  FluxPair r = right_absorbing_flux(kind, tr.e_minus[n], tr.h_minus[n], s);
  fl.e_hat[0] = l.e_hat;
  fl.h_tilde[0] = l.h_tilde;
  fl.e_hat[n] = r.e_hat;
  fl.h_tilde[n] = r.h_tilde;
}

InterfaceFluxes compute_fluxes(const DgField& E, const DgField& H, const Basis& basis, FluxKind kind,
                               BoundaryKind boundary, double eps_inf, DriverValues drive) {
  InterfaceTraces tr = assemble_traces(E, H, basis, boundary);
  InterfaceFluxes fl = eval_fluxes(tr, kind, eps_inf);
  if (boundary == BoundaryKind::SolitonIO) boundary_fluxes(tr, kind, eps_inf, drive, fl);
  return fl;
}

void weak_curl_into(const DgField& u, const std::vector<double>& flux, const Mesh& mesh, const Basis& basis,
                    DgField& out) {
  const std::size_t n = u.n_elements();
  if (flux.size() != n + 1) throw InvalidArgument("flux vector must have N+1 entries");
  if (mesh.size() != n || u.n_modes() != basis.n_modes()) throw InvalidArgument("field does not match mesh/basis");
  if (!out.same_shape(u)) out = DgField::zeros_like(u);
  const int nm = basis.n_modes();
  LocalMatrix S = element_operators(basis).stiffness;
  const double inv_jac = 1.0 / mesh.jacobian();
  const auto nl = static_cast<long>(n);
#pragma omp parallel for schedule(static)
  for (long j = 0; j < nl; ++j) {
    auto c = u.element(j);
    auto r = out.element(j);
    const double fr = flux[j + 1], fl = flux[j];
    for (int m = 0; m < nm; ++m) {
      double vol = 0.0;
      for (int l = 0; l < nm; ++l) vol += S(m, l) * c[l];
      r[m] = (-vol + fr * basis.right(m) - fl * basis.left(m)) * inv_jac;
    }
  }
}

DgField weak_curl(const DgField& u, const std::vector<double>& flux, const Mesh& mesh, const Basis& basis) {
  DgField out = DgField::zeros_like(u);
  weak_curl_into(u, flux, mesh, basis, out);
  return out;
}

}  // namespace kerrdg
