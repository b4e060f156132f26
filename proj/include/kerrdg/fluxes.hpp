#ifndef KERRDG_FLUXES_HPP
#define KERRDG_FLUXES_HPP

#include <vector>

#include "kerrdg/basis.hpp"
#include "kerrdg/dg_field.hpp"
#include "kerrdg/mesh.hpp"

namespace kerrdg {

enum class FluxKind { Central, AlternatingI, AlternatingII, Upwind };
enum class BoundaryKind { Periodic, SolitonIO };

const char* to_string(FluxKind k);
const char* to_string(BoundaryKind k);

// Traces at the N+1 edges x_{i-1/2}, i = 0..N. For periodic meshes edge N duplicates edge 0.
// For the inflow/outflow setup the exterior entries (minus at 0, plus at N) are left at zero.
struct InterfaceTraces {
  std::vector<double> e_minus, e_plus, h_minus, h_plus;
  std::size_t size() const { return e_minus.size(); }
};

InterfaceTraces assemble_traces(const DgField& E, const DgField& H, const Basis& basis, BoundaryKind boundary);

struct FluxPair {
  double e_hat = 0.0;
  double h_tilde = 0.0;
};

// Interior numerical flux for jump [v] = v+ - v-.
FluxPair interface_flux(FluxKind kind, double em, double ep, double hm, double hp, double sqrt_eps);

struct InterfaceFluxes {
  std::vector<double> e_hat, h_tilde;
};

// Interior formula at every edge of the trace set.
InterfaceFluxes eval_fluxes(const InterfaceTraces& tr, FluxKind kind, double eps_inf);

// Exterior data at the left wall.
struct DriverValues {
  double E = 0.0;
  double H = 0.0;
};

FluxPair left_inflow_flux(FluxKind kind, double ep, double hp, DriverValues drive, double sqrt_eps);
// Absorbing right wall, built from interior traces only.
FluxPair right_absorbing_flux(FluxKind kind, double em, double hm, double sqrt_eps);

// Replace the two wall entries of an inflow/outflow flux set.
void boundary_fluxes(const InterfaceTraces& tr, FluxKind kind, double eps_inf, DriverValues drive,
                     InterfaceFluxes& fl);

// Traces plus fluxes in one call; drive is ignored for periodic meshes.
InterfaceFluxes compute_fluxes(const DgField& E, const DgField& H, const Basis& basis, FluxKind kind,
                               BoundaryKind boundary, double eps_inf, DriverValues drive = {});

// DG derivative of u with edge values flux[i]:
// (int u phi' - F_{j+1/2} phi(1) + F_{j-1/2} phi(-1)) with sign flipped and scaled by 2/h.
DgField weak_curl(const DgField& u, const std::vector<double>& flux, const Mesh& mesh, const Basis& basis);
void weak_curl_into(const DgField& u, const std::vector<double>& flux, const Mesh& mesh, const Basis& basis,
                    DgField& out);

}  // namespace kerrdg

#endif
