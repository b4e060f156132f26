#ifndef KERRDG_REFERENCE_HPP
#define KERRDG_REFERENCE_HPP

#include <vector>

#include "kerrdg/basis.hpp"
#include "kerrdg/dg_field.hpp"
#include "kerrdg/fluxes.hpp"
#include "kerrdg/mesh.hpp"
#include "kerrdg/model.hpp"

// Serial, quadrature-only versions of the threaded kernels. Used by tests and the benchmark.
namespace kerrdg::reference {

InterfaceFluxes compute_fluxes(const DgField& E, const DgField& H, const Basis& basis, FluxKind kind,
                               BoundaryKind boundary, double eps_inf, DriverValues drive = {});

DgField weak_curl(const DgField& u, const std::vector<double>& flux, const Mesh& mesh, const Basis& basis);

DgField constitutive_project(const DgField& E, const DgField& P, const DgField& Q, const DgField& Y,
                             const ModelParams& params, const Basis& basis);

DgField aux_y_update(const DgField& Y, const DgField& E_old, const DgField& E_new, const Basis& basis);

DgField project_l2(const ScalarFunction& f, const Mesh& mesh, const Basis& basis);

double continuous_energy(const SimState& s, const ModelParams& params, const Mesh& mesh, const Basis& basis);

}  // namespace kerrdg::reference

#endif
