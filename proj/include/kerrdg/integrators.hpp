#ifndef KERRDG_INTEGRATORS_HPP
#define KERRDG_INTEGRATORS_HPP

#include <span>
#include <vector>

#include <Eigen/Sparse>

#include "kerrdg/basis.hpp"
#include "kerrdg/dg_field.hpp"
#include "kerrdg/fluxes.hpp"
#include "kerrdg/mesh.hpp"
#include "kerrdg/model.hpp"
#include "kerrdg/newton.hpp"

namespace kerrdg {

// Left-wall data E(0,t), H(0,t). Empty functions read as zero.
struct Drivers {
  ScalarFunction E;
  ScalarFunction H;
};

// Mesh, basis, material and flux choice of one semi-discretization.
class DgOperator {
 public:
  DgOperator(const Mesh& mesh, int degree, const ModelParams& params, FluxKind flux, BoundaryKind boundary,
             Drivers drivers = {});

  const Mesh& mesh() const { return mesh_; }
  const Basis& basis() const { return basis_; }
  const ModelParams& params() const { return params_; }
  FluxKind flux() const { return flux_; }
  BoundaryKind boundary() const { return boundary_; }
  const Drivers& drivers() const { return drivers_; }
  double sqrt_eps() const { return sqrt_eps_; }

  double driver_E(double t) const { return drivers_.E ? drivers_.E(t) : 0.0; }
  double driver_H(double t) const { return drivers_.H ? drivers_.H(t) : 0.0; }
  DriverValues drive(double t_e, double t_h) const { return {driver_E(t_e), driver_H(t_h)}; }

  InterfaceFluxes fluxes(const DgField& E, const DgField& H, DriverValues d) const;

 private:
  Mesh mesh_;
  Basis basis_;
  ModelParams params_;
  FluxKind flux_;
  BoundaryKind boundary_;
  Drivers drivers_;
  double sqrt_eps_;
};

enum class SchemeKind { LeapFrog, FullyImplicit };

const char* to_string(SchemeKind s);

// Auto uses cell-local Newton wherever the flux allows it.
enum class SolveStrategy { Auto, Global };

struct StepOptions {
  NewtonConfig newton;
  SolveStrategy strategy = SolveStrategy::Auto;
};

struct StepResult {
  SimState state;
  StepReport report;
};

// Solves X = H_base + sign dt/2 curl(E; E_hat(E, X)) with wall data at (t_e, t_h).
DgField leapfrog_half_step(const DgField& E, const DgField& H_base, double sign, double dt, double t_e, double t_h,
                           const DgOperator& op, const NewtonConfig& cfg, StepReport& report);

// Staggered state at t^n from a collocated one: H_half = H^{n-1/2} by a backward half step.
SimState start_leapfrog(const SimState& collocated, double dt, const DgOperator& op, const NewtonConfig& cfg);

// H^{n+1/2} of a staggered state for the step of length dt.
DgField leapfrog_forward_half(const SimState& s, double dt, const DgOperator& op, const NewtonConfig& cfg,
                              StepReport& report);

StepResult step_leapfrog(const SimState& s, double dt, const DgOperator& op, const StepOptions& opt);
StepResult step_implicit(const SimState& s, double dt, const DgOperator& op, const StepOptions& opt);
StepResult step(SchemeKind scheme, const SimState& s, double dt, const DgOperator& op, const StepOptions& opt);

// Finite-difference Jacobian of F at u for a block-banded map (block j touches rows j-1..j+1),
// probed with a distance-2 colouring of the blocks.
Eigen::SparseMatrix<double> colored_fd_jacobian(const VectorFunction& F, std::span<const double> u,
                                                std::span<const double> Fu, std::size_t n_blocks, int block_size,
                                                bool periodic, double fd_epsilon);

// Sparse LU of the coloured Jacobian, usable as a Newton-Krylov preconditioner.
PreconditionerFactory sparse_lu_preconditioner(const VectorFunction& F, std::size_t n_blocks, int block_size,
                                               bool periodic, double fd_epsilon);

}  // namespace kerrdg

#endif
