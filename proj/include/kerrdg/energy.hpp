#ifndef KERRDG_ENERGY_HPP
#define KERRDG_ENERGY_HPP

#include "kerrdg/integrators.hpp"

namespace kerrdg {

// Discrete energy at t^n. Leap-frog needs H^{n+1/2} in h_forward (the state holds H^{n-1/2}).
double discrete_energy(const SimState& s, const DgField* h_forward, SchemeKind scheme, const DgOperator& op,
                       double dt);

// One-step energy balance:
// E^{n+1} - E^n = -j_dissipation - sigma_dissipation - jump_dissipation - dt (theta_in + theta_out)
struct EnergyLedger {
  double energy_before = 0.0;
  double energy_after = 0.0;
  double j_dissipation = 0.0;
  double sigma_dissipation = 0.0;
  double jump_dissipation = 0.0;
  double theta_in = 0.0;
  double theta_out = 0.0;
  double identity_residual = 0.0;
  double relative_residual = 0.0;
  // Leap-frog with the absorbing wall has a right-wall term of no definite sign.
  bool certified = true;

  double delta() const { return energy_after - energy_before; }
};

// Leap-frog: before.H_half = H^{n-1/2}, after.H_half = H^{n+1/2}, h_after_forward = H^{n+3/2}.
EnergyLedger energy_identity_check(const SimState& before, const SimState& after, const DgField* h_after_forward,
                                   SchemeKind scheme, const DgOperator& op, double dt);

}  // namespace kerrdg

#endif
