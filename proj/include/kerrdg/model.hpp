#ifndef KERRDG_MODEL_HPP
#define KERRDG_MODEL_HPP

#include <span>

#include "kerrdg/basis.hpp"
#include "kerrdg/dg_field.hpp"
#include "kerrdg/mesh.hpp"

namespace kerrdg {

// Dimensionless material parameters of the Lorentz/Kerr/Raman model.
struct ModelParams {
  double eps_inf = 1.0;
  double eps_s = 1.0;
  double a = 0.0;
  double theta = 0.0;
  double omega0 = 0.0;
  double omega_p = 0.0;
  double omega_v = 0.0;
  double inv_tau = 0.0;
  double inv_tau_v = 0.0;

  void validate() const;
  // Energy is a nonnegative functional only for theta in [0, 3/4].
  bool energy_positivity_guaranteed() const { return theta >= 0.0 && theta <= 0.75; }
  double sqrt_eps_inf() const;

  bool operator==(const ModelParams&) const = default;
};

// omega_p^2 = (eps_s - eps_inf) omega0^2
double plasma_frequency(double eps_inf, double eps_s, double omega0);

ModelParams kink_model();
ModelParams soliton_model();

enum class HLayout { Collocated, Staggered };

// Discrete fields at t^n. With the staggered layout H_half carries H^{n-1/2}.
struct SimState {
  DgField H, D, E, P, J, Q, sigma, Y, H_half;
  double time = 0.0;
  HLayout layout = HLayout::Collocated;
};

SimState make_zero_state(const Mesh& mesh, const Basis& basis, HLayout layout = HLayout::Collocated);

// D = pi[eps_inf E + a(1-theta) Y + P + a theta Q E]
DgField constitutive_project(const DgField& E, const DgField& P, const DgField& Q, const DgField& Y,
                             const ModelParams& params, const Basis& basis);

// Y' = pi[Y + 3/2 (E'^2 + E^2)(E' - E)]
DgField aux_y_update(const DgField& Y, const DgField& E_old, const DgField& E_new, const Basis& basis);

// Pointwise energy density; hh is H^2 or a product of two H levels.
double energy_density(const ModelParams& p, double hh, double e, double P, double J, double Q, double sigma);

// Throws InvalidArgument when omega_p = 0 but P or J is nonzero (their energy weights are 1/omega_p^2).
void require_oscillator_frequency(const SimState& state, const ModelParams& params);

// Energy functional of one time level, quadrature in every cell.
double continuous_energy(const SimState& state, const ModelParams& params, const Mesh& mesh, const Basis& basis);

// Trapezoidal elimination of the oscillator pairs over one step of length dt:
// J' = j_j J + j_p P + j_e (E + E'),      P' = P + alpha (J + J')
// s' = s_s s + s_q Q + s_e pi(E E'),      Q' = Q + alpha (s + s')
struct OscillatorStep {
  double alpha = 0.0;
  double j_j = 0.0, j_p = 0.0, j_e = 0.0;
  double s_s = 0.0, s_q = 0.0, s_e = 0.0;

  static OscillatorStep make(const ModelParams& p, double dt);
};

struct ElementOld {
  std::span<const double> E, P, J, Q, sigma, Y;
};

struct ElementNew {
  std::span<double> P, J, Q, sigma, Y;
};

// D'(E') of one cell for a trapezoidal step, with the exact Jacobian dD'/dE'.
class ConstitutiveKernel {
 public:
  ConstitutiveKernel(const Basis& basis, const ModelParams& params, double dt);

  void apply(const ElementOld& old, std::span<const double> e_new, std::span<double> d_new, LocalMatrix* jac,
             const ElementNew* aux) const;

  const OscillatorStep& step() const { return osc_; }
  const ModelParams& params() const { return p_; }

 private:
  const Basis& basis_;
  ModelParams p_;
  OscillatorStep osc_;
};

}  // namespace kerrdg

#endif
