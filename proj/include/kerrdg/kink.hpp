#ifndef KERRDG_KINK_HPP
#define KERRDG_KINK_HPP

#include <vector>

#include "kerrdg/basis.hpp"
#include "kerrdg/mesh.hpp"
#include "kerrdg/model.hpp"

namespace kerrdg {

inline constexpr double kKinkPhi0 = 0.24919666777865812;
inline constexpr double kKinkVelocity = 0.6545 / 1.5;
inline constexpr double kKinkPeriod = 6.0;

struct KinkProfileOptions {
  int n_steps = 160000;
  double period = kKinkPeriod;
  double velocity = kKinkVelocity;
  double phi0 = kKinkPhi0;
  // Adjust phi0 within a few ulps-scale bracket so that E returns to zero after one period.
  bool refine_periodicity = true;
};

// Travelling-wave profile E(xi), Phi = dE/dxi tabulated on [0, period].
class KinkProfile {
 public:
  KinkProfile() = default;
  KinkProfile(std::vector<double> E, std::vector<double> Phi, double period, double velocity, double phi0);

  double E(double xi) const;
  double Phi(double xi) const;
  double period() const { return period_; }
  double velocity() const { return v_; }
  double phi0() const { return phi0_; }
  double step() const { return h_; }
  std::size_t size() const { return E_.size(); }
  const std::vector<double>& E_table() const { return E_; }
  const std::vector<double>& Phi_table() const { return Phi_; }
  // |E(period)| and |Phi(period) - Phi(0)|
  double period_defect() const;
  double slope_defect() const;

 private:
  double interp(const std::vector<double>& t, double xi) const;
  std::vector<double> E_, Phi_;
  double period_ = kKinkPeriod, v_ = kKinkVelocity, phi0_ = kKinkPhi0, h_ = 0.0;
};

// Right-hand side dPhi/dxi of the travelling-wave ODE.
double kink_rhs(const ModelParams& p, double v, double E, double Phi);

// SSP-RK3 integration of E' = Phi, Phi' = kink_rhs from E(0) = 0, Phi(0) = phi0.
KinkProfile integrate_kink(const ModelParams& p, double v, double phi0, int n_steps, double period);

KinkProfile kink_profile(const ModelParams& p, const KinkProfileOptions& opt = {});

// Projected fields of the travelling wave at t = 0, collocated layout.
SimState kink_initial_state(const KinkProfile& prof, const Mesh& mesh, const Basis& basis, const ModelParams& p);

// Exact E at time t.
double kink_exact_E(const KinkProfile& prof, double x, double t);

}  // namespace kerrdg

#endif
