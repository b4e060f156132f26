#ifndef KERRDG_NEWTON_HPP
#define KERRDG_NEWTON_HPP

#include <cmath>
#include <functional>
#include <limits>
#include <span>
#include <vector>

#include "kerrdg/basis.hpp"

namespace kerrdg {

struct NewtonConfig {
  double abs_tol = 1e-10;
  int max_iters = 50;
  // Cell-local solves; these are cheap so they are driven to round-off.
  double local_tol = 1e-13;
  int local_max_iters = 50;
  int gmres_restart = 30;
  int gmres_max_iters = 3000;
  double gmres_forcing = 1e-4;
  double fd_epsilon = std::sqrt(std::numeric_limits<double>::epsilon());
  bool use_preconditioner = true;
};

struct StepReport {
  int newton_iters = 0;
  int linear_iters = 0;
  int local_newton_max_iters = 0;
  double final_residual = 0.0;
  double local_residual = 0.0;
  bool converged = true;
  bool used_global_solve = false;

  void merge(const StepReport& o);
};

struct LocalNewtonResult {
  int iterations = 0;
  double residual = 0.0;
  bool converged = false;
};

// Dense Newton for a small system; sys(x, r, J) fills residual and Jacobian.
template <class System>
LocalNewtonResult local_newton(System&& sys, LocalVector& x, double tol, int max_iters) {
  const int n = static_cast<int>(x.size());
  LocalVector r(n);
  LocalMatrix J(n, n);
  LocalNewtonResult res;
  sys(x, r, J);
  res.residual = r.norm();
  bool stalled = false;
  while (res.residual > tol && res.iterations < max_iters) {
    LocalVector dx = J.partialPivLu().solve(r);
    x -= dx;
    ++res.iterations;
    sys(x, r, J);
    res.residual = r.norm();
    if (!std::isfinite(res.residual)) break;
    if (dx.norm() <= 4.0 * std::numeric_limits<double>::epsilon() * (1.0 + x.norm()) && res.residual < 1e3 * tol) {
      stalled = true;
      break;
    }
  }
  res.converged = std::isfinite(res.residual) && (res.residual <= tol || stalled);
  return res;
}

using VectorFunction = std::function<void(std::span<const double> u, std::span<double> r)>;
using LinearOperator = std::function<void(std::span<const double> v, std::span<double> out)>;
// z ~ A^{-1} r
using Preconditioner = std::function<void(std::span<const double> r, std::span<double> z)>;

struct KrylovResult {
  int iterations = 0;
  double residual = 0.0;
  bool converged = false;
};

// Restarted right-preconditioned GMRES from x as initial guess.
KrylovResult gmres(const LinearOperator& A, std::span<const double> b, std::span<double> x, int restart,
                   double tol, int max_iters, const Preconditioner* M = nullptr);

// Matrix-free Newton-Krylov. The optional factory rebuilds the preconditioner at the current iterate.
using PreconditionerFactory = std::function<Preconditioner(std::span<const double> u)>;

StepReport newton_krylov(const VectorFunction& F, std::vector<double>& u, const NewtonConfig& cfg,
                         const PreconditionerFactory* precond = nullptr);

double norm2(std::span<const double> v);

}  // namespace kerrdg

#endif
