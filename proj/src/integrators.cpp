#include "kerrdg/integrators.hpp"

#include <algorithm>
#include <cmath>
#include <memory>
#include <set>

#include <Eigen/SparseLU>

#include "kerrdg/error.hpp"

namespace kerrdg {

DgOperator::DgOperator(const Mesh& mesh, int degree, const ModelParams& params, FluxKind flux,
                       BoundaryKind boundary, Drivers drivers)
    : mesh_(mesh), basis_(degree), params_(params), flux_(flux), boundary_(boundary), drivers_(std::move(drivers)) {
  params_.validate();
  sqrt_eps_ = std::sqrt(params_.eps_inf);
}

InterfaceFluxes DgOperator::fluxes(const DgField& E, const DgField& H, DriverValues d) const {
  return compute_fluxes(E, H, basis_, flux_, boundary_, params_.eps_inf, d);
}

const char* to_string(SchemeKind s) { return s == SchemeKind::LeapFrog ? "leapfrog" : "implicit"; }

namespace {

ElementOld old_of(const SimState& s, std::size_t j) {
  return {s.E.element(j), s.P.element(j), s.J.element(j), s.Q.element(j), s.sigma.element(j), s.Y.element(j)};
}

void constitutive_all(const ConstitutiveKernel& K, const SimState& s, const DgField& En, DgField& Dn) {
  const auto n = static_cast<long>(En.n_elements());
#pragma omp parallel for schedule(static)
  for (long j = 0; j < n; ++j) K.apply(old_of(s, j), En.element(j), Dn.element(j), nullptr, nullptr);
}

void update_aux(const ConstitutiveKernel& K, const SimState& s, const DgField& En, SimState& out) {
  const auto n = static_cast<long>(En.n_elements());
#pragma omp parallel
  {
    std::vector<double> d(En.n_modes());
#pragma omp for schedule(static)
    for (long j = 0; j < n; ++j) {
      ElementNew aux{out.P.element(j), out.J.element(j), out.Q.element(j), out.sigma.element(j), out.Y.element(j)};
      K.apply(old_of(s, j), En.element(j), d, nullptr, &aux);
    }
  }
}

DgField from_flat(std::span<const double> u, std::size_t n, int nm) {
  DgField f(n, nm);
  std::copy(u.begin(), u.end(), f.data().begin());
  return f;
}

void check_converged(const StepReport& r, const char* what) {
  if (!r.converged) {
    int it = r.used_global_solve ? r.newton_iters : r.local_newton_max_iters;
    double res = r.used_global_solve ? r.final_residual : r.local_residual;
    throw SolverError(std::string(what) + ": Newton iteration did not converge", it, res);
  }
}

bool is_periodic(const DgOperator& op) { return op.boundary() == BoundaryKind::Periodic; }

}  // namespace

Eigen::SparseMatrix<double> colored_fd_jacobian(const VectorFunction& F, std::span<const double> u,
                                                std::span<const double> Fu, std::size_t n_blocks, int block_size,
                                                bool periodic, double fd_epsilon) {
  const std::size_t n = u.size();
  if (n != n_blocks * static_cast<std::size_t>(block_size)) throw InvalidArgument("block layout mismatch");
  auto neighbours = [&](std::size_t j) {
    std::set<std::size_t> s{j};
    if (j > 0) s.insert(j - 1);
    else if (periodic) s.insert(n_blocks - 1);
    if (j + 1 < n_blocks) s.insert(j + 1);
    else if (periodic) s.insert(0);
    return s;
  };
  // greedy distance-2 colouring
  std::vector<int> color(n_blocks, -1);
  int n_colors = 0;
  for (std::size_t j = 0; j < n_blocks; ++j) {
    std::set<int> used;
    for (std::size_t a : neighbours(j))
      for (std::size_t b : neighbours(a))
        if (color[b] >= 0) used.insert(color[b]);
    int c = 0;
    while (used.count(c)) ++c;
    color[j] = c;
    n_colors = std::max(n_colors, c + 1);
  }
  std::vector<Eigen::Triplet<double>> trip;
  std::vector<double> up(u.begin(), u.end()), fp(n), step(n);
  for (int c = 0; c < n_colors; ++c) {
    for (int d = 0; d < block_size; ++d) {
      std::copy(u.begin(), u.end(), up.begin());
      for (std::size_t j = 0; j < n_blocks; ++j) {
        if (color[j] != c) continue;
        std::size_t i = j * block_size + d;
        step[i] = fd_epsilon * (1.0 + std::abs(u[i]));
        up[i] += step[i];
      }
      F(up, fp);
      for (std::size_t j = 0; j < n_blocks; ++j) {
        if (color[j] != c) continue;
        std::size_t col = j * block_size + d;
        for (std::size_t b : neighbours(j)) {
          for (int r = 0; r < block_size; ++r) {
            std::size_t row = b * block_size + r;
            double v = (fp[row] - Fu[row]) / step[col];
            if (v != 0.0) trip.emplace_back(static_cast<int>(row), static_cast<int>(col), v);
          }
        }
      }
    }
  }
  Eigen::SparseMatrix<double> J(static_cast<int>(n), static_cast<int>(n));
  J.setFromTriplets(trip.begin(), trip.end());
  J.makeCompressed();
  return J;
}

PreconditionerFactory sparse_lu_preconditioner(const VectorFunction& F, std::size_t n_blocks, int block_size,
                                               bool periodic, double fd_epsilon) {
  return [=](std::span<const double> u) -> Preconditioner {
    std::vector<double> Fu(u.size());
    F(u, Fu);
    auto J = colored_fd_jacobian(F, u, Fu, n_blocks, block_size, periodic, fd_epsilon);
    auto lu = std::make_shared<Eigen::SparseLU<Eigen::SparseMatrix<double>>>();
    lu->compute(J);
    if (lu->info() != Eigen::Success) return {};
    return [lu](std::span<const double> r, std::span<double> z) {
      Eigen::Map<const Eigen::VectorXd> rv(r.data(), static_cast<Eigen::Index>(r.size()));
      Eigen::Map<Eigen::VectorXd> zv(z.data(), static_cast<Eigen::Index>(z.size()));
      zv = lu->solve(rv);
    };
  };
}

DgField leapfrog_half_step(const DgField& E, const DgField& H_base, double sign, double dt, double t_e, double t_h,
                           const DgOperator& op, const NewtonConfig& cfg, StepReport& report) {
  const Mesh& mesh = op.mesh();
  const Basis& basis = op.basis();
  const double half = 0.5 * dt * sign;
  const DriverValues d = op.drive(t_e, t_h);
  const std::size_t N = mesh.size();
  const int nm = basis.n_modes();

  DgField X = H_base;
  {
    auto fl = op.fluxes(E, H_base, d);
    X.axpy(half, weak_curl(E, fl.e_hat, mesh, basis));
  }
  if (op.flux() == FluxKind::Upwind) {
    VectorFunction F = [&](std::span<const double> u, std::span<double> r) {
      DgField Xu = from_flat(u, N, nm);
      auto fl = op.fluxes(E, Xu, d);
      DgField c = weak_curl(E, fl.e_hat, mesh, basis);
      for (std::size_t i = 0; i < u.size(); ++i) r[i] = u[i] - H_base.data()[i] - half * c.data()[i];
    };
    auto pf = sparse_lu_preconditioner(F, N, nm, is_periodic(op), cfg.fd_epsilon);
    StepReport r = newton_krylov(F, X.data(), cfg, &pf);
    report.merge(r);
    check_converged(r, "half step");
  } else if (op.boundary() == BoundaryKind::SolitonIO) {
    // wall flux 3/4 E^- - X^-/(4 s) couples the last cell to its own unknowns
    const std::size_t j = N - 1;
    const double beta = half / mesh.jacobian();
    const double c = beta / (4.0 * op.sqrt_eps());
    auto g = X.element(j);
    const double hb = basis.right_trace(H_base.element(j));
    for (int m = 0; m < nm; ++m) g[m] += beta * basis.right(m) * hb / (4.0 * op.sqrt_eps());
    double pg = 0.0, pp = 0.0;
    for (int m = 0; m < nm; ++m) {
      pg += basis.right(m) * g[m];
      pp += basis.right(m) * basis.right(m);
    }
    const double den = 1.0 + c * pp;
    if (!(den > 0.0)) throw SolverError("half step: singular wall system", 0, 0.0);
    for (int m = 0; m < nm; ++m) g[m] -= c * basis.right(m) * pg / den;
  }
  return X;
}

SimState start_leapfrog(const SimState& s, double dt, const DgOperator& op, const NewtonConfig& cfg) {
  if (s.layout != HLayout::Collocated) throw InvalidArgument("leap-frog start expects a collocated state");
  SimState out = s;
  StepReport rep;
  out.H_half = leapfrog_half_step(s.E, s.H, -1.0, dt, s.time, s.time - 0.5 * dt, op, cfg, rep);
  out.layout = HLayout::Staggered;
  return out;
}

DgField leapfrog_forward_half(const SimState& s, double dt, const DgOperator& op, const NewtonConfig& cfg,
                              StepReport& report) {
  return leapfrog_half_step(s.E, s.H, 1.0, dt, s.time, s.time + 0.5 * dt, op, cfg, report);
}

StepResult step_leapfrog(const SimState& s, double dt, const DgOperator& op, const StepOptions& opt) {
  if (s.layout != HLayout::Staggered) throw InvalidArgument("leap-frog step expects a staggered state");
  if (!(dt > 0.0)) throw InvalidArgument("time step must be positive");
  const Mesh& mesh = op.mesh();
  const Basis& basis = op.basis();
  const NewtonConfig& cfg = opt.newton;
  const std::size_t N = mesh.size();
  const int nm = basis.n_modes();
  const double t = s.time;

  StepResult res;
  StepReport& rep = res.report;
  DgField Hh = leapfrog_forward_half(s, dt, op, cfg, rep);

  const DriverValues dH{0.5 * (op.driver_E(t) + op.driver_E(t + dt)), op.driver_H(t + 0.5 * dt)};
  ConstitutiveKernel K(basis, op.params(), dt);
  DgField En = s.E;

  const bool local = op.flux() != FluxKind::Upwind && opt.strategy == SolveStrategy::Auto;
  if (local) {
    auto fl0 = op.fluxes(s.E, Hh, dH);
    DgField target = s.D;
    target.axpy(dt, weak_curl(Hh, fl0.h_tilde, mesh, basis));
    const double wall =
        op.boundary() == BoundaryKind::SolitonIO ? dt * op.sqrt_eps() / (8.0 * mesh.jacobian()) : 0.0;
    const auto nl = static_cast<long>(N);
    int max_it = 0;
    double max_res = 0.0;
    bool ok = true;
#pragma omp parallel for schedule(static) reduction(max : max_it, max_res) reduction(&& : ok)
    for (long j = 0; j < nl; ++j) {
      const bool at_wall = wall != 0.0 && j == nl - 1;
      ElementOld old = old_of(s, j);
      auto tj = target.element(j);
      auto e0 = s.E.element(j);
      std::array<double, kMaxModes> dbuf{};
      std::span<double> dj(dbuf.data(), nm);
      LocalVector x(nm);
      for (int m = 0; m < nm; ++m) x(m) = e0[m];
      auto sys = [&](const LocalVector& xv, LocalVector& r, LocalMatrix& A) {
        K.apply(old, std::span<const double>(xv.data(), nm), dj, &A, nullptr);
        for (int m = 0; m < nm; ++m) r(m) = dj[m] - tj[m];
        if (at_wall) {
          double p = 0.0;
          for (int m = 0; m < nm; ++m) p += basis.right(m) * (xv(m) - e0[m]);
          for (int m = 0; m < nm; ++m) {
            r(m) += wall * basis.right(m) * p;
            for (int l = 0; l < nm; ++l) A(m, l) += wall * basis.right(m) * basis.right(l);
          }
        }
      };
      LocalNewtonResult lr = local_newton(sys, x, cfg.local_tol, cfg.local_max_iters);
      for (int m = 0; m < nm; ++m) En(j, m) = x(m);
      max_it = std::max(max_it, lr.iterations);
      max_res = std::max(max_res, lr.residual);
      ok = ok && lr.converged;
    }
    StepReport lrep;
    lrep.local_newton_max_iters = max_it;
    lrep.local_residual = max_res;
    lrep.converged = ok;
    rep.merge(lrep);
    check_converged(lrep, "leap-frog cell solve");
  } else {
    VectorFunction F = [&](std::span<const double> u, std::span<double> r) {
      DgField Eu = from_flat(u, N, nm);
      DgField Eb = 0.5 * (s.E + Eu);
      auto fl = op.fluxes(Eb, Hh, dH);
      DgField c = weak_curl(Hh, fl.h_tilde, mesh, basis);
      DgField Dn = DgField::zeros_like(Eu);
      constitutive_all(K, s, Eu, Dn);
      for (std::size_t i = 0; i < u.size(); ++i) r[i] = Dn.data()[i] - s.D.data()[i] - dt * c.data()[i];
    };
    auto pf = sparse_lu_preconditioner(F, N, nm, is_periodic(op), cfg.fd_epsilon);
    StepReport r = newton_krylov(F, En.data(), cfg, &pf);
    rep.merge(r);
    check_converged(r, "leap-frog global solve");
  }

  SimState& out = res.state;
  out = s;
  {
    DgField Eb = 0.5 * (s.E + En);
    auto fl = op.fluxes(Eb, Hh, dH);
    out.D = s.D;
    out.D.axpy(dt, weak_curl(Hh, fl.h_tilde, mesh, basis));
  }
  update_aux(K, s, En, out);
  out.E = En;
  {
    auto fl = op.fluxes(En, Hh, op.drive(t + dt, t + 0.5 * dt));
    out.H = Hh;
    out.H.axpy(0.5 * dt, weak_curl(En, fl.e_hat, mesh, basis));
  }
  out.H_half = std::move(Hh);
  out.time = t + dt;
  out.layout = HLayout::Staggered;
  return res;
}

StepResult step_implicit(const SimState& s, double dt, const DgOperator& op, const StepOptions& opt) {
  if (s.layout != HLayout::Collocated) throw InvalidArgument("implicit step expects a collocated state");
  if (!(dt > 0.0)) throw InvalidArgument("time step must be positive");
  const Mesh& mesh = op.mesh();
  const Basis& basis = op.basis();
  const NewtonConfig& cfg = opt.newton;
  const std::size_t N = mesh.size();
  const int nm = basis.n_modes();
  const double t = s.time;
  const DriverValues dAvg{0.5 * (op.driver_E(t) + op.driver_E(t + dt)),
                          0.5 * (op.driver_H(t) + op.driver_H(t + dt))};
  ConstitutiveKernel K(basis, op.params(), dt);

  auto unpack = [&](std::span<const double> u, DgField& Hn, DgField& En) {
    for (std::size_t j = 0; j < N; ++j)
      for (int m = 0; m < nm; ++m) {
        Hn(j, m) = u[j * 2 * nm + m];
        En(j, m) = u[j * 2 * nm + nm + m];
      }
  };

  VectorFunction F = [&](std::span<const double> u, std::span<double> r) {
    DgField Hn(N, nm), En(N, nm), Dn(N, nm);
    unpack(u, Hn, En);
    DgField Hb = 0.5 * (s.H + Hn);
    DgField Eb = 0.5 * (s.E + En);
    auto fl = op.fluxes(Eb, Hb, dAvg);
    DgField cE = weak_curl(Eb, fl.e_hat, mesh, basis);
    DgField cH = weak_curl(Hb, fl.h_tilde, mesh, basis);
    constitutive_all(K, s, En, Dn);
    for (std::size_t j = 0; j < N; ++j)
      for (int m = 0; m < nm; ++m) {
        r[j * 2 * nm + m] = Hn(j, m) - s.H(j, m) - dt * cE(j, m);
        r[j * 2 * nm + nm + m] = Dn(j, m) - s.D(j, m) - dt * cH(j, m);
      }
  };

  std::vector<double> u(N * 2 * nm);
  for (std::size_t j = 0; j < N; ++j)
    for (int m = 0; m < nm; ++m) {
      u[j * 2 * nm + m] = s.H(j, m);
      u[j * 2 * nm + nm + m] = s.E(j, m);
    }
  auto pf = sparse_lu_preconditioner(F, N, 2 * nm, is_periodic(op), cfg.fd_epsilon);
  StepResult res;
  res.report = newton_krylov(F, u, cfg, &pf);
  check_converged(res.report, "implicit step");

  DgField Hn(N, nm), En(N, nm);
  unpack(u, Hn, En);
  SimState& out = res.state;
  out = s;
  {
    DgField Hb = 0.5 * (s.H + Hn);
    DgField Eb = 0.5 * (s.E + En);
    auto fl = op.fluxes(Eb, Hb, dAvg);
    out.D = s.D;
    out.D.axpy(dt, weak_curl(Hb, fl.h_tilde, mesh, basis));
  }
  update_aux(K, s, En, out);
  out.E = std::move(En);
  out.H = std::move(Hn);
  out.time = t + dt;
  return res;
}

StepResult step(SchemeKind scheme, const SimState& s, double dt, const DgOperator& op, const StepOptions& opt) {
  return scheme == SchemeKind::LeapFrog ? step_leapfrog(s, dt, op, opt) : step_implicit(s, dt, op, opt);
}

}  // namespace kerrdg
