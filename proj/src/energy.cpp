#include "kerrdg/energy.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

#include "kerrdg/error.hpp"

namespace kerrdg {

namespace {

double bulk_energy(const SimState& s, const DgField& Ha, const DgField& Hb, const DgOperator& op) {
  const Basis& basis = op.basis();
  const ModelParams& p = op.params();
  const int nq = basis.n_quad();
  const auto n = static_cast<long>(s.E.n_elements());
  std::vector<double> cell(n);
#pragma omp parallel for schedule(static)
  for (long j = 0; j < n; ++j) {
    double acc = 0.0;
    for (int q = 0; q < nq; ++q) {
      double ha = basis.eval_at_node(Ha.element(j), q);
      double hb = basis.eval_at_node(Hb.element(j), q);
      double e = basis.eval_at_node(s.E.element(j), q);
      double P = basis.eval_at_node(s.P.element(j), q);
      double J = basis.eval_at_node(s.J.element(j), q);
      double Q = basis.eval_at_node(s.Q.element(j), q);
      double sg = basis.eval_at_node(s.sigma.element(j), q);
      acc += basis.weights()[q] * energy_density(p, ha * hb, e, P, J, Q, sg);
    }
    cell[j] = acc;
  }
  double total = 0.0;
  for (double c : cell) total += c;
  return total * op.mesh().jacobian();
}

// int (u + v)^2 over the mesh
double sum_square_integral(const DgField& u, const DgField& v, const DgOperator& op) {
  double total = 0.0;
  for (std::size_t i = 0; i < u.size(); ++i) {
    double w = u.data()[i] + v.data()[i];
    total += w * w;
  }
  return total * op.mesh().jacobian();
}

struct Traces {
  std::vector<double> minus, plus;  // edge i: minus from cell i-1, plus from cell i
};

Traces traces_of(const DgField& f, const Basis& b) {
  const std::size_t n = f.n_elements();
  Traces t{std::vector<double>(n + 1, 0.0), std::vector<double>(n + 1, 0.0)};
  for (std::size_t j = 0; j < n; ++j) {
    t.plus[j] = b.left_trace(f.element(j));
    t.minus[j + 1] = b.right_trace(f.element(j));
  }
  return t;
}

// jumps [u]_i at interior edges (all N edges when periodic)
std::vector<double> jumps(const DgField& f, const Basis& b, BoundaryKind bc) {
  Traces t = traces_of(f, b);
  const std::size_t n = f.n_elements();
  std::vector<double> out;
  if (bc == BoundaryKind::Periodic) {
    out.push_back(t.plus[0] - t.minus[n]);
  }
  for (std::size_t i = 1; i < n; ++i) out.push_back(t.plus[i] - t.minus[i]);
  return out;
}

}  // namespace

double discrete_energy(const SimState& s, const DgField* h_forward, SchemeKind scheme, const DgOperator& op,
                       double dt) {
  if (scheme == SchemeKind::FullyImplicit) {
    if (s.layout != HLayout::Collocated) throw InvalidArgument("implicit energy expects a collocated state");
    return bulk_energy(s, s.H, s.H, op);
  }
  if (s.layout != HLayout::Staggered || h_forward == nullptr)
    throw InvalidArgument("leap-frog energy needs H^{n-1/2} and H^{n+1/2}");
  if (!h_forward->same_shape(s.H_half)) throw InvalidArgument("field shape mismatch");
  double e = bulk_energy(s, s.H_half, *h_forward, op);
  if (op.flux() == FluxKind::Upwind) {
    const Basis& b = op.basis();
    auto ja = jumps(s.H_half, b, op.boundary());
    DgField sum = s.H_half + *h_forward;
    auto js = jumps(sum, b, op.boundary());
    double acc = 0.0;
    for (std::size_t i = 0; i < ja.size(); ++i) acc += ja[i] * js[i];
    if (op.boundary() == BoundaryKind::SolitonIO) {
      const std::size_t last = s.H_half.n_elements() - 1;
      acc += b.right_trace(s.H_half.element(last)) * b.right_trace(sum.element(last));
    }
    e += dt / (8.0 * op.sqrt_eps()) * acc;
  }
  return e;
}

EnergyLedger energy_identity_check(const SimState& before, const SimState& after, const DgField* h_after_forward,
                                   SchemeKind scheme, const DgOperator& op, double dt) {
  const ModelParams& p = op.params();
  const Basis& b = op.basis();
  const double s = op.sqrt_eps();
  const bool io = op.boundary() == BoundaryKind::SolitonIO;
  const bool leap = scheme == SchemeKind::LeapFrog;
  EnergyLedger L;
  if (leap) {
    if (after.layout != HLayout::Staggered) throw InvalidArgument("leap-frog ledger expects staggered states");
    L.energy_before = discrete_energy(before, &after.H_half, scheme, op, dt);
    L.energy_after = discrete_energy(after, h_after_forward, scheme, op, dt);
  } else {
    L.energy_before = discrete_energy(before, nullptr, scheme, op, dt);
    L.energy_after = discrete_energy(after, nullptr, scheme, op, dt);
  }

  if (p.omega_p != 0.0 && p.inv_tau != 0.0)
    L.j_dissipation = dt * p.inv_tau / (4.0 * p.omega_p * p.omega_p) * sum_square_integral(after.J, before.J, op);
  const double at = p.a * p.theta;
  if (at != 0.0 && p.omega_v != 0.0 && p.inv_tau_v != 0.0)
    L.sigma_dissipation =
        at * dt * p.inv_tau_v / (8.0 * p.omega_v * p.omega_v) * sum_square_integral(after.sigma, before.sigma, op);

  const DgField Es = before.E + after.E;
  // H pair entering the jump dissipation
  const DgField Hs = leap ? before.H_half + after.H_half : before.H + after.H;
  if (op.flux() == FluxKind::Upwind) {
    double jh = 0.0, je = 0.0;
    for (double v : jumps(Hs, b, op.boundary())) jh += v * v;
    for (double v : jumps(Es, b, op.boundary())) je += v * v;
    L.jump_dissipation = dt / (8.0 * s) * jh + dt * s / 8.0 * je;
  }

  if (io) {
    const std::size_t last = Es.n_elements() - 1;
    const double t0 = before.time, t1 = before.time + dt;
    const double Eds = op.driver_E(t0) + op.driver_E(t1);
    const double es_m = b.right_trace(Es.element(last));
    const double es_p = b.left_trace(Es.element(0));
    if (!leap) {
      const double hs_m = b.right_trace(Hs.element(last));
      const double hs_p = b.left_trace(Hs.element(0));
      const double Hds = op.driver_H(t0) + op.driver_H(t1);
      if (op.flux() == FluxKind::Upwind)
        L.theta_out = hs_m * hs_m / (8.0 * s) + s / 8.0 * es_m * es_m;
      else
        L.theta_out = (hs_m - s * es_m) * (hs_m - s * es_m) / (16.0 * s);
      switch (op.flux()) {
        case FluxKind::Central: L.theta_in = Eds * hs_p / 8.0 + Hds * es_p / 8.0; break;
        case FluxKind::AlternatingI: L.theta_in = Hds * es_p / 4.0; break;
        case FluxKind::AlternatingII: L.theta_in = Eds * hs_p / 4.0; break;
        case FluxKind::Upwind:
          L.theta_in = Eds * hs_p / 8.0 + Hds * es_p / 8.0 + hs_p * (hs_p - Hds) / (8.0 * s) +
                       s / 8.0 * es_p * (es_p - Eds);
          break;
      }
    } else {
      if (h_after_forward == nullptr) throw InvalidArgument("leap-frog ledger needs H^{n+3/2}");
      const DgField& Ha = before.H_half;
      const DgField& Hb = after.H_half;
      const DgField& Hc = *h_after_forward;
      const double am = b.right_trace(Ha.element(last)), bm = b.right_trace(Hb.element(last)),
                   cm = b.right_trace(Hc.element(last));
      const double ap = b.left_trace(Ha.element(0)), bp = b.left_trace(Hb.element(0)),
                   cp = b.left_trace(Hc.element(0));
      const double Hd = op.driver_H(t0 + 0.5 * dt);
      if (op.flux() == FluxKind::Upwind) {
        L.theta_out = (am + bm) * (am + bm) / (8.0 * s) + s / 8.0 * es_m * es_m;
      } else {
        const double w = es_m - 2.0 * bm / s;
        L.theta_out = s / 16.0 * w * w + bm * (am - 2.0 * bm + cm) / (16.0 * s);
        L.certified = false;
      }
      switch (op.flux()) {
        case FluxKind::Central: L.theta_in = Eds * bp / 4.0 + Hd * es_p / 4.0; break;
        case FluxKind::AlternatingI: L.theta_in = Hd * es_p / 2.0; break;
        case FluxKind::AlternatingII: L.theta_in = Eds * bp / 2.0; break;
        case FluxKind::Upwind: {
          const double ja = ap - op.driver_H(t0 - 0.5 * dt);
          const double jb = bp - Hd;
          const double jc = cp - op.driver_H(t1 + 0.5 * dt);
          L.theta_in = Eds * bp / 4.0 + Hd * es_p / 4.0 + bp * (ja + 2.0 * jb + jc) / (8.0 * s) +
                       s / 8.0 * es_p * (es_p - Eds);
          break;
        }
      }
      if (op.flux() == FluxKind::Upwind) L.certified = false;
    }
  }

  const double rhs = -L.j_dissipation - L.sigma_dissipation - L.jump_dissipation - dt * (L.theta_in + L.theta_out);
  L.identity_residual = std::abs(L.delta() - rhs);
  const double scale = std::max({std::abs(L.energy_before), std::abs(L.energy_after), std::abs(L.j_dissipation),
                                 std::abs(L.sigma_dissipation), std::abs(L.jump_dissipation),
                                 std::abs(dt * L.theta_in), std::abs(dt * L.theta_out)});
  L.relative_residual = scale > 0.0 ? L.identity_residual / scale : L.identity_residual;
  return L;
}

}  // namespace kerrdg
