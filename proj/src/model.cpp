#include "kerrdg/model.hpp"

#include <array>
#include <cmath>
#include <vector>

#include "kerrdg/error.hpp"

namespace kerrdg {

void ModelParams::validate() const {
  auto finite = [](double v) { return std::isfinite(v); };
  if (!(eps_inf > 0.0) || !finite(eps_inf)) throw InvalidArgument("eps_inf must be positive");
  if (!finite(eps_s) || !finite(a) || !finite(theta) || !finite(omega0) || !finite(omega_p) || !finite(omega_v) ||
      !finite(inv_tau) || !finite(inv_tau_v))
    throw InvalidArgument("model parameters must be finite");
  if (a < 0.0) throw InvalidArgument("Kerr coefficient a must be >= 0");
  if (theta < 0.0 || theta > 1.0) throw InvalidArgument("theta must lie in [0, 1]");
  if (omega0 < 0.0 || omega_p < 0.0 || omega_v < 0.0) throw InvalidArgument("frequencies must be >= 0");
  if (inv_tau < 0.0 || inv_tau_v < 0.0) throw InvalidArgument("damping rates must be >= 0");
}

double ModelParams::sqrt_eps_inf() const { return std::sqrt(eps_inf); }

double plasma_frequency(double eps_inf, double eps_s, double omega0) {
  return std::sqrt((eps_s - eps_inf) * omega0 * omega0);
}

ModelParams kink_model() {
  ModelParams p;
  p.eps_inf = 2.25;
  p.eps_s = 5.25;
  p.omega0 = 93.627179982222216;
  p.omega_p = plasma_frequency(p.eps_inf, p.eps_s, p.omega0);
  p.a = 0.75;
  p.theta = 0.0;
  return p;
}

ModelParams soliton_model() {
  ModelParams p;
  p.eps_inf = 2.25;
  p.eps_s = 5.25;
  p.inv_tau = 1.168e-5;
  p.inv_tau_v = 29.2 / 32.0;
  p.a = 0.07;
  p.theta = 0.3;
  p.omega0 = 5.84;
  p.omega_v = 1.28;
  p.omega_p = plasma_frequency(p.eps_inf, p.eps_s, p.omega0);
  return p;
}

SimState make_zero_state(const Mesh& mesh, const Basis& basis, HLayout layout) {
  DgField z(mesh.size(), basis.n_modes());
  SimState s{z, z, z, z, z, z, z, z, z, 0.0, layout};
  return s;
}

namespace {

void check_shapes(std::initializer_list<const DgField*> fields) {
  const DgField* first = *fields.begin();
  for (const DgField* f : fields)
    if (!f->same_shape(*first)) throw InvalidArgument("field shape mismatch");
}

}  // namespace

DgField constitutive_project(const DgField& E, const DgField& P, const DgField& Q, const DgField& Y,
                             const ModelParams& params, const Basis& basis) {
  check_shapes({&E, &P, &Q, &Y});
  if (E.n_modes() != basis.n_modes()) throw InvalidArgument("basis does not match field");
  DgField D = DgField::zeros_like(E);
  const double kerr = params.a * (1.0 - params.theta);
  const double raman = params.a * params.theta;
  const int nq = basis.n_quad(), nm = basis.n_modes();
  const auto n = static_cast<long>(E.n_elements());
#pragma omp parallel for schedule(static)
  for (long j = 0; j < n; ++j) {
    std::array<double, 2 * kMaxModes> qe{}, qq{};
    std::array<double, kMaxModes> qe_proj{};
    auto e = E.element(j);
    auto d = D.element(j);
    if (raman != 0.0) {
      basis.to_nodes(e, qe);
      basis.to_nodes(Q.element(j), qq);
      for (int q = 0; q < nq; ++q) qe[q] *= qq[q];
      basis.from_nodes(std::span<const double>(qe.data(), nq), std::span<double>(qe_proj.data(), nm));
    }
    for (int m = 0; m < nm; ++m)
      d[m] = params.eps_inf * e[m] + kerr * Y(j, m) + P(j, m) + raman * qe_proj[m];
  }
  return D;
}

DgField aux_y_update(const DgField& Y, const DgField& E_old, const DgField& E_new, const Basis& basis) {
  check_shapes({&Y, &E_old, &E_new});
  DgField out = Y;
  const int nq = basis.n_quad(), nm = basis.n_modes();
  const auto n = static_cast<long>(Y.n_elements());
#pragma omp parallel for schedule(static)
  for (long j = 0; j < n; ++j) {
    std::array<double, 2 * kMaxModes> e0{}, e1{}, g{};
    std::array<double, kMaxModes> inc{};
    basis.to_nodes(E_old.element(j), e0);
    basis.to_nodes(E_new.element(j), e1);
    for (int q = 0; q < nq; ++q) g[q] = 1.5 * (e1[q] * e1[q] + e0[q] * e0[q]) * (e1[q] - e0[q]);
    basis.from_nodes(std::span<const double>(g.data(), nq), std::span<double>(inc.data(), nm));
    auto y = out.element(j);
    for (int m = 0; m < nm; ++m) y[m] += inc[m];
  }
  return out;
}

double energy_density(const ModelParams& p, double hh, double e, double P, double J, double Q, double sigma) {
  double w = 0.5 * hh + 0.5 * p.eps_inf * e * e;
  if (p.omega_p != 0.0) {
    double wp2 = p.omega_p * p.omega_p;
    w += J * J / (2.0 * wp2) + p.omega0 * p.omega0 * P * P / (2.0 * wp2);
  }
  const double at = p.a * p.theta;
  if (at != 0.0) {
    if (p.omega_v != 0.0) w += at * sigma * sigma / (4.0 * p.omega_v * p.omega_v);
    w += 0.5 * at * Q * e * e + 0.25 * at * Q * Q;
  }
  w += 0.75 * p.a * (1.0 - p.theta) * e * e * e * e;
  return w;
}

void require_oscillator_frequency(const SimState& s, const ModelParams& params) {
  if (params.omega_p != 0.0) return;
  auto nonzero = [](const DgField& f) {
    for (double c : f.coeffs())
      if (c != 0.0) return true;
    return false;
  };
  if (nonzero(s.P) || nonzero(s.J)) throw InvalidArgument("omega_p = 0 with nonzero P or J: oscillator energy undefined");
}

double continuous_energy(const SimState& s, const ModelParams& params, const Mesh& mesh, const Basis& basis) {
  require_oscillator_frequency(s, params);
  const int nq = basis.n_quad();
  const auto n = static_cast<long>(mesh.size());
  std::vector<double> cell(n);
#pragma omp parallel for schedule(static)
  for (long j = 0; j < n; ++j) {
    double acc = 0.0;
    for (int q = 0; q < nq; ++q) {
      double h = basis.eval_at_node(s.H.element(j), q);
      double e = basis.eval_at_node(s.E.element(j), q);
      double P = basis.eval_at_node(s.P.element(j), q);
      double J = basis.eval_at_node(s.J.element(j), q);
      double Q = basis.eval_at_node(s.Q.element(j), q);
      double sg = basis.eval_at_node(s.sigma.element(j), q);
      acc += basis.weights()[q] * energy_density(params, h * h, e, P, J, Q, sg);
    }
    cell[j] = acc * mesh.jacobian();
  }
  double total = 0.0;
  for (double c : cell) total += c;
  return total;
}

OscillatorStep OscillatorStep::make(const ModelParams& p, double dt) {
  OscillatorStep o;
  const double al = 0.5 * dt;
  o.alpha = al;
  const double w0 = p.omega0 * p.omega0;
  const double den1 = 1.0 + al * p.inv_tau + al * al * w0;
  o.j_j = (1.0 - al * p.inv_tau - al * al * w0) / den1;
  o.j_p = -2.0 * al * w0 / den1;
  o.j_e = al * p.omega_p * p.omega_p / den1;
  const double wv = p.omega_v * p.omega_v;
  const double den2 = 1.0 + al * p.inv_tau_v + al * al * wv;
  o.s_s = (1.0 - al * p.inv_tau_v - al * al * wv) / den2;
  o.s_q = -2.0 * al * wv / den2;
  o.s_e = 2.0 * al * wv / den2;
  return o;
}

ConstitutiveKernel::ConstitutiveKernel(const Basis& basis, const ModelParams& params, double dt)
    : basis_(basis), p_(params), osc_(OscillatorStep::make(params, dt)) {}

void ConstitutiveKernel::apply(const ElementOld& old, std::span<const double> e_new, std::span<double> d_new,
                               LocalMatrix* jac, const ElementNew* aux) const {
  const Basis& b = basis_;
  const int nq = b.n_quad(), nm = b.n_modes();
  const double al = osc_.alpha;
  const double kerr = p_.a * (1.0 - p_.theta);
  const double raman = p_.a * p_.theta;

  std::array<double, 2 * kMaxModes> e0{}, e1{}, qn{};
  std::array<double, kMaxModes> ee{}, sg1{}, q1{}, j1{}, p1{}, y1{}, qe{};
  b.to_nodes(old.E, e0);
  b.to_nodes(e_new, e1);

  for (int m = 0; m < nm; ++m) {
    j1[m] = osc_.j_j * old.J[m] + osc_.j_p * old.P[m] + osc_.j_e * (old.E[m] + e_new[m]);
    p1[m] = old.P[m] + al * (old.J[m] + j1[m]);
  }

  for (int m = 0; m < nm; ++m) y1[m] = old.Y[m];
  for (int q = 0; q < nq; ++q) {
    double g = 1.5 * (e1[q] * e1[q] + e0[q] * e0[q]) * (e1[q] - e0[q]);
    for (int m = 0; m < nm; ++m) y1[m] += g * b.wphi(q, m);
  }

  if (raman != 0.0 || aux != nullptr) {
    for (int q = 0; q < nq; ++q) {
      double g = e0[q] * e1[q];
      for (int m = 0; m < nm; ++m) ee[m] += g * b.wphi(q, m);
    }
    for (int m = 0; m < nm; ++m) {
      sg1[m] = osc_.s_s * old.sigma[m] + osc_.s_q * old.Q[m] + osc_.s_e * ee[m];
      q1[m] = old.Q[m] + al * (old.sigma[m] + sg1[m]);
    }
    b.to_nodes(std::span<const double>(q1.data(), nm), qn);
    for (int q = 0; q < nq; ++q) {
      double g = qn[q] * e1[q];
      for (int m = 0; m < nm; ++m) qe[m] += g * b.wphi(q, m);
    }
  }

  for (int m = 0; m < nm; ++m) d_new[m] = p_.eps_inf * e_new[m] + kerr * y1[m] + p1[m] + raman * qe[m];

  if (aux != nullptr) {
    for (int m = 0; m < nm; ++m) {
      aux->P[m] = p1[m];
      aux->J[m] = j1[m];
      aux->Q[m] = q1[m];
      aux->sigma[m] = sg1[m];
      aux->Y[m] = y1[m];
    }
  }

  if (jac != nullptr) {
    LocalMatrix& A = *jac;
    A.setZero(nm, nm);
    const double diag = p_.eps_inf + al * osc_.j_e;
    for (int m = 0; m < nm; ++m) A(m, m) = diag;
    if (kerr != 0.0) {
      for (int q = 0; q < nq; ++q) {
        double g = kerr * 1.5 * (3.0 * e1[q] * e1[q] - 2.0 * e0[q] * e1[q] + e0[q] * e0[q]);
        for (int m = 0; m < nm; ++m) {
          double wm = g * b.wphi(q, m);
          for (int l = 0; l < nm; ++l) A(m, l) += wm * b.phi(q, l);
        }
      }
    }
    if (raman != 0.0) {
      // G_rl = pi(E phi_l)_r, dQ'_r/dE'_l = alpha s_e G_rl
      LocalMatrix G = LocalMatrix::Zero(nm, nm);
      for (int q = 0; q < nq; ++q)
        for (int r = 0; r < nm; ++r)
          for (int l = 0; l < nm; ++l) G(r, l) += b.wphi(q, r) * e0[q] * b.phi(q, l);
      const double c = al * osc_.s_e;
      for (int q = 0; q < nq; ++q) {
        for (int l = 0; l < nm; ++l) {
          double dq = 0.0;
          for (int r = 0; r < nm; ++r) dq += b.phi(q, r) * G(r, l);
          double g = raman * (qn[q] * b.phi(q, l) + e1[q] * c * dq);
          for (int m = 0; m < nm; ++m) A(m, l) += g * b.wphi(q, m);
        }
      }
    }
  }
}

}  // namespace kerrdg
