#include "kerrdg/newton.hpp"

#include <algorithm>
#include <cmath>

namespace kerrdg {

void StepReport::merge(const StepReport& o) {
  newton_iters += o.newton_iters;
  linear_iters += o.linear_iters;
  local_newton_max_iters = std::max(local_newton_max_iters, o.local_newton_max_iters);
  final_residual = std::max(final_residual, o.final_residual);
  local_residual = std::max(local_residual, o.local_residual);
  converged = converged && o.converged;
  used_global_solve = used_global_solve || o.used_global_solve;
}

double norm2(std::span<const double> v) {
  double s = 0.0;
  for (double x : v) s += x * x;
  return std::sqrt(s);
}

KrylovResult gmres(const LinearOperator& A, std::span<const double> b, std::span<double> x, int restart,
                   double tol, int max_iters, const Preconditioner* M) {
  const std::size_t n = b.size();
  const int m = std::max(1, restart);
  KrylovResult res;
  std::vector<std::vector<double>> V(m + 1, std::vector<double>(n));
  std::vector<std::vector<double>> Z(M ? m : 0, std::vector<double>(n));
  std::vector<double> H((m + 1) * m), cs(m), sn(m), g(m + 1), w(n), tmp(n);
  auto h = [&](int i, int j) -> double& { return H[i * m + j]; };

  while (true) {
    A(x, w);
    for (std::size_t i = 0; i < n; ++i) V[0][i] = b[i] - w[i];
    double beta = norm2(V[0]);
    res.residual = beta;
    if (beta <= tol) {
      res.converged = true;
      return res;
    }
    if (res.iterations >= max_iters || !std::isfinite(beta)) return res;
    for (auto& v : V[0]) v /= beta;
    std::fill(g.begin(), g.end(), 0.0);
    g[0] = beta;
    int k = 0;
    for (; k < m && res.iterations < max_iters; ++k) {
      ++res.iterations;
      if (M) {
        (*M)(V[k], Z[k]);
        A(Z[k], w);
      } else {
        A(V[k], w);
      }
      for (int i = 0; i <= k; ++i) {
        double d = 0.0;
        for (std::size_t l = 0; l < n; ++l) d += w[l] * V[i][l];
        h(i, k) = d;
        for (std::size_t l = 0; l < n; ++l) w[l] -= d * V[i][l];
      }
      double hn = norm2(w);
      h(k + 1, k) = hn;
      if (hn > 0.0)
        for (std::size_t l = 0; l < n; ++l) V[k + 1][l] = w[l] / hn;
      for (int i = 0; i < k; ++i) {
        double t = cs[i] * h(i, k) + sn[i] * h(i + 1, k);
        h(i + 1, k) = -sn[i] * h(i, k) + cs[i] * h(i + 1, k);
        h(i, k) = t;
      }
      double r = std::hypot(h(k, k), h(k + 1, k));
      cs[k] = r > 0.0 ? h(k, k) / r : 1.0;
      sn[k] = r > 0.0 ? h(k + 1, k) / r : 0.0;
      h(k, k) = r;
      h(k + 1, k) = 0.0;
      g[k + 1] = -sn[k] * g[k];
      g[k] = cs[k] * g[k];
      if (std::abs(g[k + 1]) <= tol || hn == 0.0) {
        ++k;
        break;
      }
    }
    // back substitution on the k x k triangle
    std::vector<double> y(k);
    for (int i = k - 1; i >= 0; --i) {
      double s = g[i];
      for (int j = i + 1; j < k; ++j) s -= h(i, j) * y[j];
      y[i] = s / h(i, i);
    }
    std::fill(tmp.begin(), tmp.end(), 0.0);
    for (int i = 0; i < k; ++i) {
      const auto& basis_vec = M ? Z[i] : V[i];
      for (std::size_t l = 0; l < n; ++l) tmp[l] += y[i] * basis_vec[l];
    }
    for (std::size_t l = 0; l < n; ++l) x[l] += tmp[l];
  }
}

StepReport newton_krylov(const VectorFunction& F, std::vector<double>& u, const NewtonConfig& cfg,
                         const PreconditionerFactory* precond) {
  const std::size_t n = u.size();
  StepReport rep;
  rep.used_global_solve = true;
  std::vector<double> r(n), rt(n), ut(n), d(n), rhs(n), up(n), fp(n);
  F(u, r);
  double norm = norm2(r);
  while (norm > cfg.abs_tol && rep.newton_iters < cfg.max_iters && std::isfinite(norm)) {
    Preconditioner M;
    if (precond && cfg.use_preconditioner) M = (*precond)(u);
    const double unorm = norm2(u);
    LinearOperator Jv = [&](std::span<const double> v, std::span<double> out) {
      double vn = norm2(v);
      if (vn == 0.0) {
        std::fill(out.begin(), out.end(), 0.0);
        return;
      }
      double eps = cfg.fd_epsilon * (1.0 + unorm) / vn;
      for (std::size_t i = 0; i < n; ++i) up[i] = u[i] + eps * v[i];
      F(up, fp);
      for (std::size_t i = 0; i < n; ++i) out[i] = (fp[i] - r[i]) / eps;
    };
    for (std::size_t i = 0; i < n; ++i) rhs[i] = -r[i];
    std::fill(d.begin(), d.end(), 0.0);
    double lin_tol = std::max(cfg.gmres_forcing * norm, 0.1 * cfg.abs_tol);
    KrylovResult kr = gmres(Jv, rhs, d, cfg.gmres_restart, lin_tol, cfg.gmres_max_iters, M ? &M : nullptr);
    rep.linear_iters += kr.iterations;
    // backtracking on the residual norm
    double lambda = 1.0, trial = norm;
    for (int ls = 0; ls < 8; ++ls) {
      for (std::size_t i = 0; i < n; ++i) ut[i] = u[i] + lambda * d[i];
      F(ut, rt);
      trial = norm2(rt);
      if (std::isfinite(trial) && trial < (1.0 - 1e-4 * lambda) * norm) break;
      lambda *= 0.5;
    }
    ++rep.newton_iters;
    if (!(trial < norm)) {
      // no decrease: accept only if already at the round-off floor
      if (trial <= norm) {
        u.swap(ut);
        r.swap(rt);
        norm = trial;
      }
      break;
    }
    u.swap(ut);
    r.swap(rt);
    norm = trial;
  }
  rep.final_residual = norm;
  rep.converged = std::isfinite(norm) && norm <= cfg.abs_tol;
  return rep;
}

}  // namespace kerrdg
