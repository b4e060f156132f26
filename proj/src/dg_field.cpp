#include "kerrdg/dg_field.hpp"

#include <algorithm>
#include <cmath>

#include "kerrdg/error.hpp"

namespace kerrdg {

double DgField::eval(const Mesh& mesh, const Basis& basis, double x) const {
  auto [j, xi] = mesh.locate(x);
  return basis.eval(element(j), xi);
}

DgField& DgField::operator+=(const DgField& o) {
  if (!same_shape(o)) throw InvalidArgument("field shape mismatch");
  for (std::size_t i = 0; i < c_.size(); ++i) c_[i] += o.c_[i];
  return *this;
}

DgField& DgField::operator-=(const DgField& o) {
  if (!same_shape(o)) throw InvalidArgument("field shape mismatch");
  for (std::size_t i = 0; i < c_.size(); ++i) c_[i] -= o.c_[i];
  return *this;
}

DgField& DgField::operator*=(double s) {
  for (auto& v : c_) v *= s;
  return *this;
}

void DgField::axpy(double a, const DgField& x) {
  if (!same_shape(x)) throw InvalidArgument("field shape mismatch");
  for (std::size_t i = 0; i < c_.size(); ++i) c_[i] += a * x.c_[i];
}

DgField operator+(DgField a, const DgField& b) { return a += b; }
DgField operator-(DgField a, const DgField& b) { return a -= b; }
DgField operator*(double s, DgField a) { return a *= s; }

double max_abs_diff(const DgField& a, const DgField& b) {
  if (!a.same_shape(b)) throw InvalidArgument("field shape mismatch");
  double m = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a.data()[i] - b.data()[i]));
  return m;
}

DgField project_l2(const ScalarFunction& f, const Mesh& mesh, const Basis& basis) {
  DgField out(mesh.size(), basis.n_modes());
  const int nq = basis.n_quad();
  const auto n = static_cast<long>(mesh.size());
#pragma omp parallel
  {
    std::vector<double> vals(nq);
#pragma omp for schedule(static)
    for (long j = 0; j < n; ++j) {
      for (int q = 0; q < nq; ++q) vals[q] = f(mesh.to_physical(j, basis.nodes()[q]));
      basis.from_nodes(vals, out.element(j));
    }
  }
  return out;
}

DgField project_gauss_radau(const ScalarFunction& f, const Mesh& mesh, const Basis& basis, RadauSide side) {
  DgField out = project_l2(f, mesh, basis);
  const int k = basis.degree();
  const auto n = static_cast<long>(mesh.size());
#pragma omp parallel for schedule(static)
  for (long j = 0; j < n; ++j) {
    auto c = out.element(j);
    const bool minus = side == RadauSide::Minus;
    double target = f(minus ? mesh.edge(j + 1) : mesh.edge(j));
    double partial = 0.0;
    for (int m = 0; m < k; ++m) partial += c[m] * (minus ? basis.right(m) : basis.left(m));
    c[k] = (target - partial) / (minus ? basis.right(k) : basis.left(k));
  }
  return out;
}

DgField project_pointwise(const DgField& u, const Basis& basis, const std::function<double(double)>& g) {
  DgField out = DgField::zeros_like(u);
  const int nq = basis.n_quad();
  const auto n = static_cast<long>(u.n_elements());
#pragma omp parallel
  {
    std::vector<double> vals(nq);
#pragma omp for schedule(static)
    for (long j = 0; j < n; ++j) {
      basis.to_nodes(u.element(j), vals);
      for (auto& v : vals) v = g(v);
      basis.from_nodes(vals, out.element(j));
    }
  }
  return out;
}

}  // namespace kerrdg
