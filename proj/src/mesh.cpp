#include "kerrdg/mesh.hpp"

#include <algorithm>
#include <cmath>

#include "kerrdg/error.hpp"

namespace kerrdg {

Mesh::Mesh(double x_left, double x_right, std::size_t n_elements)
    : xl_(x_left), xr_(x_right), n_(n_elements) {
  if (n_elements == 0) throw InvalidArgument("mesh needs at least one element");
  if (!(x_right > x_left) || !std::isfinite(x_left) || !std::isfinite(x_right))
    throw InvalidArgument("mesh interval must be finite with x_right > x_left");
  h_ = (xr_ - xl_) / static_cast<double>(n_);
}

double Mesh::edge(std::size_t i) const {
  if (i == n_) return xr_;
  return xl_ + h_ * static_cast<double>(i);
}

double Mesh::center(std::size_t j) const { return xl_ + h_ * (static_cast<double>(j) + 0.5); }

double Mesh::to_physical(std::size_t j, double xi) const { return center(j) + 0.5 * h_ * xi; }

std::pair<std::size_t, double> Mesh::locate(double x) const {
  if (x < xl_ || x > xr_) throw InvalidArgument("point outside mesh");
  double s = (x - xl_) / h_;
  auto j = static_cast<std::size_t>(std::floor(s));
  j = std::min(j, n_ - 1);
  double xi = 2.0 * (x - center(j)) / h_;
  return {j, std::clamp(xi, -1.0, 1.0)};
}

}  // namespace kerrdg
