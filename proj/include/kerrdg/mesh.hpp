#ifndef KERRDG_MESH_HPP
#define KERRDG_MESH_HPP

#include <cstddef>
#include <utility>

namespace kerrdg {

// Uniform partition of [x_left, x_right] into cells I_j = [x_{j-1/2}, x_{j+1/2}].
class Mesh {
 public:
  Mesh(double x_left, double x_right, std::size_t n_elements);

  std::size_t size() const { return n_; }
  double x_left() const { return xl_; }
  double x_right() const { return xr_; }
  double length() const { return xr_ - xl_; }
  double h() const { return h_; }
  double jacobian() const { return 0.5 * h_; }

  double edge(std::size_t i) const;  // i = 0..N
  double center(std::size_t j) const;
  double to_physical(std::size_t j, double xi) const;

  // Element index and reference coordinate of x; right end maps into the last cell.
  std::pair<std::size_t, double> locate(double x) const;

 private:
  double xl_, xr_, h_;
  std::size_t n_;
};

}  // namespace kerrdg

#endif
