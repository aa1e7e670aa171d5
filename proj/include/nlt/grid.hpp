#ifndef NLT_GRID_HPP
#define NLT_GRID_HPP

#include <array>
#include <cstddef>
#include <stdexcept>

namespace nlt {

// Uniform periodic grid in one or two dimensions.  Nodes sit at x_i = i*h
// with h = length/n; the point at x = length is identified with x = 0.
class Grid {
public:
  Grid(int n, double length);                  // 1D
  Grid(int nx, int ny, double lx, double ly);  // 2D

  int dims() const { return dims_; }
  int n(int axis) const { return n_[check_axis(axis)]; }
  double length(int axis) const { return len_[check_axis(axis)]; }
  double spacing(int axis) const { return len_[check_axis(axis)] / n_[axis]; }
  std::size_t nodes() const { return std::size_t(n_[0]) * std::size_t(n_[1]); }
  double cell_volume() const;
  double coord(int axis, std::size_t node) const;

  std::size_t index(int ix, int iy = 0) const {
    return std::size_t(iy) * std::size_t(n_[0]) + std::size_t(ix);
  }

  bool operator==(const Grid& o) const {
    return dims_ == o.dims_ && n_ == o.n_ && len_ == o.len_;
  }
  bool operator!=(const Grid& o) const { return !(*this == o); }

private:
  int check_axis(int axis) const {
    if (axis < 0 || axis >= dims_) throw std::invalid_argument("Grid: axis out of range");
    return axis;
  }

  int dims_;
  std::array<int, 2> n_;
  std::array<double, 2> len_;
};

}  // namespace nlt

#endif
