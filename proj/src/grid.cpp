#include "nlt/grid.hpp"

namespace nlt {

namespace {
void check(int n, double length) {
  if (n < 8) throw std::invalid_argument("Grid: need at least 8 nodes per axis");
  if (!(length > 0.0)) throw std::invalid_argument("Grid: length must be positive");
}
}  // namespace

Grid::Grid(int n, double length) : dims_(1), n_{n, 1}, len_{length, 1.0} {
  check(n, length);
}

Grid::Grid(int nx, int ny, double lx, double ly) : dims_(2), n_{nx, ny}, len_{lx, ly} {
  check(nx, lx);
  check(ny, ly);
}

double Grid::cell_volume() const {
  double v = spacing(0);
  if (dims_ == 2) v *= spacing(1);
  return v;
}

double Grid::coord(int axis, std::size_t node) const {
  check_axis(axis);
  const std::size_t ix = node % std::size_t(n_[0]);
  const std::size_t iy = node / std::size_t(n_[0]);
  return (axis == 0 ? double(ix) : double(iy)) * spacing(axis);
}

}  // namespace nlt
