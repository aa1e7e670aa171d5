#ifndef NLT_FIELD_HPP
#define NLT_FIELD_HPP

#include "nlt/grid.hpp"

#include <vector>

namespace nlt {

// Nodal tensor field of rank 0..3.  A rank-r field carries dims^r components
// per node; the component multi-index (i1..ir) flattens to
// c = ((i1*d + i2)*d + ...) with d = grid dims.  Samples of one component are
// stored contiguously (component-major), so comp(c) is a plain array over
// nodes in x-fastest order.
class Field {
public:
  Field(const Grid& g, int rank);
  static Field zeros(const Grid& g, int rank) { return Field(g, rank); }

  const Grid& grid() const { return grid_; }
  int rank() const { return rank_; }
  int comps() const { return comps_; }
  std::size_t nodes() const { return grid_.nodes(); }
  std::size_t size() const { return data_.size(); }

  double* comp(int c) { return data_.data() + std::size_t(c) * nodes(); }
  const double* comp(int c) const { return data_.data() + std::size_t(c) * nodes(); }
  double& at(int c, std::size_t node) { return data_[std::size_t(c) * nodes() + node]; }
  double at(int c, std::size_t node) const { return data_[std::size_t(c) * nodes() + node]; }

  std::vector<double>& data() { return data_; }
  const std::vector<double>& data() const { return data_; }

  bool same_shape(const Field& o) const { return rank_ == o.rank_ && grid_ == o.grid_; }

  Field& operator+=(const Field& o);
  Field& operator-=(const Field& o);
  Field& operator*=(double s);
  Field& axpy(double a, const Field& x);  // *this += a*x

  friend Field operator+(Field a, const Field& b) { return a += b; }
  friend Field operator-(Field a, const Field& b) { return a -= b; }
  friend Field operator*(Field a, double s) { return a *= s; }
  friend Field operator*(double s, Field a) { return a *= s; }

private:
  Grid grid_;
  int rank_;
  int comps_;
  std::vector<double> data_;
};

}  // namespace nlt

#endif
