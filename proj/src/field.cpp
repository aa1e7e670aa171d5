#include "nlt/field.hpp"

namespace nlt {

namespace {
int pow_int(int base, int exp) {
  int r = 1;
  for (int i = 0; i < exp; ++i) r *= base;
  return r;
}

void check_match(const Field& a, const Field& b) {
  if (!a.same_shape(b)) throw std::invalid_argument("Field: shape mismatch");
}
}  // namespace

Field::Field(const Grid& g, int rank) : grid_(g), rank_(rank) {
  if (rank < 0 || rank > 3) throw std::invalid_argument("Field: rank must be 0..3");
  comps_ = pow_int(g.dims(), rank);
  data_.assign(std::size_t(comps_) * g.nodes(), 0.0);
}

Field& Field::operator+=(const Field& o) {
  check_match(*this, o);
  for (std::size_t i = 0; i < data_.size(); ++i) data_[i] += o.data_[i];
  return *this;
}

Field& Field::operator-=(const Field& o) {
  check_match(*this, o);
  for (std::size_t i = 0; i < data_.size(); ++i) data_[i] -= o.data_[i];
  return *this;
}

Field& Field::operator*=(double s) {
  for (double& v : data_) v *= s;
  return *this;
}

Field& Field::axpy(double a, const Field& x) {
  check_match(*this, x);
  for (std::size_t i = 0; i < data_.size(); ++i) data_[i] += a * x.data_[i];
  return *this;
}

}  // namespace nlt
