#ifndef NLT_OPS_HPP
#define NLT_OPS_HPP

#include "nlt/field.hpp"

namespace nlt {

// All derivatives are second-order central differences on the periodic grid.
// grad prepends the derivative axis as the FIRST tensor index; div contracts
// the first index against the derivative axis.  With this pairing the
// discrete summation-by-parts identity sum(u * D v) = -sum(D u * v) holds
// exactly, and volume_integral(div F) telescopes to zero at round-off.

Field grad(const Field& f);       // rank r<=2 -> r+1
Field div(const Field& f);        // rank r>=1 -> r-1
Field laplacian(const Field& f);  // compact 3-point-per-axis stencil, any rank
Field grad2(const Field& f);      // grad(grad(f)), rank r<=1 -> r+2
Field biharmonic(const Field& f); // laplacian(laplacian(f)), rank 0

double volume_integral(const Field& f);  // rank 0; cell_volume * sum of samples

// Pointwise full contraction of equal-rank fields -> rank 0.
Field inner(const Field& a, const Field& b);
// Contract the last m indices of a (rank ra >= m) with all m indices of b.
Field contract_last(const Field& a, const Field& b, int m);
// Pointwise broadcast products with a scalar field.
Field multiply(const Field& s, const Field& f);  // s rank 0
Field divide(const Field& f, const Field& s);    // s rank 0
// Pointwise map of a scalar field.
template <class F>
Field map_scalar(const Field& f, F fn) {
  if (f.rank() != 0) throw std::invalid_argument("map_scalar: rank-0 field required");
  Field out(f.grid(), 0);
  for (std::size_t i = 0; i < f.size(); ++i) out.data()[i] = fn(f.data()[i]);
  return out;
}

// Norms and distances.
double max_abs(const Field& f);
double min_value(const Field& f);  // rank 0
double l1_norm(const Field& f);    // cell_volume * sum |samples| over all components
// Relative sup distance used for cycle closure: max|a-b| / max(sup|a|, sup|b|, floor).
double sup_distance_rel(const Field& a, const Field& b, double floor = 1e-300);

// Cyclic index shift (translation by whole cells); used by equivariance tests.
Field shifted(const Field& f, int off_x, int off_y = 0);

// Residual field of the second-grade product-rule identity
//   T3 . grad(grad v) = div(T3 grad v) - (div T3) . grad v
// evaluated with the library stencils; max-norm converges at second order.
Field second_grade_identity_residual(const Field& t3, const Field& v);

// Global residual of the heat-flux product-rule identity
//   int q.(lap q + 2 grad div q) dx = -int (|grad q|^2 + 2|div q|^2) dx
// (the divergence term integrates to zero exactly); converges at second order.
double gk_identity_residual(const Field& q);

}  // namespace nlt

#endif
