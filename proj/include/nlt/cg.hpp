#ifndef NLT_CG_HPP
#define NLT_CG_HPP

#include "nlt/field.hpp"

#include <cmath>
#include <functional>
#include <stdexcept>
#include <string>

namespace nlt {

// Matrix-free conjugate gradient for symmetric positive-definite operators
// acting on fields.  Iterates until ||b - A x|| <= rel_tol ||b|| (plain
// Euclidean norm over all samples); throws if the budget of max_iter
// iterations (default 10x the number of unknowns) is exhausted or the
// operator reveals itself as not positive-definite.
inline Field conjugate_gradient(const std::function<Field(const Field&)>& apply,
                                const Field& b, const Field& x0,
                                double rel_tol = 1e-10, long max_iter = 0) {
  if (!b.same_shape(x0)) throw std::invalid_argument("cg: rhs and guess must share a shape");
  auto dot = [](const Field& u, const Field& v) {
    double s = 0.0;
    for (std::size_t i = 0; i < u.size(); ++i) s += u.data()[i] * v.data()[i];
    return s;
  };
  const double bnorm = std::sqrt(dot(b, b));
  if (bnorm == 0.0) return Field(b.grid(), b.rank());
  if (max_iter <= 0) max_iter = 10 * long(b.size());

  Field x = x0;
  Field r = b - apply(x);
  Field p = r;
  double rs = dot(r, r);
  for (long it = 0; it < max_iter; ++it) {
    if (std::sqrt(rs) <= rel_tol * bnorm) return x;
    const Field ap = apply(p);
    const double pap = dot(p, ap);
    if (!(pap > 0.0)) throw std::runtime_error("cg: operator is not positive-definite");
    const double alpha = rs / pap;
    x.axpy(alpha, p);
    r.axpy(-alpha, ap);
    const double rs_new = dot(r, r);
    p *= rs_new / rs;
    p += r;
    rs = rs_new;
  }
  if (std::sqrt(rs) <= rel_tol * bnorm) return x;
  throw std::runtime_error("cg: no convergence within " + std::to_string(max_iter) +
                           " iterations");
}

}  // namespace nlt

#endif
