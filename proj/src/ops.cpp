#include "nlt/ops.hpp"

#include <algorithm>
#include <cmath>

namespace nlt {

namespace {

// out = central difference of one component plane along axis.
void diff_axis(const Grid& g, const double* f, double* out, int axis) {
  const int nx = g.n(0);
  const int ny = g.dims() == 2 ? g.n(1) : 1;
  const double c = 1.0 / (2.0 * g.spacing(axis));
  if (axis == 0) {
    for (int iy = 0; iy < ny; ++iy) {
      const std::size_t row = std::size_t(iy) * nx;
      for (int ix = 0; ix < nx; ++ix) {
        const int xp = ix + 1 == nx ? 0 : ix + 1;
        const int xm = ix == 0 ? nx - 1 : ix - 1;
        out[row + ix] = (f[row + xp] - f[row + xm]) * c;
      }
    }
  } else {
    for (int iy = 0; iy < ny; ++iy) {
      const std::size_t row = std::size_t(iy) * nx;
      const std::size_t rp = std::size_t(iy + 1 == ny ? 0 : iy + 1) * nx;
      const std::size_t rm = std::size_t(iy == 0 ? ny - 1 : iy - 1) * nx;
      for (int ix = 0; ix < nx; ++ix) out[row + ix] = (f[rp + ix] - f[rm + ix]) * c;
    }
  }
}

// out += compact second difference of one component plane along axis.
void second_diff_axis_acc(const Grid& g, const double* f, double* out, int axis) {
  const int nx = g.n(0);
  const int ny = g.dims() == 2 ? g.n(1) : 1;
  const double h = g.spacing(axis);
  const double c = 1.0 / (h * h);
  if (axis == 0) {
    for (int iy = 0; iy < ny; ++iy) {
      const std::size_t row = std::size_t(iy) * nx;
      for (int ix = 0; ix < nx; ++ix) {
        const int xp = ix + 1 == nx ? 0 : ix + 1;
        const int xm = ix == 0 ? nx - 1 : ix - 1;
        out[row + ix] += (f[row + xp] - 2.0 * f[row + ix] + f[row + xm]) * c;
      }
    }
  } else {
    for (int iy = 0; iy < ny; ++iy) {
      const std::size_t row = std::size_t(iy) * nx;
      const std::size_t rp = std::size_t(iy + 1 == ny ? 0 : iy + 1) * nx;
      const std::size_t rm = std::size_t(iy == 0 ? ny - 1 : iy - 1) * nx;
      for (int ix = 0; ix < nx; ++ix)
        out[row + ix] += (f[rp + ix] - 2.0 * f[row + ix] + f[rm + ix]) * c;
    }
  }
}

int pow_int(int base, int exp) {
  int r = 1;
  for (int i = 0; i < exp; ++i) r *= base;
  return r;
}

}  // namespace

Field grad(const Field& f) {
  if (f.rank() > 2) throw std::invalid_argument("grad: rank must be <= 2");
  const Grid& g = f.grid();
  Field out(g, f.rank() + 1);
  const int m = f.comps();
  for (int a = 0; a < g.dims(); ++a)
    for (int c = 0; c < m; ++c) diff_axis(g, f.comp(c), out.comp(a * m + c), a);
  return out;
}

Field div(const Field& f) {
  if (f.rank() < 1) throw std::invalid_argument("div: rank must be >= 1");
  const Grid& g = f.grid();
  Field out(g, f.rank() - 1);
  const int m = out.comps();
  std::vector<double> tmp(g.nodes());
  for (int a = 0; a < g.dims(); ++a) {
    for (int c = 0; c < m; ++c) {
      diff_axis(g, f.comp(a * m + c), tmp.data(), a);
      double* o = out.comp(c);
      for (std::size_t i = 0; i < tmp.size(); ++i) o[i] += tmp[i];
    }
  }
  return out;
}

Field laplacian(const Field& f) {
  const Grid& g = f.grid();
  Field out(g, f.rank());
  for (int c = 0; c < f.comps(); ++c)
    for (int a = 0; a < g.dims(); ++a) second_diff_axis_acc(g, f.comp(c), out.comp(c), a);
  return out;
}

Field grad2(const Field& f) {
  if (f.rank() > 1) throw std::invalid_argument("grad2: rank must be <= 1");
  return grad(grad(f));
}

Field biharmonic(const Field& f) {
  if (f.rank() != 0) throw std::invalid_argument("biharmonic: rank-0 field required");
  return laplacian(laplacian(f));
}

double volume_integral(const Field& f) {
  if (f.rank() != 0) throw std::invalid_argument("volume_integral: rank-0 field required");
  double s = 0.0;
  for (double v : f.data()) s += v;
  return s * f.grid().cell_volume();
}

Field contract_last(const Field& a, const Field& b, int m) {
  if (b.rank() != m) throw std::invalid_argument("contract_last: rank(b) must equal m");
  if (a.rank() < m) throw std::invalid_argument("contract_last: rank(a) must be >= m");
  if (a.grid() != b.grid()) throw std::invalid_argument("contract_last: grid mismatch");
  const Grid& g = a.grid();
  const int dm = pow_int(g.dims(), m);
  Field out(g, a.rank() - m);
  const std::size_t nn = g.nodes();
  for (int p = 0; p < out.comps(); ++p) {
    double* o = out.comp(p);
    for (int j = 0; j < dm; ++j) {
      const double* av = a.comp(p * dm + j);
      const double* bv = b.comp(j);
      for (std::size_t i = 0; i < nn; ++i) o[i] += av[i] * bv[i];
    }
  }
  return out;
}

Field inner(const Field& a, const Field& b) {
  if (a.rank() != b.rank()) throw std::invalid_argument("inner: rank mismatch");
  return contract_last(a, b, b.rank());
}

Field multiply(const Field& s, const Field& f) {
  if (s.rank() != 0) throw std::invalid_argument("multiply: scalar field required");
  if (s.grid() != f.grid()) throw std::invalid_argument("multiply: grid mismatch");
  Field out(f.grid(), f.rank());
  const std::size_t nn = f.nodes();
  for (int c = 0; c < f.comps(); ++c) {
    const double* fv = f.comp(c);
    const double* sv = s.comp(0);
    double* o = out.comp(c);
    for (std::size_t i = 0; i < nn; ++i) o[i] = sv[i] * fv[i];
  }
  return out;
}

Field divide(const Field& f, const Field& s) {
  if (s.rank() != 0) throw std::invalid_argument("divide: scalar field required");
  if (s.grid() != f.grid()) throw std::invalid_argument("divide: grid mismatch");
  Field out(f.grid(), f.rank());
  const std::size_t nn = f.nodes();
  for (int c = 0; c < f.comps(); ++c) {
    const double* fv = f.comp(c);
    const double* sv = s.comp(0);
    double* o = out.comp(c);
    for (std::size_t i = 0; i < nn; ++i) o[i] = fv[i] / sv[i];
  }
  return out;
}

double max_abs(const Field& f) {
  double m = 0.0;
  for (double v : f.data()) m = std::max(m, std::abs(v));
  return m;
}

double min_value(const Field& f) {
  if (f.rank() != 0) throw std::invalid_argument("min_value: rank-0 field required");
  double m = f.data()[0];
  for (double v : f.data()) m = std::min(m, v);
  return m;
}

double l1_norm(const Field& f) {
  double s = 0.0;
  for (double v : f.data()) s += std::abs(v);
  return s * f.grid().cell_volume();
}

double sup_distance_rel(const Field& a, const Field& b, double floor) {
  if (!a.same_shape(b)) throw std::invalid_argument("sup_distance_rel: shape mismatch");
  double diff = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i)
    diff = std::max(diff, std::abs(a.data()[i] - b.data()[i]));
  const double scale = std::max({max_abs(a), max_abs(b), floor});
  return diff / scale;
}

Field shifted(const Field& f, int off_x, int off_y) {
  const Grid& g = f.grid();
  const int nx = g.n(0);
  const int ny = g.dims() == 2 ? g.n(1) : 1;
  auto wrap = [](int i, int n) { return ((i % n) + n) % n; };
  Field out(g, f.rank());
  for (int c = 0; c < f.comps(); ++c) {
    const double* fv = f.comp(c);
    double* o = out.comp(c);
    for (int iy = 0; iy < ny; ++iy)
      for (int ix = 0; ix < nx; ++ix)
        o[g.index(wrap(ix + off_x, nx), wrap(iy + off_y, ny))] = fv[g.index(ix, iy)];
  }
  return out;
}

Field second_grade_identity_residual(const Field& t3, const Field& v) {
  if (t3.rank() != 3 || v.rank() != 1)
    throw std::invalid_argument("second_grade_identity_residual: need rank-3 and rank-1 fields");
  const Field gv = grad(v);
  Field lhs = inner(t3, grad(gv));                        // T3 . grad(grad v)
  Field rhs = div(contract_last(t3, gv, 2));              // div(T3 grad v)
  rhs -= inner(div(t3), gv);                              // -(div T3) . grad v
  return lhs - rhs;
}

double gk_identity_residual(const Field& q) {
  if (q.rank() != 1) throw std::invalid_argument("gk_identity_residual: rank-1 field required");
  const Field gq = grad(q);
  const Field dq = div(q);
  Field lhs = laplacian(q);
  lhs.axpy(2.0, grad(dq));
  const double left = volume_integral(inner(q, lhs));
  const double w = volume_integral(inner(gq, gq)) + 2.0 * volume_integral(inner(dq, dq));
  return std::abs(left + w);
}

}  // namespace nlt
