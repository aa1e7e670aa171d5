#ifndef NLT_EM_HPP
#define NLT_EM_HPP

#include <optional>

#include "nlt/field.hpp"
#include "nlt/power.hpp"

namespace nlt::em {

// Planar dielectric with a gradient-regularized polarization law.  The
// in-plane field e = (e_x, e_y) and the out-of-plane field h evolve by
//   d(L e)/dt = curl_v h,   mu dh/dt = -curl_s e,
// where the displacement operator
//   L e = eps0 e - eps1 div(grad e) - eps2 grad(div e)
// is built from the composed (wide) stencils so that <e, L e> equals the
// quadratic energy eps0|e|^2 + eps1|grad e|^2 + eps2(div e)^2 summed over the
// grid exactly.  L is symmetric positive definite; each stage of a step
// inverts it by conjugate gradients, warm-started from the previous solve.
struct Params {
  double mu = 1.0;
  double eps0 = 1.0;
  double eps1 = 0.0;
  double eps2 = 0.0;
  void validate() const;
};

struct State {
  Field e;  // rank 1, in-plane
  Field h;  // rank 0, out-of-plane
  double t = 0.0;
};

// Planar curls, exact discrete adjoints of one another:
//   curl_v h = (d_y h, -d_x h),  curl_s e = d_x e_y - d_y e_x,
//   sum e . curl_v h = sum (curl_s e) h.
Field curl_vec(const Field& h);
Field curl_scal(const Field& e);
// In-plane energy flux e x h = (e_y h, -e_x h).
Field poynting(const Field& e, const Field& h);

class Model {
 public:
  explicit Model(Params p);

  // Displacement law L applied to a rank-1 field.
  Field displacement(const Field& e) const;
  // Solves L x = rhs (closed form when eps1 = eps2 = 0, CG otherwise).
  Field invert_displacement(const Field& rhs) const;

  // One RK4 step; throws std::runtime_error once the amplitude grows past
  // 1e6 x the scale first seen.
  State step(const State& s, double dt) const;

  // 0.5 * int [ mu h^2 + e . L e ]; conserved by the semi-discrete flow.
  double energy(const State& s) const;

  // internal:   rate of the energy density
  //             (mu h^2 + eps0|e|^2 + eps1|grad e|^2 + eps2(div e)^2) / 2
  // extra_flux: N = -eps1 (grad de/dt) e - eps2 (div de/dt) e, midpoint e
  // external:   -div(e x h) at the midpoint
  // terms["classical"]: dD/dt . e + dB/dt h with midpoint fields.  Its volume
  //   integral telescopes to the same energy difference quotient as the
  //   internal form at round-off, while the densities differ pointwise by
  //   div N + O(h^2).
  PowerBreakdown powers(const State& prev, const State& now, double dt) const;

  // 0.5 x the RK4 stability limit of the transverse wave spectrum,
  //   omega_max = sqrt(K / (mu (eps0 + eps1 K))),  K = sum_axes 1/h^2.
  double stable_dt(const Grid& g) const;

  const Params& params() const { return p_; }

 private:
  Params p_;
  mutable std::optional<Field> warm_;  // last CG solution, reused as the start
  mutable double guard_scale_ = 0.0;
};

}  // namespace nlt::em

#endif
