#ifndef NLT_FOURIER_HPP
#define NLT_FOURIER_HPP

#include "nlt/field.hpp"
#include "nlt/power.hpp"
#include "nlt/virtual_power.hpp"

#include <functional>

namespace nlt::fourier {

// Rigid classical heat conductor (unit mass density): q = -kappa grad theta
// and c_heat dtheta/dt = -div q + r.  The heating density is defined through
// the discrete flux divergence, so the thermal virtual balance below closes
// at round-off rather than at the truncation order.
struct Params {
  double kappa = 1.0;   // conductivity, > 0
  double c_heat = 1.0;  // specific heat, > 0

  void validate() const;
};

struct State {
  Field theta;  // rank 0, positive everywhere
  double t = 0.0;
};

// Volumetric heat supply r(x, t); an empty function means r = 0.
using Source = std::function<Field(double)>;

class Model {
 public:
  Model(Params p, Source r = {});

  Field flux(const Field& theta) const;  // q = -kappa grad theta
  // h = -div q + r with the same composed stencils the step uses.
  Field heating(const State& s) const;

  State step(const State& s, double dt) const;  // explicit RK4

  // Entropy action densities over the step (prev -> now), coldness at now:
  //   internal: (c_heat/th) dtheta/dt - kappa |grad th|^2 / th^2
  //   external: -div(q/th) + r/th
  //   extra_flux: zero (simple material)
  //   terms["classical"]: h/th + q.grad(th)/th^2
  PowerBreakdown entropy_actions(const State& prev, const State& now, double dt) const;

  // d(eta)/dt - internal entropy action with eta = c_heat ln th; equals the
  // log-concavity gap plus kappa |grad th|^2 / th^2, hence non-negative
  // exactly.
  Field second_law_residual(const State& prev, const State& now, double dt) const;

  // Thermal virtual-action triplet: heating as defined above, q1 = q, no
  // double flux; int [h w - q.grad w - r w] vanishes at round-off for every
  // test function w.
  VirtualDecomposition decomposition(const State& s) const;

  double energy(const State& s) const;   // int c_heat theta
  double entropy(const State& s) const;  // int c_heat ln theta

  // 0.5 x the RK4 stability limit of the diffusive spectrum,
  //   dt_max = 2.785 c_heat / (kappa K),  K = sum_axes 1/h^2.
  double stable_dt(const Grid& g) const;

  const Params& params() const { return p_; }
  Field source_at(const Grid& g, double t) const;

 private:
  Params p_;
  Source r_;
  mutable double guard_scale_ = 0.0;
};

}  // namespace nlt::fourier

#endif
