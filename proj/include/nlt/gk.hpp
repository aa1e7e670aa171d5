#ifndef NLT_GK_HPP
#define NLT_GK_HPP

#include "nlt/field.hpp"
#include "nlt/power.hpp"
#include "nlt/virtual_power.hpp"

#include <functional>
#include <optional>

namespace nlt::gk {

// Hyperbolic heat conductor with relaxing flux and flux-gradient terms
// (unit mass density).  Internal energy is e = c_heat * theta; the flux
// equation carries the temperature-dependent coefficient c0 / theta^2.
struct Params {
  double tau_r = 1.0;    // flux relaxation time, > 0
  double tau_n = 0.0;    // flux-gradient coefficient; dissipative only for > 0
  double c0 = 1.0;       // flux-temperature coupling, > 0
  double c_heat = 1.0;   // specific heat, > 0

  void validate() const;
};

struct State {
  Field theta;  // rank 0, positive everywhere
  Field q;      // rank 1
  double t = 0.0;
};

// Volumetric heat supply r(x, t); an empty function means r = 0.
using Source = std::function<Field(double)>;

struct Rhs {
  Field dtheta;
  Field dq;
};

// dq/dt = -q/tau_r - (c0/theta^2) grad theta + tau_n (lap q + 2 grad div q)
// dtheta/dt = (-div q + r) / c_heat
Rhs rhs(const State& s, const Params& p, const Field& r);

class Model {
public:
  Model(Params p, Source r = {});

  State step(const State& s, double dt) const;  // explicit RK4

  // Entropy action densities over the step (prev -> now):
  //   internal: (1/th) de/dt - (1/2c0) d(q^2)/dt - q^2/(c0 tau_r)
  //             - (tau_n/c0)(|grad q|^2 + 2|div q|^2)
  //   external: -div(q/th) + r/th - div(extra_flux)
  //   extra_flux: (tau_n/c0)[(grad q) q + 2 (div q) q]
  //   terms["classical"]: h/th + q.grad(th)/th^2  (simple-material form)
  PowerBreakdown entropy_actions(const State& prev, const State& now, double dt) const;

  // d(eta)/dt - internal entropy action with eta = c_heat ln th - q^2/(2 c0);
  // non-negative up to round-off for compliant parameters because 1/theta is
  // evaluated at the new state (log concavity) and the q^2 terms cancel
  // exactly.
  Field second_law_residual(const State& prev, const State& now, double dt) const;

  // Thermal virtual-action decomposition: q1 = q, q2 = 0, rho h from the
  // backward-difference energy rate.
  VirtualDecomposition decomposition(const State& prev, const State& now, double dt) const;

  double energy(const State& s) const;   // int c_heat theta
  double entropy(const State& s) const;  // int (c_heat ln theta - q^2/(2 c0))

  // 0.5 * min(tau_r, h^2/(6 |tau_n|), c_heat theta_min^2 h^2 / c0)
  double stable_dt(const Grid& g, double theta_min) const;

  const Params& params() const { return p_; }
  Field source_at(const Grid& g, double t) const;

private:
  Params p_;
  Source r_;
  mutable double guard_scale_ = 0.0;  // blow-up detector reference
};

}  // namespace nlt::gk

#endif
