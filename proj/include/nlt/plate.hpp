#ifndef NLT_PLATE_HPP
#define NLT_PLATE_HPP

#include "nlt/field.hpp"
#include "nlt/power.hpp"
#include "nlt/virtual_power.hpp"

#include <functional>
#include <optional>
#include <vector>

namespace nlt::plate {

// Thermoelastic bending of a thin layer, scalar deflection u:
//   rho u'' = div T + rho f,   T = -a grad(lap u) + c_th grad(theta) + b grad(u''),
// which closes to (rho - b lap) u'' = -a lap^2 u + c_th lap theta + rho f.
// theta(x,t) and f(x,t) are prescribed; all laplacians are the compact
// stencil, so the semi-discrete energy
//   E = 1/2 int [ rho u'^2 + b |grad u'|^2 + a (lap u)^2 ]
// is conserved exactly when theta = f = 0.

struct Params {
  double rho = 1.0;   // areal density
  double a = 1.0;     // bending stiffness
  double b = 0.0;     // micro-inertia / acceleration-gradient coefficient
  double c_th = 0.0;  // thermal coupling

  void validate() const;
};

struct State {
  Field u;
  Field v;  // u'
  double t = 0.0;
};

// Prescribed scalar field of time (temperature or specific body force).
using Source = std::function<Field(double)>;

class Model {
public:
  explicit Model(Params p, Source theta = {}, Source f = {});

  const Params& params() const { return p_; }
  Field theta_at(const Grid& g, double t) const;
  Field f_at(const Grid& g, double t) const;

  // u'' from the implicit micro-inertia solve (conjugate gradient when b > 0)
  Field accel(const Field& u, double t) const;
  State step(const State& s, double dt);  // classic RK4 on (u, u')

  double energy(const State& s) const;

  // Internal power density
  //   P_i = (a/2) d(lap u)^2/dt + (b/2) d|grad u'|^2/dt - c_th theta lap(u'),
  // its classical form T.grad(u') they differ from by div of the flux
  //   N = -(a lap u - c_th theta) grad(u'),
  // and the external form -div N' + rho f u'.  terms:
  //   "classical"        T.grad(u')
  //   "heating"          +c_th theta lap(u')   (closes the energy channel)
  //   "n_prime"          N' = -T u' + N
  //   "n_printed"        flux variant -a lap u grad(u') (thermal part dropped)
  //   "n_prime_printed"  N' variant with the theta term unscaled by c_th
  PowerBreakdown powers(const State& prev, const State& now, double dt) const;

  // Snapshot pieces of the mechanical virtual-power balance:
  //   accel = rho u'', t2 = c_th grad theta + b grad u'', t3 = a lap(u) I,
  //   body_force = rho f.
  VirtualDecomposition decomposition(const State& s) const;

  // 0.5 * 2.828 / omega_max, omega_max = K sqrt(a/(rho + b K)), K = sum 4/h^2:
  // RK4 imaginary-axis bound against the stiffest bending mode.
  double stable_dt(const Grid& g) const;

private:
  Params p_;
  Source theta_, f_;
  mutable double guard_scale_ = 0.0;
};

// Rolling buffer of past scalar snapshots at lags j*ds; slot 0 is the newest.
class LagBuffer {
public:
  LagBuffer(const Grid& g, int m, double ds);

  const Grid& grid() const { return g_; }
  int max_index() const { return m_; }
  double ds() const { return ds_; }
  double horizon() const { return m_ * ds_; }
  double s(int j) const { return j * ds_; }
  const Field& lag(int j) const;

  void push(const Field& f, double dt);  // dt must equal ds
  void fill(const Field& f);             // static prehistory

private:
  Grid g_;
  int m_;
  double ds_;
  std::vector<Field> slots_;
};

// Bending stiffness that relaxes over time:
//   T = -grad S + c_th grad theta,  S = c0 lap u + int C'(s) lap u(t-s) ds,
//   C'(s) = -c1 lambda exp(-lambda s),
// so the instantaneous modulus is c0 and the fully relaxed one is c0 - c1.
// The history integral is frozen over each RK4 step and advanced afterwards
// with static prehistory at the first step.  Internal power
//   P_i = (J - c_th theta) lap(u') + (c0/2) d(lap u)^2/dt,   J = int C' lap u(t-s) ds,
// classical form T.grad(u'), flux N = -(S - c_th theta) grad(u').

struct MemoryParams {
  double rho = 1.0;
  double c0 = 1.0;     // instantaneous bending stiffness
  double c1 = 0.0;     // relaxing part (c1 > 0 dissipates; sign-flips allowed)
  double lambda = 1.0; // kernel decay rate
  double c_th = 0.0;

  void validate() const;
};

class MemoryModel {
public:
  MemoryModel(MemoryParams p, int slots, Source theta = {}, Source f = {});

  const MemoryParams& params() const { return p_; }
  Field theta_at(const Grid& g, double t) const;
  Field f_at(const Grid& g, double t) const;

  Field history_term() const;  // J; throws before the first step
  Field accel(const Field& u, const Field& j, double t) const;
  State step(const State& s, double dt);

  PowerBreakdown powers(const State& prev, const State& now, double dt) const;

  double stable_dt(const Grid& g) const;  // elastic bound with a = c0 + |c1|

private:
  MemoryParams p_;
  int slots_;
  Source theta_, f_;
  std::optional<LagBuffer> history_;
  mutable double guard_scale_ = 0.0;
};

}  // namespace nlt::plate

#endif
