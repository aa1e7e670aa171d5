#ifndef NLT_CH_HPP
#define NLT_CH_HPP

#include "nlt/field.hpp"
#include "nlt/power.hpp"

#include <functional>

namespace nlt::ch {

// Conserved phase field c with a temperature-dependent double well:
//   dc/dt = div( M(c) grad mu ),
//   mu    = -gamma lap c + theta0 F'(c) + theta G'(c),
//   F(c)  = beta (c^4/4 - c^2/2),   G(c) = beta c^2/2,
// so below the transition temperature (theta < theta0) the mixed state is
// unstable and the field separates toward c^2 = 1 - theta/theta0.

enum class Mobility { kConstant, kDegenerate };

struct Params {
  double gamma = 0.01;  // interface energy coefficient
  double beta = 1.0;    // well depth scale
  double theta0 = 1.0;  // transition temperature
  double m0 = 1.0;      // mobility scale
  double c_e = 1.0;     // heat capacity of the purely thermal energy channel
  Mobility mobility = Mobility::kConstant;

  void validate() const;
};

struct State {
  Field c;
  double t = 0.0;
};

// Spatially uniform temperature history driving the well depth.
using ThetaSchedule = std::function<double(double)>;

class Model {
public:
  Model(Params p, double theta_const);
  Model(Params p, ThetaSchedule theta);

  const Params& params() const { return p_; }
  double theta_at(double t) const;

  // M(c): m0, or max(0, m0 (1 - c^2)) in the degenerate variant
  Field mobility_field(const Field& c) const;
  Field chemical_potential(const Field& c, double theta) const;
  Field rhs(const Field& c, double theta) const;

  // Classic RK4 with the schedule sampled per stage.  Throws runtime_error
  // when the output amplitude leaves |c| <= 10 (blow-up); latches a sticky
  // warning when it leaves |c| <= 1.5.
  State step(const State& s, double dt);
  bool amplitude_warning() const { return warned_; }

  double mass(const Field& c) const;
  // theta0 int F + theta int G - (gamma/2) <c, lap c>; the gradient part is
  // paired with the same compact laplacian the flux uses, making the
  // semi-discrete identity dPsi/dt = -dissipation exact.
  double free_energy(const Field& c, double theta) const;
  double dissipation(const Field& c, double theta) const;  // int M |grad mu|^2

  // Internal power density (rates of the stored terms plus M|grad mu|^2),
  // the transport form it differs from by the flux N = -gamma (dc/dt) grad c,
  // the external divergence form, and the reduced heating channel
  //   h := c_e dtheta/dt - theta dG/dt - M |grad mu|^2
  // that closes the energy balance for uniform-temperature runs.
  // terms: "dual" (transport form), "heating".
  PowerBreakdown powers(const State& prev, const State& now, double dt) const;

  // Residual of the reduced heat balance h - (-div q + r) for a caller-chosen
  // conduction flux q and supply r; zero supply/flux leaves the heating
  // channel itself.
  Field heat_form_residual(const State& prev, const State& now, double dt,
                           const Field& q, const Field& r) const;

  // 0.5 * 2.785 / (m0 K (gamma K + beta (2 theta0 + theta))), K = sum 4/h^2:
  // RK4 real-axis bound against the stiffest mode with the worst well
  // curvature |F''| <= 2 on |c| <= 1.
  double stable_dt(const Grid& g, double theta) const;

private:
  Params p_;
  ThetaSchedule theta_;
  bool warned_ = false;
};

}  // namespace nlt::ch

#endif
