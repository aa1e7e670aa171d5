#ifndef NLT_MEMHEAT_HPP
#define NLT_MEMHEAT_HPP

#include "nlt/field.hpp"

#include <vector>

namespace nlt::memheat {

// Exponential relaxation kernel K'(s) = amplitude * exp(-lambda s).
// amplitude > 0 is the dissipative orientation (the steady flux points down
// the temperature gradient and the quadratic history functional decays);
// negative amplitudes are accepted so falsification runs can exercise the
// inequality detectors.
struct Kernel {
  double amplitude = 1.0;
  double lambda = 1.0;

  double prime(double s) const;
  // exact moments of K'(s) * s^p over [0, horizon], p = 0..2
  double moment(int p, double horizon) const;
  void validate() const;
};

// Integrated history of a vector field g: slot j holds
//   gbar(s_j) = integral of g over the last s_j = j*ds units of time,
// together with its spatial gradient.  Slot 0 is pinned to zero (integral
// over an empty interval).  The update rule
//   gbar_new(s_j) = gbar_old(s_{j-1}) + dt * g_now
// is exact for piecewise-constant g sampled at the right endpoint and
// requires dt = ds so past-time nodes stay aligned with the time grid.
class HistoryBuffer {
public:
  HistoryBuffer(const Grid& g, int m, double ds);

  const Grid& grid() const { return g_; }
  int max_index() const { return m_; }
  double ds() const { return ds_; }
  double horizon() const { return m_ * ds_; }
  double s(int j) const { return j * ds_; }
  const Field& gbar(int j) const;
  const Field& grad_gbar(int j) const;

  void push(const Field& g_now, double dt);
  // synthetic fill for oracles; derives the gradient slot, rejects j = 0
  void set_slot(int j, const Field& gbar_j);

private:
  Grid g_;
  int m_;
  double ds_;
  std::vector<Field> gbar_;
  std::vector<Field> grad_;
};

// Guard used by runners before trusting truncated moments: the stored
// horizon m*ds must cover at least 5 decay times of the kernel.
void validate_horizon(const HistoryBuffer& buf, const Kernel& k);

// Trapezoid moments over past time: M1 = int K1'(s) gbar(s) ds (rank 1),
// M2 = int K2'(s) grad gbar(s) ds (rank 2).
Field moment1(const HistoryBuffer& buf, const Kernel& k1);
Field moment2(const HistoryBuffer& buf, const Kernel& k2);

// Constitutive fluxes q1 = -theta M1, q2 = -theta M2 and the effective heat
// flux q = q1 - div q2 entering the energy balance.
Field flux_q1(const HistoryBuffer& buf, const Field& theta, const Kernel& k1);
Field flux_q2(const HistoryBuffer& buf, const Field& theta, const Kernel& k2);
Field memory_flux(const HistoryBuffer& buf, const Field& theta, const Kernel& k1,
                  const Kernel& k2);

// Internal entropy action in coldness form, w = 1/theta:
//   A = h w - q1 . grad w - q2 . grad2 w.
// This is the same discrete evaluation the generic second-grade checker
// uses, so the two paths agree to round-off.
Field entropy_action(const HistoryBuffer& buf, const Field& theta, const Field& h,
                     const Kernel& k1, const Kernel& k2);

// Equivalent temperature-gradient form
//   A = (1/theta)[h - M1 . grad theta - M2 . grad2 theta]
//       + (2/theta^2) (M2 grad theta) . grad theta,
// which matches the coldness form at second order in h (chain rule applied
// before discretization).
Field entropy_action_expanded(const HistoryBuffer& buf, const Field& theta,
                              const Field& h, const Kernel& k1, const Kernel& k2);

// Quadratic history functional density
//   psi2 = 1/2 int K1' |gbar|^2 ds + 1/2 int K2' |grad gbar|^2 ds,
// non-negative for dissipative kernels.
Field psi2(const HistoryBuffer& buf, const Kernel& k1, const Kernel& k2);

// Volume-integrated residual of the rate inequality
//   d(psi2)/dt <= M1 . grad theta + M2 . grad2 theta
//                 - (2/theta) (M2 grad theta) . grad theta,
// evaluated with the backward difference of psi2 between the two buffers and
// the right-hand side at the newer one.  Non-positive along dissipative
// trajectories (up to discretization); goes positive when a kernel sign is
// flipped.
double psi2_rate_residual(const HistoryBuffer& prev, const HistoryBuffer& now,
                          const Field& theta, const Kernel& k1, const Kernel& k2,
                          double dt);

}  // namespace nlt::memheat

#endif
