#ifndef NLT_LAWS_HPP
#define NLT_LAWS_HPP

#include <map>
#include <string>
#include <vector>

#include "nlt/field.hpp"
#include "nlt/virtual_power.hpp"

namespace nlt::laws {

// One recorded process on a fixed grid, sampled at a uniform step:
//  - channels hold volume-integrated rate series, one value per step, so a
//    cycle integral is just sum * dt;
//  - snapshots hold the state fields at every sample (channel length + 1),
//    which makes closure measurable and restriction exact.
// Recorders use the channel names "first_law_rate" (d/dt of internal energy),
// "entropy_action" (internal entropy action) and "dissipation" (internal
// mechanical power); absent channels mark the law as not applicable.
struct ProcessRecord {
  std::string model;
  double t0 = 0.0;
  double dt = 0.0;
  std::map<std::string, std::vector<double>> channels;
  std::vector<std::map<std::string, Field>> snapshots;

  int steps() const;
  double t_end() const { return t0 + steps() * dt; }
  void validate() const;
};

// Restriction to steps [i0, i1) — exact, snapshots included.
ProcessRecord restrict_record(const ProcessRecord& r, int i0, int i1);
// Head-to-tail composition; the junction snapshots must agree to 1e-12
// relative sup distance.  restrict_record and compose form a semigroup:
// compose(restrict(r, 0, k), restrict(r, k, n)) reproduces r exactly.
ProcessRecord compose(const ProcessRecord& a, const ProcessRecord& b);

// Worst relative sup distance between first and last snapshot over all keys.
double closure_error(const ProcessRecord& r);

// sum(channel) * dt; throws if the channel is absent.
double cycle_integral(const ProcessRecord& r, const std::string& channel);

// Cumulative series of a rate channel: out[0] = anchor,
// out[i+1] = out[i] + channel[i] * dt.  Backward-difference rate channels
// telescope, so the series reproduces the recorded potential exactly.
std::vector<double> reconstruct_potential(const ProcessRecord& r,
                                          const std::string& channel, double anchor);

struct LawVerdict {
  std::string law;  // "first_law", "second_law", "dissipation"
  bool applicable = false;
  double value = 0.0;
  double bound = 0.0;
  bool pass = true;
};

struct CycleReport {
  std::string model;
  double t0 = 0.0;
  double dt = 0.0;
  double duration = 0.0;
  double closure = 0.0;
  std::map<std::string, double> integrals;
  std::vector<LawVerdict> verdicts;
  bool all_pass() const;
};

// Evaluates the cycle statements on a near-cycle record:
//   first_law:   |int first_law_rate dt|  <= bound
//   second_law:   int entropy_action dt   <= bound
//   dissipation:  int dissipation dt      >= -bound
// with bound = (closure + rel_tol) * sum |channel| dt per channel.  Records
// whose closure defect exceeds closure_max are rejected: the laws only bind
// on cycles.
CycleReport check_cycles(const ProcessRecord& r, double closure_max, double rel_tol);

std::string to_json_string(const CycleReport& rep);
std::string to_text(const CycleReport& rep);

// Record layout: model tag, parameter echo, t0, dt, steps and the per-step
// channel table.  Snapshots are field data and stay in CSV artifacts.
std::string record_to_json_string(const ProcessRecord& r,
                                  const std::map<std::string, double>& params = {});

// Coldness-form entropy action  A = h w - q1 . grad w - q2 : grad2 w  with
// w = 1/theta; the generic path the per-model evaluators must reproduce.
// Null flux pointers drop the corresponding term.
Field entropy_action(const Field& theta, const Field& h, const Field* q1,
                     const Field* q2);

// Signed virtual-balance residuals of one decomposition against one test
// function (see virtual_power.hpp for the sign conventions).
double mechanical_residual(const VirtualDecomposition& d, const Field& v);
double thermal_residual(const VirtualDecomposition& d, const Field& w);

// Worst residual over seeded trigonometric test functions, scaled per trial
// by the magnitudes of the participating terms.  Thermal decompositions are
// probed with coldnesses of temperatures in [0.7, 1.3].
double virtual_balance_residual(const VirtualDecomposition& d, const Grid& g,
                                unsigned seed = 1, int trials = 20);

}  // namespace nlt::laws

#endif
