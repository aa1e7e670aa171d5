#ifndef NLT_VIRTUAL_POWER_HPP
#define NLT_VIRTUAL_POWER_HPP

#include "nlt/field.hpp"

#include <optional>

namespace nlt {

// A snapshot's ingredients for the virtual-power / virtual-action balances.
//
// Mechanical side (ranks relative to the velocity rank rv):
//   int [ accel.v~ + t2.grad(v~) + t3.grad2(v~) - body_force.v~ ] dx -> 0
// Thermal side (w~ = 1/theta~ is the virtual coldness):
//   int [ heating*w~ - q1.grad(w~) - q2.grad2(w~) - supply*w~ ] dx -> 0
//
// Absent optional pieces are treated as zero; a side with no pieces at all is
// reported "not applicable" by the balance evaluator.
struct VirtualDecomposition {
  int velocity_rank = 0;
  std::optional<Field> accel;       // rho * dv/dt, rank rv
  std::optional<Field> t2;          // rank rv+1 stress
  std::optional<Field> t3;          // rank rv+2 hyperstress
  std::optional<Field> body_force;  // rho * f, rank rv

  std::optional<Field> heating;     // rho * h, rank 0
  std::optional<Field> q1;          // rank 1 heat flux
  std::optional<Field> q2;          // rank 2 second-grade heat flux
  std::optional<Field> supply;      // rho * r, rank 0
};

}  // namespace nlt

#endif
