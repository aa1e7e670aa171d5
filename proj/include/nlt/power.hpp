#ifndef NLT_POWER_HPP
#define NLT_POWER_HPP

#include "nlt/field.hpp"

#include <map>
#include <string>

namespace nlt {

// Per-step power/action bookkeeping for one model: the internal and external
// densities (rank 0), the extra flux that separates the two forms (rank 1),
// and named per-term fields (classical forms, printed variants, ...).
// Every d/dt inside these fields is the same two-point backward difference
// over the step that produced (prev, now).
struct PowerBreakdown {
  Field internal;
  Field external;
  Field extra_flux;
  std::map<std::string, Field> terms;
};

}  // namespace nlt

#endif
