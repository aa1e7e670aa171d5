#ifndef NLT_RNG_HPP
#define NLT_RNG_HPP

#include "nlt/field.hpp"

#include <cstdint>
#include <random>

namespace nlt {

// Deterministic random source.  All variates are derived from the raw
// mt19937_64 stream with fixed arithmetic (no library distributions), so a
// given seed reproduces the same bytes on every run of the same build.
class Rng {
public:
  explicit Rng(std::uint64_t seed) : eng_(seed) {}

  double uniform() { return double(eng_() >> 11) * 0x1.0p-53; }  // [0,1)
  double uniform(double a, double b) { return a + (b - a) * uniform(); }
  int uniform_int(int lo, int hi) {  // inclusive bounds
    return lo + int(eng_() % std::uint64_t(hi - lo + 1));
  }
  std::uint64_t raw() { return eng_(); }

private:
  std::mt19937_64 eng_;
};

// Independent uniform nodal values in [-amp, amp] (rough but periodic).
Field random_field(Rng& rng, const Grid& g, int rank, double amp);

// Smooth periodic field: per component, a sum of nterms products of
// sin/cos(k x + phase) with integer wavenumbers |k| <= kmax.
Field random_trig_field(Rng& rng, const Grid& g, int rank, int kmax, int nterms, double amp);

}  // namespace nlt

#endif
