#include "nlt/rng.hpp"

#include <cmath>

namespace nlt {

Field random_field(Rng& rng, const Grid& g, int rank, double amp) {
  Field out(g, rank);
  for (double& v : out.data()) v = rng.uniform(-amp, amp);
  return out;
}

Field random_trig_field(Rng& rng, const Grid& g, int rank, int kmax, int nterms, double amp) {
  Field out(g, rank);
  const std::size_t nn = g.nodes();
  const double two_pi = 8.0 * std::atan(1.0);
  for (int c = 0; c < out.comps(); ++c) {
    double* o = out.comp(c);
    for (int t = 0; t < nterms; ++t) {
      const double a = rng.uniform(-amp, amp) / nterms;
      double kx[2] = {0.0, 0.0};
      double ph[2] = {0.0, 0.0};
      for (int d = 0; d < g.dims(); ++d) {
        kx[d] = two_pi * rng.uniform_int(0, kmax) / g.length(d);
        ph[d] = rng.uniform(0.0, two_pi);
      }
      for (std::size_t i = 0; i < nn; ++i) {
        double v = a;
        for (int d = 0; d < g.dims(); ++d) v *= std::sin(kx[d] * g.coord(d, i) + ph[d]);
        o[i] += v;
      }
    }
  }
  return out;
}

}  // namespace nlt
