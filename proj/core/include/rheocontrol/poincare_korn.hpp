#pragma once

#include <cstdint>

#include "rheocontrol/grid.hpp"

namespace rheo {

// Grid-level embedding constants for the quadratic norms:
//
//   c1 :  ||y||_2  <= c1 * ||grad y||_2    (Poincare)
//   c2 :  ||D y||_2 >= c2 * ||y||_{1,2}    (Korn-type lower bound)
//
// both over staggered velocity fields with zero boundary values.  Estimates
// combine seeded random trial fields with inverse power iteration on the
// matching generalized eigenproblems, so c1 is certified from below by the
// trials and sharpened from above by the eigensolve, while c2 is the min of
// the two.  c2 always lies in (0, 1]: each shear entry of D is dominated
// node-by-node by the matching full-gradient terms.
struct EmbeddingConstants {
  double c1 = 0.0;
  double c2 = 0.0;
  int trials = 0;
};

// Fresh estimate with the given number of random trials (>= 1).
EmbeddingConstants estimate_poincare_korn(const MacGrid& g, int trials,
                                          std::uint64_t seed = 0x5eedc0de5eedc0deULL);

// Memoized per-grid estimate (32 trials, fixed seed); thread-safe, computed
// once per distinct grid signature and reused by every solve on that grid.
const EmbeddingConstants& embedding_constants(const MacGrid& g);

}  // namespace rheo
