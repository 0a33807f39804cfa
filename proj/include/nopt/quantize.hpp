#pragma once

#include <vector>

#include "nopt/region.hpp"

namespace nopt {

struct QuantizeResult {
  std::vector<Elem> points;        // E_n, sorted
  long count = 0;
  double scale = 0;                // s with ||s|| = n sqrt|disc|
  double discrete_energy = 0;      // I' of the rescaled counting measure
};

// E_n = O_k cap (s U) with s = (n |disc|^(1/2))^(1/N); for a paper-measure-1
// region |E_n| = n + o(n). The rescaled empirical measure's I' is reported
// when |E_n| >= 2.
QuantizeResult quantize(const QuadraticField& k, const Region& U, long n,
                        long cap = 100000000);
QuantizeResult quantize(const QuadraticField& k, const DensityGrid& indicator, long n,
                        long cap = 100000000);

}  // namespace nopt
