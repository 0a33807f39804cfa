#pragma once

#include <optional>

#include "nopt/region.hpp"

namespace nopt {

// N_t(U, v) = |(tU + v) cap O_k|, exact by box-clipped enumeration
long count_region(const QuadraticField& k, const Region& U, const VPoint& t, const VPoint& v,
                  long cap = 100000000);

// D_t(U, v) = N_t(U, v) - |disc|^{-1/2} Leb(U) ||t|| (paper convention)
struct DiscrepancyValue {
  long N = 0;
  double main_term = 0;
  double D = 0;
};
DiscrepancyValue discrepancy(const QuadraticField& k, const Region& U, const VPoint& t,
                             const VPoint& v, long cap = 100000000);

// certified lower bound for the maximal discrepancy: max over sampled v of
// |D_t(U, v)|, with local refinement; the witness v is returned and recounted
struct MaxDiscrepancyBound {
  double bound = 0;
  VPoint witness_v;
  long samples = 0;
};
MaxDiscrepancyBound max_discrepancy_lower(const QuadraticField& k, const Region& U,
                                          const VPoint& t, long budget, uint64_t seed = 1);

// Searches dilates near boundary-pair frames for |D_t(U, v)| > 1. Every
// returned witness is re-verified by an independent recount with margin.
struct BadDilateWitness {
  VPoint t, v;
  long N = 0;
  double main_term = 0;
  double D = 0;
  long probes = 0;
};
std::optional<BadDilateWitness> find_bad_dilate(const QuadraticField& k, const Region& U,
                                                long budget, uint64_t seed = 1);

}  // namespace nopt
