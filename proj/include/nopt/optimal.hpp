#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "nopt/cylinder.hpp"
#include "nopt/orderings.hpp"

namespace nopt {

struct AlmostUniformReport {
  bool uniform = false;
  long max_count = 0, min_count = 0;
  std::vector<long> histogram;  // indexed by residue class
};

// integer-exact test: all residue class counts of S mod P^l differ by at most 1
AlmostUniformReport is_almost_uniform(const QuadraticField& k, const std::vector<Elem>& S,
                                      const PrimeIdeal& P, long l, long cap = 1000000);

struct FailureWitness {
  PrimeIdeal P;
  long l = 0;
  mpz_class class_hi, class_lo;
  long count_hi = 0, count_lo = 0;
};

struct Verdict {
  bool optimal = false;
  std::optional<FailureWitness> witness;
  std::vector<std::pair<PrimeIdeal, long>> checked;  // (P, max level checked)
};

// Certifies |S| = n+1 almost uniformly distributed mod every prime power.
// Finite reduction: only primes dividing Vol(S) can fail, at powers up to
// 1 + the largest pairwise difference valuation.
Verdict certify_n_optimal(const QuadraticField& k, const std::vector<Elem>& S);

struct VolumeResult {
  Elem generator;                       // prod over ordered pairs (x - y)
  std::map<PrimeIdeal, long> factored;  // valuations of the principal ideal
  mpz_class abs_norm = 1;
  double log_norm = 0;
};

VolumeResult volume(const QuadraticField& k, const std::vector<Elem>& S);

// Ideal identity Vol(S) O_k = prod_{m<=n} (m!_k)^2, checked exactly.
bool certify_via_volume(const QuadraticField& k, const std::vector<Elem>& S);

struct LowerBoundCheck {
  bool holds = false;
  double log_volume = 0;  // log ||Vol(F)||
  double log_bound = 0;   // log prod N(m!_k)^2
};

LowerBoundCheck lower_volume_bound_check(const QuadraticField& k, const std::vector<Elem>& F);

struct SearchOptions {
  long node_cap = 50000000;
  int threads = 1;
  long resume_branch = 0;  // DFS frontier: index of the first non-zero element
};

struct SearchStatus {
  bool complete = true;
  long nodes = 0;
  long next_branch = 0;  // resume token when incomplete
};

// All n-optimal sets with coordinates |a|, |b| <= box, up to translation
// (0 in S forced) and the unit action; deterministic order.
std::vector<std::vector<Elem>> search_n_optimal(const QuadraticField& k, long n, long box,
                                                const SearchOptions& opt = {},
                                                SearchStatus* status = nullptr);

struct PairwiseLogBound {
  double max_log_diff = 0;  // max over pairs of log ||x - y||
  double excess = 0;        // max_log_diff - log n
};

PairwiseLogBound pairwise_log_bound(const QuadraticField& k, const std::vector<Elem>& S);

struct HullResult {
  Cylinder hull;
  double volume = 0;
  double ratio = 0;  // volume / |S|
};

// Minimal axis cylinder containing embed(S): per-coordinate interval hull for
// real places, minimal enclosing disk on a complex place.
HullResult cylinder_hull(const QuadraticField& k, const std::vector<Elem>& S);

}  // namespace nopt
