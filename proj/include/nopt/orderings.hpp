#pragma once

#include <vector>

#include "nopt/primes.hpp"

namespace nopt {

struct POrderingResult {
  std::vector<Elem> sequence;    // a_0 .. a_n
  std::vector<long> valuations;  // v_S(P, 0 .. n); v(P, 0) = 0
};

enum class TieBreak { lex, revlex };

// Greedy p-ordering of a finite set S (|S| >= n+1 required). At each step the
// element minimizing v_P(prod (a_i - s)) is appended; ties break by the
// coordinate order on (a, b).
POrderingResult p_ordering(const QuadraticField& k, const std::vector<Elem>& S,
                           const PrimeIdeal& P, long n, TieBreak tb = TieBreak::lex);

// Greedy p-ordering of the whole ring. Candidates are drawn from residue
// representatives mod P^L; L grows until no step's argmin touches the
// resolution boundary, which certifies the valuations are the true minima.
POrderingResult p_ordering_ambient(const QuadraticField& k, const PrimeIdeal& P, long n,
                                   TieBreak tb = TieBreak::lex);

struct FactoredIdeal {
  std::vector<std::pair<PrimeIdeal, long>> factors;  // positive exponents, sorted
  mpz_class norm = 1;
};

// n!_k as a factored ideal; only primes of norm <= n can appear.
FactoredIdeal generalized_factorial(const QuadraticField& k, long n);

// v(P, m) for m = 0..n, for every prime ideal of norm <= n (cached per field).
struct FactorialTable {
  std::vector<PrimeIdeal> primes;
  std::vector<std::vector<long>> prefix;  // prefix[i][m] = v(primes[i], m)
};
const FactorialTable& factorial_table(const QuadraticField& k, long n);

struct FactorialNormLog {
  double log_norm = 0;    // log N(n!_k)
  double excess_rate = 0; // (log N - n log n) / n
};
FactorialNormLog factorial_norm_log(const QuadraticField& k, long n);

}  // namespace nopt
