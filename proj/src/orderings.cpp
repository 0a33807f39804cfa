#include "nopt/orderings.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <mutex>

namespace nopt {

namespace {

bool tie_before(const Elem& x, const Elem& y, TieBreak tb) {
  return tb == TieBreak::lex ? x < y : y < x;
}

}  // namespace

POrderingResult p_ordering(const QuadraticField& k, const std::vector<Elem>& S,
                           const PrimeIdeal& P, long n, TieBreak tb) {
  if ((long)S.size() < n + 1) throw ParseError("p_ordering: |S| < n+1");
  POrderingResult out;
  std::vector<Elem> pool = S;
  std::vector<char> used(pool.size(), 0);
  for (long m = 0; m <= n; ++m) {
    long best = -1;
    long best_val = 0;
    for (size_t i = 0; i < pool.size(); ++i) {
      if (used[i]) continue;
      long w = 0;
      bool infinite = false;
      for (const Elem& a : out.sequence) {
        auto v = valuation(k, a - pool[i], P);
        if (!v) {
          infinite = true;
          break;
        }
        w += *v;
      }
      if (infinite) continue;  // repeated element: product vanishes
      if (best < 0 || w < best_val ||
          (w == best_val && tie_before(pool[i], pool[best], tb))) {
        best = i;
        best_val = w;
      }
    }
    if (best < 0) throw ParseError("p_ordering: S has fewer than n+1 distinct elements");
    used[best] = 1;
    out.sequence.push_back(pool[best]);
    out.valuations.push_back(m == 0 ? 0 : best_val);
  }
  return out;
}

POrderingResult p_ordering_ambient(const QuadraticField& k, const PrimeIdeal& P, long n,
                                   TieBreak tb) {
  // smallest L with N(P)^L > n: a greedy argmin has every single-term
  // valuation < L, so classes mod P^L resolve the minimization
  mpz_class q = P.residue_norm();
  long L = 1;
  {
    mpz_class qp = q;
    while (qp <= n) {
      qp *= q;
      ++L;
    }
  }
  for (;; ++L) {
    ResidueSystem rs(k, P, L);
    std::vector<Elem> reps = rs.representatives(8000000);
    std::sort(reps.begin(), reps.end());
    POrderingResult out;
    std::vector<char> used(reps.size(), 0);
    std::vector<long> weight(reps.size(), 0), maxterm(reps.size(), 0);
    bool regrow = false;
    for (long m = 0; m <= n; ++m) {
      long best = -1;
      for (size_t i = 0; i < reps.size(); ++i) {
        if (used[i]) continue;
        if (best < 0 || weight[i] < weight[best] ||
            (weight[i] == weight[best] && tie_before(reps[i], reps[best], tb)))
          best = i;
      }
      // argmin must be resolved strictly below the class resolution, else
      // elements inside one class are indistinguishable at this depth
      if (maxterm[best] >= L) {
        regrow = true;
        break;
      }
      used[best] = 1;
      out.sequence.push_back(reps[best]);
      out.valuations.push_back(m == 0 ? 0 : weight[best]);
      for (size_t i = 0; i < reps.size(); ++i) {
        if (used[i]) continue;
        long v = *valuation(k, reps[best] - reps[i], P);
        weight[i] += v;
        maxterm[i] = std::max(maxterm[i], v);
      }
    }
    if (!regrow) return out;
  }
}

namespace {

struct FactCacheEntry {
  long depth = -1;
  FactorialTable table;
};

std::map<long, FactCacheEntry>& fact_cache() {
  static std::map<long, FactCacheEntry> c;
  return c;
}
std::mutex fact_mu;

}  // namespace

const FactorialTable& factorial_table(const QuadraticField& k, long n) {
  std::lock_guard<std::mutex> lock(fact_mu);
  FactCacheEntry& e = fact_cache()[k.d()];
  if (e.depth >= n) return e.table;
  FactorialTable t;
  t.primes = prime_ideals_norm_up_to(k, std::max(2L, n));
  for (const auto& P : t.primes) {
    POrderingResult r = p_ordering_ambient(k, P, n);
    t.prefix.push_back(std::move(r.valuations));
  }
  e.depth = n;
  e.table = std::move(t);
  return e.table;
}

FactoredIdeal generalized_factorial(const QuadraticField& k, long n) {
  if (n < 0) throw ParseError("generalized_factorial: n < 0");
  FactoredIdeal out;
  if (n == 0) return out;
  const FactorialTable& t = factorial_table(k, n);
  for (size_t i = 0; i < t.primes.size(); ++i) {
    if (t.primes[i].residue_norm() > n) continue;
    long v = t.prefix[i][n];
    if (v <= 0) continue;
    out.factors.push_back({t.primes[i], v});
    mpz_class pw;
    mpz_pow_ui(pw.get_mpz_t(), t.primes[i].residue_norm().get_mpz_t(), v);
    out.norm *= pw;
  }
  return out;
}

FactorialNormLog factorial_norm_log(const QuadraticField& k, long n) {
  if (n < 1) throw ParseError("factorial_norm_log: n < 1");
  FactoredIdeal f = generalized_factorial(k, n);
  FactorialNormLog out;
  out.log_norm = (f.norm == 1) ? 0.0 : log_abs(f.norm);
  out.excess_rate = (out.log_norm - n * std::log((double)n)) / (double)n;
  return out;
}

}  // namespace nopt
