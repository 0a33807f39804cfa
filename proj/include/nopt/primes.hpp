#pragma once

#include <optional>
#include <vector>

#include "nopt/field.hpp"

namespace nopt {

enum class PrimeKind { split, inert, ramified, rational };

// A prime ideal of O_k above the rational prime p. For split/ramified primes
// the ideal is (p, omega - c) with c a root of the minimal polynomial of
// omega mod p; `pi` is an element uniformizer for ramified primes.
struct PrimeIdeal {
  mpz_class p;
  PrimeKind kind = PrimeKind::rational;
  int f = 1;  // residue degree
  mpz_class c;
  Elem pi;
  std::optional<Elem> generator;

  mpz_class residue_norm() const { return f == 2 ? mpz_class(p * p) : p; }
  int ramification() const { return kind == PrimeKind::ramified ? 2 : 1; }
  bool operator<(const PrimeIdeal& o) const {
    if (p != o.p) return p < o.p;
    return c < o.c;
  }
  bool operator==(const PrimeIdeal& o) const {
    return p == o.p && kind == o.kind && c == o.c;
  }
};

// Dedekind splitting of a rational prime. Split primes come as the two
// conjugate ideals in a deterministic order (smaller root first).
std::vector<PrimeIdeal> factor_rational_prime(const QuadraticField& k, const mpz_class& p);

// additive p-adic valuation; nullopt encodes v(0) = +infinity
std::optional<long> valuation(const QuadraticField& k, const Elem& x, const PrimeIdeal& P);

// exact v_p on the valuation structure: v(xy) = v(x) + v(y) etc. hold.

// Residue system of O_k / P^l: canonical index in [0, N(P)^l) plus
// representative enumeration.
class ResidueSystem {
 public:
  ResidueSystem(const QuadraticField& k, const PrimeIdeal& P, long l);

  const mpz_class& class_count() const { return count_; }
  long level() const { return l_; }
  mpz_class index(const Elem& x) const;
  bool same_class(const Elem& x, const Elem& y) const { return index(x) == index(y); }

  // All representatives, one per class; throws CapError if count > cap.
  std::vector<Elem> representatives(long cap) const;

 private:
  const QuadraticField& k_;
  PrimeIdeal P_;
  long l_;
  mpz_class count_;
  mpz_class pl_;       // p^l
  mpz_class root_pl_;  // Hensel-lifted root mod p^l (split), if applicable
};

// residue_classes operation: representatives of O_k / P^l
std::vector<Elem> residue_classes(const QuadraticField& k, const PrimeIdeal& P, long l,
                                  long cap = 1000000);

// Prime ideals of norm <= X, sorted by (norm, p, c).
std::vector<PrimeIdeal> prime_ideals_norm_up_to(const QuadraticField& k, long X);

}  // namespace nopt
