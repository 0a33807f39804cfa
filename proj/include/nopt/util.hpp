#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

#include <gmpxx.h>

namespace nopt {

inline constexpr const char* kVersion = "0.1.0";
// Tag emitted with every volume/energy table: Lebesgue measure on a complex
// coordinate is taken as twice the planar measure, so O_k has covolume
// sqrt(|disc|).
inline constexpr const char* kMeasureConvention = "complex_leb=2x_planar";

using int128 = __int128;
using Rng = std::mt19937_64;

// Error taxonomy mirrors the CLI exit codes: 2 parse, 3 cap, 4 invariant.
struct ParseError : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct CapError : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct InvariantError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// ---- exact integer helpers -------------------------------------------------

// floor division for mpz (GMP's fdiv).
mpz_class fdiv(const mpz_class& a, const mpz_class& b);
mpz_class fmod(const mpz_class& a, const mpz_class& b);  // result in [0, |b|)

inline mpz_class abs(const mpz_class& a) { return ::abs(a); }

// v_p(n) for n != 0.
long p_valuation(const mpz_class& p, const mpz_class& n);

bool is_prime(const mpz_class& n);

// Full factorization (trial division + Pollard-Brent rho). Intended for
// inputs whose prime factors are reachable by rho (say < 10^30 overall).
std::map<mpz_class, long> factorize(const mpz_class& n);

// Kronecker symbol (a/n) for any integers, n possibly even or negative.
int kronecker(const mpz_class& a, const mpz_class& n);

// Solves x^2 = a (mod p) for odd prime p, a a QR. Returns x in [0, p).
mpz_class sqrt_mod(const mpz_class& a, const mpz_class& p);

// Squarefree test for |d| <= 10^12 or so (factorizes).
bool is_squarefree(const mpz_class& d);

// log|n| for nonzero mpz, accurate for any size.
double log_abs(const mpz_class& n);

// double conversion that saturates instead of overflowing silently.
double to_double(const mpz_class& n);

// checked narrowing
long to_long_checked(const mpz_class& n, const char* what);

// ---- tiny deterministic parallel-for ----------------------------------------
// Runs fn(begin..end) partitioned over `threads` workers; the caller merges
// per-chunk results in chunk order for determinism.
void parallel_chunks(long begin, long end, int threads,
                     const std::function<void(long, long, int)>& fn);

}  // namespace nopt
