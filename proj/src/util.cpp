#include "nopt/util.hpp"

#include <algorithm>
#include <cmath>
#include <thread>

namespace nopt {

mpz_class fdiv(const mpz_class& a, const mpz_class& b) {
  mpz_class q;
  mpz_fdiv_q(q.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
  return q;
}

mpz_class fmod(const mpz_class& a, const mpz_class& b) {
  mpz_class r;
  mpz_fdiv_r(r.get_mpz_t(), a.get_mpz_t(), abs(b).get_mpz_t());
  return r;
}

long p_valuation(const mpz_class& p, const mpz_class& n) {
  if (n == 0) throw InvariantError("p_valuation of 0");
  mpz_class m = n;
  long v = 0;
  mpz_class q, r;
  while (true) {
    mpz_fdiv_qr(q.get_mpz_t(), r.get_mpz_t(), m.get_mpz_t(), p.get_mpz_t());
    if (r != 0) break;
    m = q;
    ++v;
  }
  return v;
}

bool is_prime(const mpz_class& n) {
  if (n < 2) return false;
  return mpz_probab_prime_p(n.get_mpz_t(), 32) != 0;
}

namespace {

mpz_class pollard_rho(const mpz_class& n, Rng& rng) {
  // Brent's cycle variant.
  if (n % 2 == 0) return 2;
  while (true) {
    mpz_class y = mpz_class(rng() % 1000003) % n, c = mpz_class(rng() % 1000003) % n;
    if (c == 0) c = 1;
    mpz_class m = 128, g = 1, r = 1, q = 1, x, ys;
    while (g == 1) {
      x = y;
      for (mpz_class i = 0; i < r; ++i) y = (y * y + c) % n;
      mpz_class k = 0;
      while (k < r && g == 1) {
        ys = y;
        mpz_class lim = std::min(m, mpz_class(r - k));
        for (mpz_class i = 0; i < lim; ++i) {
          y = (y * y + c) % n;
          q = q * abs(x - y) % n;
        }
        g = gcd(q, n);
        k += m;
      }
      r *= 2;
    }
    if (g == n) {
      g = 1;
      while (g == 1) {
        ys = (ys * ys + c) % n;
        g = gcd(abs(x - ys), n);
      }
    }
    if (g != n) return g;
  }
}

void factor_rec(const mpz_class& n, std::map<mpz_class, long>& out, Rng& rng) {
  if (n == 1) return;
  if (is_prime(n)) {
    out[n]++;
    return;
  }
  mpz_class d = pollard_rho(n, rng);
  factor_rec(d, out, rng);
  factor_rec(n / d, out, rng);
}

}  // namespace

std::map<mpz_class, long> factorize(const mpz_class& n_in) {
  if (n_in == 0) throw InvariantError("factorize(0)");
  std::map<mpz_class, long> out;
  mpz_class n = abs(n_in);
  for (long p : {2L, 3L, 5L, 7L, 11L, 13L, 17L, 19L, 23L, 29L, 31L, 37L}) {
    while (n % p == 0) {
      out[p]++;
      n /= p;
    }
  }
  mpz_class p = 41;
  while (p * p <= n && p < 100000) {
    while (n % p == 0) {
      out[p]++;
      n /= p;
    }
    p += 2;
  }
  if (n > 1) {
    Rng rng(0x9e3779b97f4a7c15ull);
    factor_rec(n, out, rng);
  }
  return out;
}

int kronecker(const mpz_class& a, const mpz_class& n) {
  return mpz_kronecker(a.get_mpz_t(), n.get_mpz_t());
}

mpz_class sqrt_mod(const mpz_class& a_in, const mpz_class& p) {
  mpz_class a = fmod(a_in, p);
  if (a == 0) return 0;
  if (kronecker(a, p) != 1) throw InvariantError("sqrt_mod: not a residue");
  auto powm = [&](mpz_class b, mpz_class e) {
    mpz_class r;
    mpz_powm(r.get_mpz_t(), b.get_mpz_t(), e.get_mpz_t(), p.get_mpz_t());
    return r;
  };
  if (p % 4 == 3) return powm(a, (p + 1) / 4);
  // Tonelli-Shanks
  mpz_class q = p - 1;
  long s = 0;
  while (q % 2 == 0) {
    q /= 2;
    ++s;
  }
  mpz_class z = 2;
  while (kronecker(z, p) != -1) ++z;
  mpz_class m = s, c = powm(z, q), t = powm(a, q), r = powm(a, (q + 1) / 2);
  while (t != 1) {
    long i = 0;
    mpz_class t2 = t;
    while (t2 != 1) {
      t2 = t2 * t2 % p;
      ++i;
    }
    mpz_class b = c;
    for (long j = 0; j < m.get_si() - i - 1; ++j) b = b * b % p;
    m = i;
    c = b * b % p;
    t = t * c % p;
    r = r * b % p;
  }
  return r;
}

bool is_squarefree(const mpz_class& d) {
  if (d == 0) return false;
  for (const auto& [p, e] : factorize(d))
    if (e > 1) return false;
  return true;
}

double log_abs(const mpz_class& n) {
  if (n == 0) throw InvariantError("log_abs(0)");
  long exp;
  double m = mpz_get_d_2exp(&exp, n.get_mpz_t());
  return std::log(std::fabs(m)) + double(exp) * std::log(2.0);
}

double to_double(const mpz_class& n) { return mpz_get_d(n.get_mpz_t()); }

long to_long_checked(const mpz_class& n, const char* what) {
  if (!n.fits_slong_p()) throw CapError(std::string(what) + ": value out of long range");
  return n.get_si();
}

void parallel_chunks(long begin, long end, int threads,
                     const std::function<void(long, long, int)>& fn) {
  if (threads <= 1 || end - begin < 2) {
    fn(begin, end, 0);
    return;
  }
  long n = end - begin;
  int nt = std::min<long>(threads, n);
  std::vector<std::thread> pool;
  long chunk = (n + nt - 1) / nt;
  for (int t = 0; t < nt; ++t) {
    long lo = begin + t * chunk, hi = std::min(end, lo + chunk);
    if (lo >= hi) break;
    pool.emplace_back(fn, lo, hi, t);
  }
  for (auto& th : pool) th.join();
}

}  // namespace nopt
