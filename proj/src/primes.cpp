#include "nopt/primes.hpp"

#include <algorithm>
#include <map>
#include <mutex>

namespace nopt {

namespace {

// minimal polynomial of omega: X^2 - d (plain) or X^2 - X - (d-1)/4 (half)
mpz_class min_poly(const QuadraticField& k, const mpz_class& x) {
  if (k.omega_half()) return x * x - x - (mpz_class(k.d()) - 1) / 4;
  return x * x - mpz_class(k.d());
}

mpz_class min_poly_deriv(const QuadraticField& k, const mpz_class& x) {
  if (k.omega_half()) return 2 * x - 1;
  return 2 * x;
}

// Hensel lift of a simple root of the minimal polynomial mod p to mod p^m.
// Cached per (d, p, starting root).
mpz_class lift_root(const QuadraticField& k, const mpz_class& p, const mpz_class& c1, long m) {
  struct Key {
    long d;
    mpz_class p, c1;
    bool operator<(const Key& o) const {
      if (d != o.d) return d < o.d;
      if (p != o.p) return p < o.p;
      return c1 < o.c1;
    }
  };
  static std::mutex mu;
  static std::map<Key, std::pair<long, mpz_class>> cache;  // -> (m, root mod p^m)
  std::lock_guard<std::mutex> lock(mu);
  Key key{k.d(), p, c1};
  auto it = cache.find(key);
  long have = 0;
  mpz_class c = c1;
  if (it != cache.end()) {
    have = it->second.first;
    c = it->second.second;
  } else {
    have = 1;
  }
  if (have >= m) {
    mpz_class pm;
    mpz_pow_ui(pm.get_mpz_t(), p.get_mpz_t(), m);
    return fmod(c, pm);
  }
  while (have < m) {
    long next = std::min(2 * have, (long)m);
    mpz_class pn;
    mpz_pow_ui(pn.get_mpz_t(), p.get_mpz_t(), next);
    mpz_class f = fmod(min_poly(k, c), pn);
    mpz_class fp = min_poly_deriv(k, c);
    mpz_class inv;
    if (mpz_invert(inv.get_mpz_t(), fp.get_mpz_t(), pn.get_mpz_t()) == 0)
      throw InvariantError("hensel: derivative not invertible");
    c = fmod(c - f * inv, pn);
    have = next;
  }
  cache[key] = {have, c};
  mpz_class pm;
  mpz_pow_ui(pm.get_mpz_t(), p.get_mpz_t(), m);
  return fmod(c, pm);
}

std::optional<Elem> search_generator(const QuadraticField& k, const mpz_class& p,
                                     PrimeKind kind, const mpz_class& c) {
  if (p > 20000) return std::nullopt;
  long pl = p.get_si();
  long ybound = (long)std::sqrt((double)(4 * pl) / std::max(1.0, (double)std::labs(k.d()))) + 2;
  long xbound = (long)std::sqrt((double)(4 * pl)) + 2;
  for (long y = 0; y <= ybound; ++y) {
    for (long x = -xbound; x <= xbound; ++x) {
      Elem g{mpz_class(x), mpz_class(y)};
      if (g.is_zero()) continue;
      if (abs_norm(k, g) != p) continue;
      if (kind == PrimeKind::split) {
        if (fmod(g.a + g.b * c, p) != 0) continue;
      }
      return g;
    }
  }
  return std::nullopt;
}

}  // namespace

namespace {
std::vector<PrimeIdeal> factor_rational_prime_uncached(const QuadraticField& k,
                                                       const mpz_class& p);
}

std::vector<PrimeIdeal> factor_rational_prime(const QuadraticField& k, const mpz_class& p) {
  struct Key {
    long d;
    mpz_class p;
    bool operator<(const Key& o) const { return d != o.d ? d < o.d : p < o.p; }
  };
  static std::mutex fmu;
  static std::map<Key, std::vector<PrimeIdeal>> fcache;
  std::lock_guard<std::mutex> lock(fmu);
  Key key{k.d(), p};
  auto it = fcache.find(key);
  if (it == fcache.end())
    it = fcache.emplace(key, factor_rational_prime_uncached(k, p)).first;
  return it->second;
}

namespace {
std::vector<PrimeIdeal> factor_rational_prime_uncached(const QuadraticField& k,
                                                       const mpz_class& p) {
  if (!is_prime(p)) throw ParseError("factor_rational_prime: p is not prime");
  std::vector<PrimeIdeal> out;
  if (k.is_rational()) {
    PrimeIdeal P;
    P.p = p;
    P.kind = PrimeKind::rational;
    P.f = 1;
    P.pi = Elem(p, 0);
    P.generator = P.pi;
    out.push_back(P);
    return out;
  }
  int chi = kronecker(k.disc(), p);
  if (chi == -1) {
    PrimeIdeal P;
    P.p = p;
    P.kind = PrimeKind::inert;
    P.f = 2;
    P.pi = Elem(p, 0);
    P.generator = P.pi;
    out.push_back(P);
    return out;
  }
  if (chi == 0) {
    PrimeIdeal P;
    P.p = p;
    P.kind = PrimeKind::ramified;
    P.f = 1;
    if (p == 2) {
      long dm4 = ((k.d() % 4) + 4) % 4;
      if (dm4 == 2) {
        P.c = 0;
        P.pi = Elem(mpz_class(0), mpz_class(1));  // omega
      } else {  // d = 3 mod 4
        P.c = 1;
        P.pi = Elem(mpz_class(1), mpz_class(1));  // 1 + omega
      }
    } else {
      if (k.omega_half()) {
        P.c = fmod((p + 1) / 2, p);               // double root 1/2 mod p
        P.pi = Elem(mpz_class(-1), mpz_class(2));  // 2*omega - 1 = sqrt(d)
      } else {
        P.c = 0;
        P.pi = Elem(mpz_class(0), mpz_class(1));  // omega = sqrt(d)
      }
    }
    P.generator = search_generator(k, p, P.kind, P.c);
    out.push_back(P);
    return out;
  }
  // split
  mpz_class r1, r2;
  if (p == 2) {
    // only the half case splits at 2 (d = 1 mod 8): roots of X^2+X+(1-d)/4 = X(X+1)
    r1 = 0;
    r2 = 1;
  } else if (k.omega_half()) {
    mpz_class s = sqrt_mod(mpz_class(k.d()), p);
    mpz_class inv2;
    mpz_class two = 2;
    mpz_invert(inv2.get_mpz_t(), two.get_mpz_t(), p.get_mpz_t());
    r1 = fmod((1 + s) * inv2, p);
    r2 = fmod((1 - s) * inv2, p);
  } else {
    r1 = sqrt_mod(mpz_class(k.d()), p);
    r2 = fmod(-r1, p);
  }
  if (r1 > r2) std::swap(r1, r2);
  for (const mpz_class& c : {r1, r2}) {
    PrimeIdeal P;
    P.p = p;
    P.kind = PrimeKind::split;
    P.f = 1;
    P.c = c;
    P.pi = Elem(p, 0);  // not a uniformizer; unused for split
    P.generator = search_generator(k, p, P.kind, c);
    out.push_back(P);
  }
  return out;
}
}  // namespace

std::optional<long> valuation(const QuadraticField& k, const Elem& x, const PrimeIdeal& P) {
  if (x.is_zero()) return std::nullopt;
  switch (P.kind) {
    case PrimeKind::rational:
      return p_valuation(P.p, x.a);
    case PrimeKind::inert: {
      if (x.a == 0) return p_valuation(P.p, x.b);
      if (x.b == 0) return p_valuation(P.p, x.a);
      return std::min(p_valuation(P.p, x.a), p_valuation(P.p, x.b));
    }
    case PrimeKind::ramified:
      return p_valuation(P.p, norm(k, x));
    case PrimeKind::split: {
      long m = 16;
      while (true) {
        mpz_class cm = lift_root(k, P.p, P.c, m);
        mpz_class pm;
        mpz_pow_ui(pm.get_mpz_t(), P.p.get_mpz_t(), m);
        mpz_class t = fmod(x.a + x.b * cm, pm);
        if (t != 0) {
          long v = p_valuation(P.p, t);
          if (v < m) return v;
        }
        m *= 2;
        if (m > 1 << 24) throw InvariantError("valuation: lift depth cap");
      }
    }
  }
  throw InvariantError("valuation: bad prime kind");
}

ResidueSystem::ResidueSystem(const QuadraticField& k, const PrimeIdeal& P, long l)
    : k_(k), P_(P), l_(l) {
  if (l < 1) throw ParseError("residue system level must be >= 1");
  mpz_pow_ui(pl_.get_mpz_t(), P.p.get_mpz_t(), l);
  mpz_pow_ui(count_.get_mpz_t(), P.residue_norm().get_mpz_t(), l);
  if (P.kind == PrimeKind::split) root_pl_ = lift_root(k, P.p, P.c, l);
}

mpz_class ResidueSystem::index(const Elem& x) const {
  switch (P_.kind) {
    case PrimeKind::rational:
      return fmod(x.a, pl_);
    case PrimeKind::split:
      return fmod(x.a + x.b * root_pl_, pl_);
    case PrimeKind::inert:
      return fmod(x.a, pl_) + pl_ * fmod(x.b, pl_);
    case PrimeKind::ramified: {
      // P^(2m) = (p^m); the class of x mod P^(2m+1) is additionally cut out
      // by the image of (x - x mod p^m)/p^m in O/P = F_p.
      long m = l_ / 2;
      mpz_class pm;
      mpz_pow_ui(pm.get_mpz_t(), P_.p.get_mpz_t(), m);
      mpz_class a0 = fmod(x.a, pm), b0 = fmod(x.b, pm);
      mpz_class idx = a0 + pm * b0;
      if (l_ % 2 == 1) {
        mpz_class a1 = fdiv(x.a - a0, pm), b1 = fdiv(x.b - b0, pm);
        mpz_class t = fmod(a1 + b1 * P_.c, P_.p);
        idx += pm * pm * t;
      }
      return idx;
    }
  }
  throw InvariantError("residue index: bad prime kind");
}

std::vector<Elem> ResidueSystem::representatives(long cap) const {
  if (count_ > cap) throw CapError("residue class count exceeds cap");
  long n = count_.get_si();
  std::vector<Elem> reps;
  reps.reserve(n);
  switch (P_.kind) {
    case PrimeKind::rational:
    case PrimeKind::split: {
      for (long r = 0; r < n; ++r) reps.emplace_back(mpz_class(r), mpz_class(0));
      break;
    }
    case PrimeKind::inert: {
      long q = pl_.get_si();
      for (long i = 0; i < q; ++i)
        for (long j = 0; j < q; ++j) reps.emplace_back(mpz_class(i), mpz_class(j));
      break;
    }
    case PrimeKind::ramified: {
      long m = l_ / 2;
      mpz_class pm;
      mpz_pow_ui(pm.get_mpz_t(), P_.p.get_mpz_t(), m);
      long q = pm.get_si();
      long arange = (l_ % 2 == 1) ? q * P_.p.get_si() : q;
      for (long j = 0; j < q; ++j)
        for (long i = 0; i < arange; ++i) reps.emplace_back(mpz_class(i), mpz_class(j));
      break;
    }
  }
  return reps;
}

std::vector<Elem> residue_classes(const QuadraticField& k, const PrimeIdeal& P, long l,
                                  long cap) {
  return ResidueSystem(k, P, l).representatives(cap);
}

std::vector<PrimeIdeal> prime_ideals_norm_up_to(const QuadraticField& k, long X) {
  std::vector<PrimeIdeal> out;
  for (long p = 2; p <= X; ++p) {
    if (!is_prime(mpz_class(p))) continue;
    for (auto& P : factor_rational_prime(k, mpz_class(p)))
      if (P.residue_norm() <= X) out.push_back(P);
  }
  std::sort(out.begin(), out.end(), [](const PrimeIdeal& A, const PrimeIdeal& B) {
    if (A.residue_norm() != B.residue_norm()) return A.residue_norm() < B.residue_norm();
    if (A.p != B.p) return A.p < B.p;
    return A.c < B.c;
  });
  return out;
}

}  // namespace nopt
