#include "nopt/field.hpp"

#include <cmath>
#include <map>
#include <mutex>
#include <set>

namespace nopt {

namespace {

// sign of A + B*sqrt(d), exact (d > 0, value known irrational unless A=B=0)
int sign_surd(const mpz_class& A, const mpz_class& B, long d) {
  if (B == 0) return sgn(A);
  if (A == 0) return sgn(B);
  if (A > 0 && B > 0) return 1;
  if (A < 0 && B < 0) return -1;
  mpz_class lhs = A * A, rhs = B * B * d;
  int cmp_big = lhs > rhs ? 1 : -1;  // |A| vs |B|sqrt(d)
  if (A > 0) return cmp_big;         // B < 0
  return -cmp_big;                   // A < 0, B > 0
}

// sigma_1(x) sign for real quadratic (omega -> +sqrt(d) branch), exact.
int sign_sigma1(long d, bool half, const Elem& x) {
  if (!half) return sign_surd(x.a, x.b, d);
  return sign_surd(2 * x.a + x.b, x.b, d);
}

struct CFState {
  mpz_class P, Q, D;
};

// Fundamental unit by continued-fraction expansion of omega. Convergents
// p_n/q_n give candidates u_n = p_n - q_n * conj(omega); the first one with
// |N(u)| = 1 (and u != +-1) is fundamental.
Elem fundamental_unit_cf(long d, bool half, int* unit_norm) {
  mpz_class D = d;
  CFState st;
  if (half) {
    st = {1, 2, D};
  } else {
    st = {0, 1, D};
  }
  mpz_class s;
  mpz_sqrt(s.get_mpz_t(), D.get_mpz_t());
  mpz_class pm1 = 1, p0, qm1 = 0, q0;
  bool first = true;
  auto norm_of = [&](const mpz_class& p, const mpz_class& q) -> mpz_class {
    // u = p - q*conj(omega); N(u) = p^2 - d q^2 (plain), p^2 - pq + q^2(1-d)/4 (half)
    if (!half) return p * p - D * q * q;
    return p * p - p * q + q * q * ((1 - D) / 4);
  };
  for (long iter = 0; iter < 5000000; ++iter) {
    if (st.Q <= 0) throw InvariantError("cf: nonpositive Q");
    mpz_class a = fdiv(st.P + s, st.Q);
    mpz_class p = first ? a : a * p0 + pm1;
    mpz_class q = first ? mpz_class(1) : a * q0 + qm1;
    if (first) {
      pm1 = 1;
      qm1 = 0;
    } else {
      pm1 = p0;
      qm1 = q0;
    }
    p0 = p;
    q0 = q;
    first = false;
    mpz_class N = norm_of(p, q);
    if (N == 1 || N == -1) {
      Elem u = half ? Elem(p - q, q) : Elem(p, q);
      if (!(u.b == 0 && (u.a == 1 || u.a == -1))) {
        *unit_norm = (N == 1) ? 1 : -1;
        return u;
      }
    }
    mpz_class Pn = a * st.Q - st.P;
    mpz_class Qn = (st.D - Pn * Pn) / st.Q;
    st.P = Pn;
    st.Q = Qn;
  }
  throw InvariantError("cf: fundamental unit not found (iteration cap)");
}

long class_number_imaginary(const mpz_class& disc) {
  // reduced positive forms (a,b,c), b^2-4ac = disc < 0
  long h = 0;
  mpz_class absD = -disc;
  for (mpz_class a = 1; 3 * a * a <= absD; ++a) {
    for (mpz_class b = -a + 1; b <= a; ++b) {
      if (fmod(b - disc, mpz_class(2)) != 0) continue;
      mpz_class t = b * b - disc;
      if (t % (4 * a) != 0) continue;
      mpz_class c = t / (4 * a);
      if (c < a) continue;
      if (a == c && b < 0) continue;
      ++h;
    }
  }
  return h;
}

struct Form {
  long a, b, c;
  bool operator<(const Form& o) const {
    if (a != o.a) return a < o.a;
    if (b != o.b) return b < o.b;
    return c < o.c;
  }
};

// narrow class number of a real quadratic field: cycles of reduced
// indefinite forms under the reduction operator rho
long narrow_class_number_real(long D) {
  long s = (long)std::sqrt((double)D);
  while ((s + 1) * (s + 1) <= D) ++s;
  while (s * s > D) --s;
  std::set<Form> reduced;
  for (long b = 1; b <= s; ++b) {
    if (b * b >= D) break;
    if ((D - b * b) % 4 != 0) continue;
    long m = (D - b * b) / 4;  // = -a*c > 0
    for (long u = 1; u * u <= m; ++u) {
      if (m % u != 0) continue;
      long divs[2] = {u, m / u};
      int ndiv = (u == m / u) ? 1 : 2;
      for (int di = 0; di < ndiv; ++di) {
        long aa = divs[di];
        // reduced iff |sqrt(D) - 2|a|| < b < sqrt(D); exact integer form:
        // twoA - b < sqrt(D) < twoA + b
        long twoA = 2 * aa;
        bool ok = (D < (twoA + b) * (twoA + b));
        if (ok && twoA >= b) ok = ((twoA - b) * (twoA - b) < D);
        if (!ok) continue;
        reduced.insert({aa, b, -m / aa});
        reduced.insert({-aa, b, m / aa});
      }
    }
  }
  // count rho-cycles
  auto rho = [&](const Form& f) -> Form {
    long cc = f.c;
    long m2 = 2 * std::labs(cc);
    long base = ((-f.b) % m2 + m2) % m2;
    long r = base + m2 * (long)std::floor((double)(s - base) / (double)m2);
    while (r > s) r -= m2;
    while (r + m2 <= s) r += m2;
    long cn = (r * r - D) / (4 * cc);
    return {cc, r, cn};
  };
  std::set<Form> seen;
  long cycles = 0;
  for (const auto& f : reduced) {
    if (seen.count(f)) continue;
    ++cycles;
    Form g = f;
    for (long guard = 0; guard < 4000000; ++guard) {
      seen.insert(g);
      g = rho(g);
      if (g.a == f.a && g.b == f.b && g.c == f.c) break;
      if (!reduced.count(g)) throw InvariantError("form reduction left reduced set");
    }
  }
  return cycles;
}

}  // namespace

QuadraticField::QuadraticField(long d) : d_(d) {
  if (d == 0 || !is_squarefree(mpz_class(d)))
    throw ParseError("field parameter must be a nonzero squarefree integer");
  if (std::labs(d) > 1000000) throw CapError("|d| exceeds the 10^6 support cap");
  if (d == 1) {
    disc_ = 1;
    omega_half_ = true;  // omega = (1+1)/2 = 1; elements are kept with b = 0
    degree_ = 1;
    r1_ = 1;
    r2_ = 0;
    torsion_ = 2;
    class_number_ = 1;
    regulator_ = 1.0;
    omega1_ = 1.0;
    omega2_ = 1.0;
    omega_re_ = 1.0;
    omega_im_ = 0.0;
    torsion_units_ = {Elem(1), Elem(-1)};
    return;
  }
  degree_ = 2;
  bool mod1 = ((d % 4 + 4) % 4) == 1;
  omega_half_ = mod1;
  disc_ = mod1 ? mpz_class(d) : mpz_class(4) * d;
  if (d > 1) {
    r1_ = 2;
    r2_ = 0;
    double sq = std::sqrt((double)d);
    omega1_ = mod1 ? (1 + sq) / 2 : sq;
    omega2_ = mod1 ? (1 - sq) / 2 : -sq;
    omega_re_ = omega1_;
    omega_im_ = 0;
    torsion_ = 2;
    torsion_units_ = {Elem(1), Elem(-1)};
    int en = 0;
    Elem eps = fundamental_unit_cf(d, omega_half_, &en);
    // normalize: sigma_1(eps) > 1
    mpz_class N = omega_half_
                      ? mpz_class(eps.a * eps.a + eps.a * eps.b +
                                  eps.b * eps.b * ((1 - mpz_class(d)) / 4))
                      : mpz_class(eps.a * eps.a - mpz_class(d) * eps.b * eps.b);
    Elem inv = omega_half_ ? Elem(eps.a + eps.b, -eps.b) : Elem(eps.a, -eps.b);  // conj
    if (N == -1) inv = -inv;
    // |sigma_1(eps)| < 1 iff |sigma_1(inv)| > 1; decide exactly via sign tricks:
    // sigma_1(eps)*sigma_1(inv) = +-1, compare |sigma_1| with 1 by comparing
    // |a + b w| vs 1; use (a,b) magnitudes: N(eps - since |N|=1, |s1| > 1 iff
    // |s1| > |s2| iff s1^2 > s2^2 iff (s1-s2)(s1+s2) > 0.
    {
      // s1 - s2 = b*sqrt(d) (plain) or b*sqrt(d) (half); s1 + s2 = 2a (plain) or 2a+b (half)
      mpz_class sum = omega_half_ ? mpz_class(2 * eps.a + eps.b) : mpz_class(2 * eps.a);
      int sign_diff = sgn(eps.b);
      int sign_sum = sgn(sum);
      if (sign_diff * sign_sum < 0) eps = inv;  // |sigma_1| < 1, take inverse
    }
    if (sign_sigma1(d, omega_half_, eps) < 0) eps = -eps;
    fundamental_unit_ = eps;
    eps_norm_ = en;
    // R = log sigma_1(eps), computed stably from log|N of big part|
    {
      long e1;
      mpz_class A = omega_half_ ? 2 * eps.a + eps.b : eps.a;
      mpz_class B = eps.b;
      double da = mpz_get_d_2exp(&e1, A.get_mpz_t());
      long e2;
      double db = mpz_get_d_2exp(&e2, B.get_mpz_t());
      long m = std::max(e1, e2);
      double sq2 = std::sqrt((double)d);
      double t = da * std::pow(2.0, double(e1 - m)) + db * std::pow(2.0, double(e2 - m)) * sq2;
      if (omega_half_) t /= 2;
      regulator_ = m * std::log(2.0) + std::log(std::fabs(t));
    }
    long hplus = narrow_class_number_real(to_long_checked(disc_, "disc"));
    class_number_ = (en == -1) ? hplus : hplus / 2;
  } else {
    r1_ = 0;
    r2_ = 1;
    double sq = std::sqrt((double)-d);
    if (mod1) {
      omega_re_ = 0.5;
      omega_im_ = sq / 2;
    } else {
      omega_re_ = 0.0;
      omega_im_ = sq;
    }
    omega1_ = omega_re_;
    omega2_ = omega_im_;
    regulator_ = 1.0;
    if (d == -1) {
      torsion_ = 4;
      torsion_units_ = {Elem(1), Elem(mpz_class(0), mpz_class(1)), Elem(-1),
                        Elem(mpz_class(0), mpz_class(-1))};
    } else if (d == -3) {
      torsion_ = 6;
      torsion_units_ = {Elem(1),
                        Elem(mpz_class(0), mpz_class(1)),
                        Elem(mpz_class(-1), mpz_class(1)),
                        Elem(-1),
                        Elem(mpz_class(0), mpz_class(-1)),
                        Elem(mpz_class(1), mpz_class(-1))};
    } else {
      torsion_ = 2;
      torsion_units_ = {Elem(1), Elem(-1)};
    }
    class_number_ = class_number_imaginary(disc_);
  }
}

const Elem& QuadraticField::fundamental_unit() const {
  if (!fundamental_unit_) throw InvariantError("fundamental unit only exists for d > 1");
  return *fundamental_unit_;
}

const QuadraticField& QuadraticField::get(long d) {
  static std::mutex mu;
  static std::map<long, const QuadraticField*> cache;
  std::lock_guard<std::mutex> lock(mu);
  auto it = cache.find(d);
  if (it == cache.end()) it = cache.emplace(d, new QuadraticField(d)).first;
  return *it->second;
}

const QuadraticField& QuadraticField::parse(const std::string& spec) {
  if (spec == "Q") return get(1);
  if (spec == "Q(i)") return get(-1);
  const std::string pre = "Q(sqrt:";
  if (spec.rfind(pre, 0) == 0 && spec.back() == ')') {
    std::string num = spec.substr(pre.size(), spec.size() - pre.size() - 1);
    try {
      size_t pos = 0;
      long d = std::stol(num, &pos);
      if (pos != num.size()) throw std::invalid_argument("trailing");
      return get(d);
    } catch (const std::exception&) {
      throw ParseError("bad field spec: " + spec);
    }
  }
  throw ParseError("bad field spec: " + spec + " (expected Q, Q(i), or Q(sqrt:D))");
}

std::string QuadraticField::spec_string() const {
  if (d_ == 1) return "Q";
  if (d_ == -1) return "Q(i)";
  return "Q(sqrt:" + std::to_string(d_) + ")";
}

std::string QuadraticField::omega_string() const {
  if (d_ == 1) return "w=1";
  if (omega_half_) return "w=(1+sqrt(" + std::to_string(d_) + "))/2";
  return "w=sqrt(" + std::to_string(d_) + ")";
}

}  // namespace nopt
