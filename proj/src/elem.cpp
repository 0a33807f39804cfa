#include <cctype>
#include <cmath>

#include "nopt/field.hpp"

namespace nopt {

Elem canon(const QuadraticField& k, const Elem& x) {
  if (k.is_rational() && x.b != 0) return Elem(x.a + x.b, 0);
  return x;
}

Elem mul(const QuadraticField& k, const Elem& x, const Elem& y) {
  if (k.is_rational()) return Elem(x.a * y.a, 0);
  if (k.omega_half()) {
    mpz_class m = (mpz_class(k.d()) - 1) / 4;  // omega^2 = omega + m
    return Elem(x.a * y.a + x.b * y.b * m, x.a * y.b + x.b * y.a + x.b * y.b);
  }
  return Elem(x.a * y.a + mpz_class(k.d()) * x.b * y.b, x.a * y.b + x.b * y.a);
}

Elem conj(const QuadraticField& k, const Elem& x) {
  if (k.is_rational()) return x;
  if (k.omega_half()) return Elem(x.a + x.b, -x.b);
  return Elem(x.a, -x.b);
}

mpz_class norm(const QuadraticField& k, const Elem& x) {
  if (k.is_rational()) return x.a;
  if (k.omega_half()) {
    mpz_class m = (mpz_class(k.d()) - 1) / 4;
    return x.a * x.a + x.a * x.b - m * x.b * x.b;
  }
  return x.a * x.a - mpz_class(k.d()) * x.b * x.b;
}

mpz_class abs_norm(const QuadraticField& k, const Elem& x) { return abs(norm(k, x)); }

mpz_class trace(const QuadraticField& k, const Elem& x) {
  if (k.is_rational()) return x.a;
  if (k.omega_half()) return 2 * x.a + x.b;
  return 2 * x.a;
}

bool is_unit(const QuadraticField& k, const Elem& x) {
  mpz_class n = norm(k, x);
  return n == 1 || n == -1;
}

std::optional<Elem> divide_exact(const QuadraticField& k, const Elem& x, const Elem& y) {
  if (y.is_zero()) return std::nullopt;
  if (k.is_rational()) {
    if (x.a % y.a != 0) return std::nullopt;
    return Elem(x.a / y.a, 0);
  }
  mpz_class n = norm(k, y);
  Elem t = mul(k, x, conj(k, y));
  if (t.a % n != 0 || t.b % n != 0) return std::nullopt;
  return Elem(t.a / n, t.b / n);
}

Elem unit_pow(const QuadraticField& k, const Elem& u, long e) {
  Elem base = u;
  if (e < 0) {
    mpz_class n = norm(k, u);
    if (n != 1 && n != -1) throw InvariantError("unit_pow on a non-unit");
    base = conj(k, u);
    if (n == -1) base = -base;
    e = -e;
  }
  Elem acc(1);
  while (e > 0) {
    if (e & 1) acc = mul(k, acc, base);
    base = mul(k, base, base);
    e >>= 1;
  }
  return acc;
}

VPoint embed(const QuadraticField& k, const Elem& x) {
  double a = to_double(x.a), b = to_double(x.b);
  if (k.is_rational()) return {a, 0.0};
  if (k.is_real_quadratic()) return {a + b * k.omega1(), a + b * k.omega2()};
  return {a + b * k.omega_re(), b * k.omega_im()};
}

std::pair<double, double> embed_logs(const QuadraticField& k, const Elem& x) {
  if (x.is_zero()) throw InvariantError("embed_logs(0)");
  if (k.is_rational()) return {log_abs(x.a), 0.0};
  if (k.is_imaginary()) {
    double l = 0.5 * log_abs(norm(k, x));
    return {l, l};
  }
  // real quadratic: sigma = (A + B sqrt(d)) / den with den = 1 or 2
  mpz_class A = k.omega_half() ? 2 * x.a + x.b : x.a;
  mpz_class B = x.b;
  double den = k.omega_half() ? 2.0 : 1.0;
  double sq = std::sqrt((double)k.d());
  auto scaled = [&](int sign_b) -> std::optional<double> {
    long ea = 0, eb = 0;
    double da = (A == 0) ? 0.0 : mpz_get_d_2exp(&ea, A.get_mpz_t());
    double db = (B == 0) ? 0.0 : mpz_get_d_2exp(&eb, B.get_mpz_t());
    long m = std::max(A == 0 ? eb : ea, B == 0 ? ea : eb);
    double t = 0;
    if (A != 0) t += da * std::pow(2.0, double(ea - m));
    if (B != 0) t += sign_b * db * std::pow(2.0, double(eb - m)) * sq;
    double mag = std::fabs(da) + std::fabs(db) * sq;
    if (std::fabs(t) < 1e-9 * std::max(1e-300, mag)) return std::nullopt;  // cancellation
    return m * std::log(2.0) + std::log(std::fabs(t)) - std::log(den);
  };
  auto l1 = scaled(+1), l2 = scaled(-1);
  double logN = log_abs(norm(k, x));
  if (!l1 && !l2) throw InvariantError("embed_logs: double cancellation");
  if (!l1) l1 = logN - *l2;
  if (!l2) l2 = logN - *l1;
  return {*l1, *l2};
}

namespace {

// sign of A + B*sqrt(d); exact for d > 0 (irrational surd unless A = B = 0)
int surd_sign(const mpz_class& A, const mpz_class& B, long d) {
  if (B == 0) return sgn(A);
  if (A == 0) return sgn(B);
  if (A > 0 && B > 0) return 1;
  if (A < 0 && B < 0) return -1;
  int big = (A * A > B * B * d) ? 1 : -1;
  return A > 0 ? big : -big;
}

}  // namespace

int sigma_sign(const QuadraticField& k, const Elem& x, int place) {
  if (k.is_rational()) return sgn(x.a);
  if (k.is_imaginary()) throw InvariantError("sigma_sign on a complex place");
  long s = place == 0 ? 1 : -1;
  if (k.omega_half()) return surd_sign(2 * x.a + x.b, s * x.b, k.d());
  return surd_sign(x.a, s * x.b, k.d());
}

VPoint embed_direction(const QuadraticField& k, const Elem& x) {
  if (x.is_zero()) return {0, 0};
  long ea = 0, eb = 0;
  double da = (x.a == 0) ? 0.0 : mpz_get_d_2exp(&ea, x.a.get_mpz_t());
  double db = (x.b == 0) ? 0.0 : mpz_get_d_2exp(&eb, x.b.get_mpz_t());
  long m = std::max(x.a == 0 ? eb : ea, x.b == 0 ? ea : eb);
  double a = (x.a == 0) ? 0.0 : da * std::pow(2.0, double(ea - m));
  double b = (x.b == 0) ? 0.0 : db * std::pow(2.0, double(eb - m));
  if (k.is_rational()) return {a, 0};
  if (k.is_real_quadratic()) return {a + b * k.omega1(), a + b * k.omega2()};
  return {a + b * k.omega_re(), b * k.omega_im()};
}

VPoint vadd(const QuadraticField&, const VPoint& s, const VPoint& t) {
  return {s.v0 + t.v0, s.v1 + t.v1};
}
VPoint vsub(const QuadraticField&, const VPoint& s, const VPoint& t) {
  return {s.v0 - t.v0, s.v1 - t.v1};
}

VPoint vmul(const QuadraticField& k, const VPoint& s, const VPoint& t) {
  if (k.is_imaginary()) return {s.v0 * t.v0 - s.v1 * t.v1, s.v0 * t.v1 + s.v1 * t.v0};
  return {s.v0 * t.v0, s.v1 * t.v1};
}

VPoint vinv(const QuadraticField& k, const VPoint& t) {
  if (k.is_imaginary()) {
    double n = t.v0 * t.v0 + t.v1 * t.v1;
    if (n == 0) throw InvariantError("vinv(0)");
    return {t.v0 / n, -t.v1 / n};
  }
  if (k.is_rational()) {
    if (t.v0 == 0) throw InvariantError("vinv(0)");
    return {1.0 / t.v0, 0.0};
  }
  if (t.v0 == 0 || t.v1 == 0) throw InvariantError("vinv: point not in V^x");
  return {1.0 / t.v0, 1.0 / t.v1};
}

VPoint vscale(const QuadraticField&, double c, const VPoint& t) { return {c * t.v0, c * t.v1}; }

double pnorm(const QuadraticField& k, const VPoint& v) {
  if (k.is_rational()) return std::fabs(v.v0);
  if (k.is_imaginary()) return v.v0 * v.v0 + v.v1 * v.v1;
  return std::fabs(v.v0 * v.v1);
}

// ---- element strings ----------------------------------------------------------

namespace {

bool parse_int(const std::string& s, size_t& i, mpz_class& out, bool sign_required) {
  size_t j = i;
  int sign = 1;
  if (j < s.size() && (s[j] == '+' || s[j] == '-')) {
    sign = s[j] == '-' ? -1 : 1;
    ++j;
  } else if (sign_required) {
    return false;
  }
  size_t k = j;
  while (k < s.size() && std::isdigit((unsigned char)s[k])) ++k;
  if (k == j) {
    out = sign;  // bare sign, coefficient 1 (used for "+w" / "-w")
    i = j;
    return true;
  }
  out = mpz_class(s.substr(j, k - j)) * sign;
  i = k;
  return true;
}

}  // namespace

Elem parse_elem(const QuadraticField& k, const std::string& raw) {
  std::string s;
  for (char c : raw)
    if (!std::isspace((unsigned char)c)) s += c;
  if (s.empty()) throw ParseError("empty element string");
  if (s == "i" || s == "+i" || s == "-i") {
    if (k.d() != -1) throw ParseError("'i' only valid in Q(i)");
    return Elem(mpz_class(0), mpz_class(s[0] == '-' ? -1 : 1));
  }
  mpz_class a = 0, b = 0;
  size_t i = 0;
  bool first = true;
  while (i < s.size()) {
    mpz_class coef;
    size_t before = i;
    if (!parse_int(s, i, coef, /*sign_required=*/!first))
      throw ParseError("bad element string: " + raw);
    if (i < s.size() && (s[i] == '*' || s[i] == 'w')) {
      if (s[i] == '*') {
        ++i;
        if (i >= s.size() || s[i] != 'w') throw ParseError("bad element string: " + raw);
      }
      ++i;  // consume 'w'
      b += coef;
    } else {
      if (i == before || (i > before && !std::isdigit((unsigned char)s[i - 1])))
        throw ParseError("bad element string: " + raw);
      a += coef;
    }
    first = false;
  }
  return canon(k, Elem(a, b));
}

std::string format_elem(const QuadraticField& k, const Elem& x) {
  if (k.is_rational()) return x.a.get_str();
  std::string out = x.a.get_str();
  if (x.b >= 0)
    out += "+" + x.b.get_str() + "*w";
  else
    out += "-" + mpz_class(-x.b).get_str() + "*w";
  return out;
}

// ---- lattice enumeration --------------------------------------------------------

void for_lattice_in_bbox(const QuadraticField& k, double lo0, double hi0, double lo1,
                         double hi1, long cap,
                         const std::function<void(long, long, const VPoint&)>& fn) {
  if (!(lo0 <= hi0)) return;
  long count = 0;
  auto emit = [&](long p, long q) {
    if (++count > cap) throw CapError("lattice enumeration cap exceeded");
    Elem x{mpz_class(p), mpz_class(q)};
    fn(p, q, embed(k, x));
  };
  auto lo_hi_long = [&](double lo, double hi) -> std::pair<long, long> {
    if (hi < lo) std::swap(lo, hi);
    double l = std::floor(lo) - 1, h = std::ceil(hi) + 1;
    if (l < -9e17 || h > 9e17) throw CapError("lattice range out of long bounds");
    return {(long)l, (long)h};
  };
  if (k.is_rational()) {
    auto [plo, phi] = lo_hi_long(lo0, hi0);
    for (long p = plo; p <= phi; ++p)
      if ((double)p >= lo0 - 1 && (double)p <= hi0 + 1) emit(p, 0);
    return;
  }
  if (!(lo1 <= hi1)) return;
  if (k.is_imaginary()) {
    double wim = k.omega_im(), wre = k.omega_re();
    auto [qlo, qhi] = lo_hi_long(lo1 / wim, hi1 / wim);
    for (long q = qlo; q <= qhi; ++q) {
      double y = q * wim;
      if (y < lo1 - wim || y > hi1 + wim) continue;
      auto [plo, phi] = lo_hi_long(lo0 - q * wre, hi0 - q * wre);
      for (long p = plo; p <= phi; ++p) emit(p, q);
    }
    return;
  }
  double w1 = k.omega1(), w2 = k.omega2();  // w1 > w2
  double dw = w1 - w2;
  auto [qlo, qhi] = lo_hi_long((lo0 - hi1) / dw, (hi0 - lo1) / dw);
  for (long q = qlo; q <= qhi; ++q) {
    double alo = lo0 - q * w1, ahi = hi0 - q * w1;
    double blo = lo1 - q * w2, bhi = hi1 - q * w2;
    double plo_d = std::max(alo, blo), phi_d = std::min(ahi, bhi);
    if (phi_d < plo_d - 2) continue;
    auto [plo, phi] = lo_hi_long(plo_d, phi_d);
    for (long p = plo; p <= phi; ++p) emit(p, q);
  }
}

}  // namespace nopt
