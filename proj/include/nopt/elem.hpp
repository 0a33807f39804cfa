#pragma once

#include <cstdint>
#include <functional>
#include <string>

#include <gmpxx.h>

namespace nopt {

// Element a + b*omega of O_k, coordinates exact. The meaning of omega is
// carried by the field (sqrt(d) or (1+sqrt(d))/2). For k = Q elements are
// kept in canonical form b = 0.
struct Elem {
  mpz_class a, b;

  Elem() : a(0), b(0) {}
  Elem(mpz_class a_, mpz_class b_) : a(std::move(a_)), b(std::move(b_)) {}
  explicit Elem(long n) : a(n), b(0) {}

  bool operator==(const Elem& o) const { return a == o.a && b == o.b; }
  bool operator!=(const Elem& o) const { return !(*this == o); }
  bool is_zero() const { return a == 0 && b == 0; }

  Elem operator+(const Elem& o) const { return {a + o.a, b + o.b}; }
  Elem operator-(const Elem& o) const { return {a - o.a, b - o.b}; }
  Elem operator-() const { return {-a, -b}; }

  // total order used for deterministic tie-breaking: lexicographic on (a, b)
  bool operator<(const Elem& o) const {
    if (a != o.a) return a < o.a;
    return b < o.b;
  }
};

struct ElemHash {
  size_t operator()(const Elem& x) const {
    std::hash<std::string> h;
    return h(x.a.get_str()) * 1315423911u ^ h(x.b.get_str());
  }
};

// A point of V = R^{r1} x C^{r2}. Semantics depend on the field:
//   real quadratic: (sigma_1(x), sigma_2(x))
//   imaginary quadratic: (Re z, Im z) of the single complex coordinate
//   Q: (x, unused)
struct VPoint {
  double v0 = 0.0, v1 = 0.0;
};

}  // namespace nopt
