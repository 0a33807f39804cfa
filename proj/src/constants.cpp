#include "nopt/constants.hpp"

#include <cmath>
#include <map>
#include <mutex>
#include <vector>

namespace nopt {

namespace {

const double kBernoulli[] = {1.0 / 6,  -1.0 / 30, 1.0 / 42,
                             -1.0 / 30, 5.0 / 66,  -691.0 / 2730};

// period table of the Kronecker character chi_disc
const std::vector<int>& chi_table(const QuadraticField& k) {
  static std::mutex mu;
  static std::map<long, std::vector<int>> cache;
  std::lock_guard<std::mutex> lock(mu);
  auto it = cache.find(k.d());
  if (it != cache.end()) return it->second;
  long q = to_long_checked(abs(k.disc()), "disc");
  std::vector<int> t(q);
  for (long n = 0; n < q; ++n) t[n] = kronecker(k.disc(), mpz_class(n));
  return cache.emplace(k.d(), std::move(t)).first->second;
}

// max absolute partial sum of chi over one period (used in Abel tail bounds)
double chi_partial_bound(const QuadraticField& k) {
  const auto& t = chi_table(k);
  double s = 0, mx = 0;
  for (size_t n = 1; n < t.size(); ++n) {
    s += t[n];
    mx = std::max(mx, std::fabs(s));
  }
  return std::max(1.0, mx);
}

}  // namespace

double euler_mascheroni() {
  // Euler-Maclaurin on the harmonic sum
  const long n = 2000;
  double h = 0;
  for (long i = 1; i <= n; ++i) h += 1.0 / i;
  double x = (double)n;
  double g = h - std::log(x) - 1 / (2 * x) + 1 / (12 * x * x) - 1 / (120 * std::pow(x, 4)) +
             1 / (252 * std::pow(x, 6));
  return g;
}

double hurwitz_zeta(double s, double x) {
  if (s <= 1) throw ParseError("hurwitz_zeta: s <= 1");
  const long N = 40;
  double sum = 0;
  for (long n = 0; n < N; ++n) sum += std::pow(n + x, -s);
  double Nx = N + x;
  sum += std::pow(Nx, 1 - s) / (s - 1);
  sum += 0.5 * std::pow(Nx, -s);
  double rising = s;  // s (s+1) ... (s+2j-2)
  double pw = std::pow(Nx, -s - 1);
  double fact = 2;  // (2j)!
  for (int j = 1; j <= 6; ++j) {
    sum += kBernoulli[j - 1] / fact * rising * pw;
    rising *= (s + 2 * j - 1) * (s + 2 * j);
    pw /= Nx * Nx;
    fact *= (2 * j + 1) * (2 * j + 2);
  }
  return sum;
}

double dirichlet_l(const QuadraticField& k, double s) {
  const auto& t = chi_table(k);
  long q = (long)t.size();
  double sum = 0;
  for (long a = 1; a < q; ++a)
    if (t[a] != 0) sum += t[a] * hurwitz_zeta(s, (double)a / q);
  return std::pow((double)q, -s) * sum;
}

ValueWithError residue_rho(const QuadraticField& k) {
  if (k.is_rational()) return {1.0, 1e-15};
  double rho = std::pow(2.0, k.r1()) * std::pow(2 * M_PI, k.r2()) * k.class_number() *
               k.regulator() /
               (k.torsion_order() * std::sqrt(to_double(abs(k.disc()))));
  return {rho, 1e-12 * std::fabs(rho) + 1e-15};
}

ValueWithError dirichlet_l_prime_at_1(const QuadraticField& k, long term_cap) {
  // L'(1) = - sum chi(n) log(n)/n, Abel tail bound 2 c_chi log(M)/M
  const auto& t = chi_table(k);
  long q = (long)t.size();
  long M = std::max(1000L, term_cap);
  double sum = 0;
  for (long n = 2; n <= M; ++n) {
    int c = t[n % q];
    if (c) sum += c * std::log((double)n) / n;
  }
  double cchi = chi_partial_bound(k);
  double tail = 2 * cchi * std::log((double)M) / (double)M;
  return {-sum, tail + 1e-12};
}

namespace {

// Laurent route: gamma_k = lim (zeta_k(s) - rho/(s-1))/rho at s -> 1+,
// Richardson-extrapolated over h, h/2, h/4, h/8
double gamma_laurent_route(const QuadraticField& k, double rho) {
  auto g = [&](double h) {
    double s = 1 + h;
    double zk = hurwitz_zeta(s, 1.0);
    if (!k.is_rational()) zk *= dirichlet_l(k, s);
    return (zk - rho / h) / rho;
  };
  const int m = 4;
  double h0 = 0.4;
  double tab[m][m];
  for (int i = 0; i < m; ++i) tab[i][0] = g(h0 / std::pow(2.0, i));
  for (int j = 1; j < m; ++j)
    for (int i = 0; i + j < m; ++i)
      tab[i][j] = (std::pow(2.0, j) * tab[i + 1][j - 1] - tab[i][j - 1]) /
                  (std::pow(2.0, j) - 1);
  return tab[0][m - 1];
}

}  // namespace

ValueWithError gamma_euler_kronecker(const QuadraticField& k, long term_cap) {
  double gq = euler_mascheroni();
  if (k.is_rational()) return {gq, 1e-12};
  ValueWithError L1 = residue_rho(k);  // L(1, chi) = rho_k for quadratic k
  ValueWithError Lp = dirichlet_l_prime_at_1(k, term_cap);
  double route_a = gq + Lp.value / L1.value;
  double err_a = Lp.error / L1.value + 1e-10;
  double route_b = gamma_laurent_route(k, L1.value);
  double err_b = 5e-5;  // extrapolation error estimate, validated in tests
  double gap = std::fabs(route_a - route_b);
  if (gap > err_a + err_b + 5e-5)
    throw CapError("gamma_k: evaluation routes disagree beyond stated precision");
  return {route_a, err_a};
}

ValueWithError energy_lower_constant(const QuadraticField& k, long term_cap) {
  if (k.is_rational()) return {-1.5, 1e-15};
  ValueWithError gk = gamma_euler_kronecker(k, term_cap);
  double gq = euler_mascheroni();
  double v = -0.5 * std::log(to_double(abs(k.disc()))) - 1.5 - gk.value + gq;
  return {v, gk.error + 1e-10};
}

const FieldConstants& field_constants(const QuadraticField& k, long term_cap) {
  struct Key {
    long d;
    long cap;
    bool operator<(const Key& o) const { return d != o.d ? d < o.d : cap < o.cap; }
  };
  static std::mutex mu;
  static std::map<Key, FieldConstants> cache;
  std::lock_guard<std::mutex> lock(mu);
  auto it = cache.find({k.d(), term_cap});
  if (it != cache.end()) return it->second;
  FieldConstants fc;
  fc.term_cap = term_cap;
  fc.gamma_Q = {euler_mascheroni(), 1e-12};
  fc.rho = residue_rho(k);
  if (!k.is_rational()) {
    fc.L1 = fc.rho;
    fc.L1prime = dirichlet_l_prime_at_1(k, term_cap);
    fc.gamma_k = gamma_euler_kronecker(k, term_cap);
    fc.route_gap =
        std::fabs(fc.gamma_k.value - gamma_laurent_route(k, fc.rho.value));
  } else {
    fc.L1 = {1.0, 0};
    fc.L1prime = {0.0, 0};
    fc.gamma_k = fc.gamma_Q;
  }
  fc.bound = energy_lower_constant(k, term_cap);
  return cache.emplace(Key{k.d(), term_cap}, fc).first->second;
}

}  // namespace nopt
