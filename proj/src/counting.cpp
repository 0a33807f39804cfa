#include "nopt/counting.hpp"

#include <algorithm>
#include <cmath>
#include <set>

namespace nopt {

namespace {

// true iff ||x|| * ||a - x*u|| <= X^2, all exact but the X^2 comparison
bool sax_condition(const QuadraticField& k, const Elem& x, const Elem& a, const Elem& y,
                   double X) {
  mpz_class prod = abs_norm(k, x) * abs_norm(k, a - y);
  return mpz_cmp_d(prod.get_mpz_t(), X * X) <= 0;
}

// enumerate the unit exponents b for which y = x * eps^{-b} * (+-1) can
// possibly satisfy ||x|| ||a - y|| <= X^2; certified by coordinate growth
template <class Fn>
void scan_unit_range(const QuadraticField& k, const Elem& x, const Elem& a, double X,
                     Fn&& visit) {
  if (k.unit_rank() == 0) {
    for (size_t i = 0; i < k.torsion_units().size(); ++i) visit(0L, (int)i);
    return;
  }
  double R = k.regulator();
  auto [lx1, lx2] = embed_logs(k, x);
  auto [la1, la2] = embed_logs(k, a);
  double lX2 = 2 * std::log(std::max(X, 1e-300));
  double budget = lX2 - (lx1 + lx2);  // need log ||a - y|| <= budget
  // y coords: |y_1| = |x_1| e^{-bR}, |y_2| = |x_2| e^{+bR}
  auto certified_done = [&](long b, int dir) {
    // dir=+1: b growing, |y_2| -> inf, |y_1| -> 0
    double ly_big = dir > 0 ? lx2 + b * R : lx1 - b * R;
    double la_big = dir > 0 ? la2 : la1;
    double la_small = dir > 0 ? la1 : la2;
    double ly_small = dir > 0 ? lx1 - b * R : lx2 + b * R;
    if (ly_small > la_small - std::log(2.0)) return false;  // small coord not yet tiny
    if (ly_big < la_big + std::log(2.0)) return false;      // big coord not yet dominant
    // ||a - y|| >= (|y_big| - |a_big|) * (|a_small| / 2) >= |y_big|/2 * |a_small|/2
    double lower = (ly_big - std::log(2.0)) + (la_small - std::log(2.0));
    return lower > budget;
  };
  for (int dir : {+1, -1}) {
    long b = dir > 0 ? 0 : -1;
    long guard = 0;
    while (true) {
      if (certified_done(b, dir)) break;
      for (size_t i = 0; i < k.torsion_units().size(); ++i) visit(b, (int)i);
      b += dir;
      if (++guard > 100000) throw CapError("unit scan guard exceeded");
    }
  }
}

}  // namespace

SaxRecord count_S_aX(const QuadraticField& k, const FundamentalDomain& F, const Elem& a,
                     double X, long M, long cap, double B) {
  if (a.is_zero()) throw ParseError("count_S_aX: a = 0");
  SaxRecord rec;
  rec.a = a;
  rec.X = X;
  rec.M = M;
  rec.slack_warning = log_abs(norm(k, a)) < std::log(std::max(X, 1e-300)) - B;
  const auto& tors = k.torsion_units();
  for_domain_points(k, F, X, cap, [&](const Elem& x, const VPoint&) {
    scan_unit_range(k, x, a, X, [&](long b, int ti) {
      // lambda = (tors[ti] * eps^b); y = x * lambda^{-1}
      Elem lam = tors[ti];
      if (k.unit_rank() == 1) lam = mul(k, lam, unit_pow(k, k.fundamental_unit(), b));
      Elem lam_inv = conj(k, lam);
      mpz_class nl = norm(k, lam);
      if (nl == -1) lam_inv = -lam_inv;
      Elem y = mul(k, x, lam_inv);
      if (!sax_condition(k, x, a, y, X)) return;
      SaxPair pr;
      pr.x = x;
      pr.lambda = lam;
      pr.unit_norm_inf = std::labs(b);
      rec.pairs.push_back(pr);
      if (pr.unit_norm_inf >= M) rec.tail_count++;
    });
  });
  std::sort(rec.pairs.begin(), rec.pairs.end(), [](const SaxPair& A, const SaxPair& B) {
    if (A.x != B.x) return A.x < B.x;
    return A.lambda < B.lambda;
  });
  rec.count = (long)rec.pairs.size();
  return rec;
}

NormPairCount count_norm_pairs(const QuadraticField& k, const Elem& a, double X,
                               bool keep_solutions, long cap) {
  if (a.is_zero()) throw ParseError("count_norm_pairs: a = 0");
  FundamentalDomain F = build_fundamental_domain(k);
  std::set<Elem> sols;
  sols.insert(Elem(0L));
  sols.insert(a);
  SaxRecord rec = count_S_aX(k, F, a, X, 0, cap);
  for (const auto& pr : rec.pairs) {
    Elem lam_inv = conj(k, pr.lambda);
    if (norm(k, pr.lambda) == -1) lam_inv = -lam_inv;
    Elem y = mul(k, pr.x, lam_inv);
    sols.insert(y);
    sols.insert(a - y);
  }
  NormPairCount out;
  out.count = (long)sols.size();
  if (keep_solutions) out.solutions.assign(sols.begin(), sols.end());
  return out;
}

RationalNumber kappa(int N) {
  if (N < 2) throw ParseError("kappa requires N >= 2");
  long d1 = 2L * N * (N - 1), d2 = 4L * N - 1;
  return {1, std::max(d1, d2)};
}

FitResult fit_count_scaling(const QuadraticField& k, const std::vector<Elem>& a_seq,
                            const std::vector<double>& X_grid) {
  if (a_seq.size() != X_grid.size() || a_seq.size() < 2)
    throw ParseError("fit: need matching sequences of length >= 2");
  std::vector<double> lx, ly;
  for (size_t i = 0; i < a_seq.size(); ++i) {
    long c = count_norm_pairs(k, a_seq[i], X_grid[i]).count;
    lx.push_back(std::log(X_grid[i]));
    ly.push_back(std::log((double)std::max(1L, c)));
  }
  double n = (double)lx.size(), sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (size_t i = 0; i < lx.size(); ++i) {
    sx += lx[i];
    sy += ly[i];
    sxx += lx[i] * lx[i];
    sxy += lx[i] * ly[i];
  }
  double denom = n * sxx - sx * sx;
  if (std::fabs(denom) < 1e-12) throw ParseError("fit: degenerate X grid");
  FitResult out;
  out.slope = (n * sxy - sx * sy) / denom;
  out.intercept = (sy - out.slope * sx) / n;
  for (size_t i = 0; i < lx.size(); ++i)
    out.residuals.push_back(ly[i] - (out.slope * lx[i] + out.intercept));
  RationalNumber kp = kappa(k.degree() == 1 ? 2 : k.degree());
  out.slope_minus_bound = out.slope - (1.0 + double(kp.num) / double(kp.den));
  return out;
}

UnitEqResult unit_equation_solutions(const QuadraticField& k, const Elem& a1, const Elem& a2,
                                     const Elem& a3, long exponent_bound) {
  if (a1.is_zero() || a2.is_zero() || a3.is_zero())
    throw ParseError("unit equation: coefficients must be nonzero");
  UnitEqResult out;
  // certified exponent range: beyond B*, one coordinate of a1*l1 outgrows
  // every unit-valued a3 - a1*l1 compatible with |N(a2 l2)| = |N(a2)|
  long Bstar = 0;
  if (k.unit_rank() == 1) {
    // For b large positive, |a1 l1|_2 shrinks so |z|_2 >= |a3|_2 / 2 while
    // |z|_1 >= |a1|_1 e^{bR} / 2; a unit-valued z = a2 l2 has fixed
    // |N(z)| = |N(a2)|, bounding e^{bR}. Symmetric for b large negative.
    double R = k.regulator();
    double l2c = std::log(2.0), l4c = std::log(4.0);
    auto [A11, A12] = embed_logs(k, a1);
    auto [A31, A32] = embed_logs(k, a3);
    double lN2 = log_abs(norm(k, a2));
    double bp = std::max({(l2c + A12 - A32) / R, (l2c + A31 - A11) / R,
                          (l4c + lN2 - A32 - A11) / R});
    double bm = std::max({(l2c + A11 - A31) / R, (l2c + A32 - A12) / R,
                          (l4c + lN2 - A31 - A12) / R});
    Bstar = (long)std::ceil(std::max({bp, bm, 0.0})) + 2;
  }
  out.certified_bound = Bstar;
  out.complete = exponent_bound >= Bstar;
  for (const auto& ue : units_with_exponents(k, exponent_bound)) {
    Elem z = a3 - mul(k, a1, ue.u);
    if (z.is_zero()) continue;
    auto q = divide_exact(k, z, a2);
    if (!q || !is_unit(k, *q)) continue;
    if (k.unit_rank() == 1) {
      // ||lambda2||_inf <= bound as well
      auto [l1, l2] = embed_logs(k, *q);
      long b2 = (long)std::llround(std::fabs(l1 - l2) / (2 * k.regulator()));
      if (b2 > exponent_bound) continue;
    }
    out.solutions.push_back({ue.u, *q});
  }
  std::sort(out.solutions.begin(), out.solutions.end(),
            [](const std::pair<Elem, Elem>& A, const std::pair<Elem, Elem>& B) {
              if (A.first != B.first) return A.first < B.first;
              return A.second < B.second;
            });
  out.nu = (long)out.solutions.size();
  return out;
}

AvgUnitEqResult average_unit_equation_sum(const QuadraticField& k, const Elem& a3, double X,
                                          long exponent_bound) {
  if (a3.is_zero()) throw ParseError("average unit equation: a3 = 0");
  FundamentalDomain F = build_fundamental_domain(k);
  AvgUnitEqResult out;
  long total = 2;  // x = 0 and x = a3 (degenerate orbits with a zero coefficient)
  std::vector<Elem> reps;
  for_domain_points(k, F, X * X, 100000000,
                    [&](const Elem& x, const VPoint&) { reps.push_back(x); });
  for (const Elem& r1 : reps) {
    mpz_class n1 = abs_norm(k, r1);
    for (const Elem& r2 : reps) {
      mpz_class prod = n1 * abs_norm(k, r2);
      if (mpz_cmp_d(prod.get_mpz_t(), X * X) > 0) continue;
      UnitEqResult ue = unit_equation_solutions(k, r1, r2, a3, exponent_bound);
      if (!ue.complete) ue = unit_equation_solutions(k, r1, r2, a3, ue.certified_bound);
      total += ue.nu;
    }
  }
  out.total = total;
  out.norm_pair_count = count_norm_pairs(k, a3, X).count;
  out.match = (out.total == out.norm_pair_count);
  return out;
}

IdealSumResult principal_ideal_sum(const QuadraticField& k, double X, int r, long cap) {
  if (X < 1) throw ParseError("principal_ideal_sum: X < 1");
  if (r < 0) throw ParseError("principal_ideal_sum: r < 0");
  FundamentalDomain F = build_fundamental_domain(k);
  IdealSumResult out;
  double lX = std::log(X);
  for_domain_points(k, F, X, cap, [&](const Elem& x, const VPoint&) {
    double t = lX - log_abs(norm(k, x));
    out.sum += (r == 0) ? 1.0 : std::pow(t, r);
    out.terms++;
  });
  double rho_over_h = std::pow(2.0, k.r1()) * std::pow(2 * M_PI, k.r2()) * k.regulator() /
                      (k.torsion_order() * std::sqrt(to_double(abs(k.disc()))));
  double rfact = 1;
  for (int i = 2; i <= r; ++i) rfact *= i;
  out.main_term = rfact * rho_over_h * X;
  out.ratio = out.sum / out.main_term;
  return out;
}

std::vector<SectorSurveyRow> sector_prime_survey(const QuadraticField& k, double r_lo,
                                                 double r_hi, double theta_lo,
                                                 double theta_hi,
                                                 const std::vector<double>& dilations,
                                                 int threads) {
  if (!k.is_imaginary()) throw ParseError("sector survey requires an imaginary quadratic field");
  std::vector<SectorSurveyRow> out(dilations.size());
  // rows are independent; the dilation index keeps the output deterministic
  parallel_chunks(0, (long)dilations.size(), threads, [&](long lo, long hi, int) {
    for (long idx = lo; idx < hi; ++idx) {
      double t = dilations[idx];
      SectorSurveyRow row;
      row.t = t;
      double Rhi = t * r_hi;
      for_lattice_in_bbox(k, -Rhi, Rhi, -Rhi, Rhi, 200000000,
                        [&](long p, long q, const VPoint& v) {
                          double rad = std::hypot(v.v0, v.v1);
                          if (rad < t * r_lo || rad > Rhi) return;
                          double th = std::atan2(v.v1, v.v0);
                          if (th < theta_lo || th > theta_hi) return;
                          row.points++;
                          Elem x{mpz_class(p), mpz_class(q)};
                          mpz_class nn = abs_norm(k, x);
                          if (is_prime(nn)) {
                            row.prime_points++;
                            return;
                          }
                          // associate of an inert rational prime: N = p^2, x = unit * p
                          mpz_class rt;
                          mpz_sqrt(rt.get_mpz_t(), nn.get_mpz_t());
                          if (rt * rt == nn && is_prime(rt) &&
                              kronecker(k.disc(), rt) == -1) {
                            auto qd = divide_exact(k, x, Elem(rt, 0));
                            if (qd && is_unit(k, *qd)) row.prime_points++;
                          }
                        });
      out[idx] = row;
    }
  });
  return out;
}

}  // namespace nopt
