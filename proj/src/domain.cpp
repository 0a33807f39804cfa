#include "nopt/domain.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <mutex>

namespace nopt {

namespace {

double wrap(double x, double period) {
  double r = std::fmod(x, period);
  if (r < 0) r += period;
  return r;
}

// midpoint of the largest gap in the multiset of values mod `period`
std::pair<double, double> largest_gap_midpoint(std::vector<double>& vals, double period) {
  if (vals.empty()) return {period / 2, period / 2};
  std::sort(vals.begin(), vals.end());
  double best_gap = vals.front() + period - vals.back();
  double best_mid = wrap(vals.back() + best_gap / 2, period);
  for (size_t i = 0; i + 1 < vals.size(); ++i) {
    double gap = vals[i + 1] - vals[i];
    if (gap > best_gap) {
      best_gap = gap;
      best_mid = vals[i] + gap / 2;
    }
  }
  return {best_mid, best_gap / 2};
}

}  // namespace

FundamentalDomain build_fundamental_domain(const QuadraticField& k, long nudge_box,
                                           double nudge_tol) {
  struct Key {
    long d, box;
    bool operator<(const Key& o) const { return d != o.d ? d < o.d : box < o.box; }
  };
  static std::mutex mu;
  static std::map<Key, FundamentalDomain> cache;
  std::lock_guard<std::mutex> lock(mu);
  auto it = cache.find({k.d(), nudge_box});
  if (it != cache.end()) return it->second;

  FundamentalDomain F;
  F.d = k.d();
  F.nudge_box = nudge_box;
  if (k.is_rational()) {
    F.C0 = 1;
    F.boundary_clearance = 0.5;  // 0 is excluded from V^x anyway
  } else if (k.is_imaginary()) {
    F.sector_width = 2 * M_PI / k.torsion_order();
    F.C0 = 1;
    std::vector<double> angles;
    for (long p = -nudge_box; p <= nudge_box; ++p)
      for (long q = -nudge_box; q <= nudge_box; ++q) {
        if (p == 0 && q == 0) continue;
        VPoint v = embed(k, Elem(mpz_class(p), mpz_class(q)));
        angles.push_back(wrap(std::atan2(v.v1, v.v0), F.sector_width));
      }
    auto [mid, clear] = largest_gap_midpoint(angles, F.sector_width);
    F.sector_offset = mid;
    F.boundary_clearance = clear;
  } else {
    double R = k.regulator();
    F.slope_width = 2 * R;
    std::vector<double> upos, uneg;
    for (long p = -nudge_box; p <= nudge_box; ++p)
      for (long q = -nudge_box; q <= nudge_box; ++q) {
        if (p == 0 && q == 0) continue;
        Elem x{mpz_class(p), mpz_class(q)};
        VPoint v = embed(k, x);
        if (v.v0 == 0 || v.v1 == 0) continue;  // norm 0 impossible, but guard
        double u = std::log(std::fabs(v.v0)) - std::log(std::fabs(v.v1));
        bool same_sign = (v.v0 > 0) == (v.v1 > 0);
        (same_sign ? upos : uneg).push_back(wrap(u, F.slope_width));
      }
    if (k.fundamental_unit_norm() == -1) {
      // eps swaps the two sign-cones, so their slope windows must be aligned
      // for the translates to tile V^x
      std::vector<double> all = upos;
      all.insert(all.end(), uneg.begin(), uneg.end());
      auto [m, c] = largest_gap_midpoint(all, F.slope_width);
      F.offset_pos = F.offset_neg = m;
      F.boundary_clearance = c;
    } else {
      auto [mp, cp] = largest_gap_midpoint(upos, F.slope_width);
      auto [mn, cn] = largest_gap_midpoint(uneg, F.slope_width);
      F.offset_pos = mp;
      F.offset_neg = mn;
      F.boundary_clearance = std::min(cp, cn);
    }
    double worst =
        std::max({std::fabs(F.offset_pos), std::fabs(F.offset_pos + F.slope_width),
                  std::fabs(F.offset_neg), std::fabs(F.offset_neg + F.slope_width)});
    F.C0 = std::exp(worst / 2);
    F.alpha = R;
  }
  if (F.boundary_clearance < nudge_tol)
    throw InvariantError("fundamental domain nudge: no boundary clearance found");
  cache[{k.d(), nudge_box}] = F;
  return F;
}

bool domain_contains(const QuadraticField& k, const FundamentalDomain& F, const VPoint& v) {
  if (k.is_rational()) return v.v0 > 0;
  if (k.is_imaginary()) {
    if (v.v0 == 0 && v.v1 == 0) return false;
    double t = wrap(std::atan2(v.v1, v.v0) - F.sector_offset, 2 * M_PI);
    return t < F.sector_width;
  }
  if (v.v0 <= 0 || v.v1 == 0) return false;
  double u = std::log(v.v0) - std::log(std::fabs(v.v1));
  double off = v.v1 > 0 ? F.offset_pos : F.offset_neg;
  return u >= off && u < off + F.slope_width;
}

bool domain_contains_elem(const QuadraticField& k, const FundamentalDomain& F, const Elem& x) {
  if (x.is_zero()) return false;
  if (k.is_rational()) return x.a > 0;
  if (k.is_imaginary()) {
    VPoint dir = embed_direction(k, x);
    double t = wrap(std::atan2(dir.v1, dir.v0) - F.sector_offset, 2 * M_PI);
    return t < F.sector_width;
  }
  if (sigma_sign(k, x, 0) <= 0) return false;
  auto [l1, l2] = embed_logs(k, x);
  double u = l1 - l2;
  double off = sigma_sign(k, x, 1) > 0 ? F.offset_pos : F.offset_neg;
  return u >= off && u < off + F.slope_width;
}

std::vector<UnitWithExp> units_with_exponents(const QuadraticField& k, long M) {
  std::vector<UnitWithExp> out;
  const auto& tors = k.torsion_units();
  if (k.unit_rank() == 0) {
    for (size_t i = 0; i < tors.size(); ++i) out.push_back({tors[i], 0, (int)i});
    return out;
  }
  for (long b = -M; b <= M; ++b) {
    Elem eb = unit_pow(k, k.fundamental_unit(), b);
    for (size_t i = 0; i < tors.size(); ++i) out.push_back({mul(k, tors[i], eb), b, (int)i});
  }
  return out;
}

std::vector<Elem> units_in_box(const QuadraticField& k, long M) {
  if (M < 0) throw ParseError("units_in_box: M < 0");
  std::vector<Elem> out;
  for (auto& ue : units_with_exponents(k, M)) out.push_back(ue.u);
  std::sort(out.begin(), out.end());
  return out;
}

Decomposition decompose(const QuadraticField& k, const FundamentalDomain& F, const Elem& y) {
  if (y.is_zero()) throw ParseError("decompose(0)");
  Decomposition out;
  if (k.is_rational()) {
    bool neg = y.a < 0;
    out.x = neg ? -y : y;
    out.lambda = Elem(neg ? -1 : 1);
    out.torsion_index = neg ? 1 : 0;
    return out;
  }
  if (k.is_imaginary()) {
    for (size_t i = 0; i < k.torsion_units().size(); ++i) {
      const Elem& w = k.torsion_units()[i];
      Elem winv = conj(k, w);  // torsion units have norm 1
      Elem x = mul(k, y, winv);
      if (domain_contains_elem(k, F, x)) {
        out.x = x;
        out.lambda = w;
        out.torsion_index = (int)i;
        return out;
      }
    }
    throw InvariantError("decompose: no sector translate matched");
  }
  // real quadratic: candidate exponents near the log-slope estimate
  auto [l1, l2] = embed_logs(k, y);
  double u = l1 - l2;
  double R = k.regulator();
  long bhat = (long)std::llround(u / (2 * R));
  const Elem& eps = k.fundamental_unit();
  for (long b = bhat - 2; b <= bhat + 2; ++b) {
    Elem einv = unit_pow(k, eps, -b);
    for (int s = 0; s < 2; ++s) {
      Elem x = mul(k, y, einv);
      if (s) x = -x;
      if (domain_contains_elem(k, F, x)) {
        out.x = x;
        Elem lam = unit_pow(k, eps, b);
        if (s) lam = -lam;
        out.lambda = lam;
        out.exponent = b;
        out.torsion_index = s;
        return out;
      }
    }
  }
  throw InvariantError("decompose: no cone translate matched");
}

void for_domain_points(const QuadraticField& k, const FundamentalDomain& F, double X,
                       long cap, const std::function<void(const Elem&, const VPoint&)>& fn) {
  if (X < 1) return;  // nonzero integers have ||x|| >= 1
  if (k.is_rational()) {
    long n = (long)std::floor(X);
    for (long x = 1; x <= n; ++x) fn(Elem(x), {double(x), 0});
    return;
  }
  double bound = F.C0 * std::sqrt(X) * (1 + 1e-12) + 1e-9;
  for_lattice_in_bbox(k, -bound, bound, -bound, bound, cap,
                      [&](long p, long q, const VPoint& v) {
                        if (!domain_contains(k, F, v)) return;
                        Elem x{mpz_class(p), mpz_class(q)};
                        mpz_class nn = abs_norm(k, x);
                        if (nn == 0) return;
                        if (mpz_cmp_d(nn.get_mpz_t(), X) > 0) return;
                        fn(x, v);
                      });
}

}  // namespace nopt
