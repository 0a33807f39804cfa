#include "nopt/discrepancy.hpp"

#include <algorithm>
#include <cmath>

namespace nopt {

namespace {

// bounding box of tU + v in V-coordinates
void transformed_bbox(const QuadraticField& k, const Region& U, const VPoint& t,
                      const VPoint& v, double& ax, double& bx, double& ay, double& by) {
  double ux0, ux1, uy0, uy1;
  U.bbox(ux0, ux1, uy0, uy1);
  if (k.is_imaginary()) {
    // complex multiplication: |t| scales, rotation mixes; use the radius
    double rad = 0;
    for (double cx : {ux0, ux1})
      for (double cy : {uy0, uy1}) rad = std::max(rad, std::hypot(cx, cy));
    double tm = std::hypot(t.v0, t.v1);
    ax = v.v0 - tm * rad;
    bx = v.v0 + tm * rad;
    ay = v.v1 - tm * rad;
    by = v.v1 + tm * rad;
    return;
  }
  if (k.is_rational()) {
    double c0 = t.v0 * ux0 + v.v0, c1 = t.v0 * ux1 + v.v0;
    ax = std::min(c0, c1);
    bx = std::max(c0, c1);
    ay = by = 0;
    return;
  }
  double c0 = t.v0 * ux0 + v.v0, c1 = t.v0 * ux1 + v.v0;
  double d0 = t.v1 * uy0 + v.v1, d1 = t.v1 * uy1 + v.v1;
  ax = std::min(c0, c1);
  bx = std::max(c0, c1);
  ay = std::min(d0, d1);
  by = std::max(d0, d1);
}

}  // namespace

long count_region(const QuadraticField& k, const Region& U, const VPoint& t, const VPoint& v,
                  long cap) {
  if (pnorm(k, t) == 0) throw ParseError("count_region: ||t|| = 0");
  VPoint tinv = vinv(k, t);
  double ax, bx, ay, by;
  transformed_bbox(k, U, t, v, ax, bx, ay, by);
  long count = 0;
  for_lattice_in_bbox(k, ax, bx, ay, by, cap, [&](long, long, const VPoint& p) {
    VPoint w = vmul(k, tinv, vsub(k, p, v));
    if (U.contains(w.v0, w.v1)) ++count;
  });
  return count;
}

DiscrepancyValue discrepancy(const QuadraticField& k, const Region& U, const VPoint& t,
                             const VPoint& v, long cap) {
  DiscrepancyValue out;
  out.N = count_region(k, U, t, v, cap);
  out.main_term =
      U.paper_measure() * pnorm(k, t) / std::sqrt(to_double(abs(k.disc())));
  out.D = (double)out.N - out.main_term;
  return out;
}

MaxDiscrepancyBound max_discrepancy_lower(const QuadraticField& k, const Region& U,
                                          const VPoint& t, long budget, uint64_t seed) {
  if (budget < 1) throw ParseError("max_discrepancy_lower: budget < 1");
  Rng rng(seed);
  std::uniform_real_distribution<double> u01(0.0, 1.0);
  VPoint e1 = embed(k, Elem(1L));
  VPoint ew = embed(k, Elem(mpz_class(0), mpz_class(1)));
  MaxDiscrepancyBound best;
  auto eval = [&](const VPoint& v) {
    double d = std::fabs(discrepancy(k, U, t, v).D);
    if (d > best.bound) {
      best.bound = d;
      best.witness_v = v;
    }
    best.samples++;
  };
  eval({0, 0});
  long explore = budget / 2;
  for (long i = 0; i < explore; ++i) {
    double a = u01(rng), b = k.is_rational() ? 0.0 : u01(rng);
    eval({a * e1.v0 + b * ew.v0, a * e1.v1 + b * ew.v1});
  }
  // local refinement around the best witness near translates of t * boundary
  std::normal_distribution<double> gauss(0.0, 1.0);
  double sigma = 0.25;
  while (best.samples < budget) {
    VPoint w = best.witness_v;
    eval({w.v0 + sigma * gauss(rng), w.v1 + (k.is_rational() ? 0.0 : sigma * gauss(rng))});
    sigma = std::max(sigma * 0.999, 1e-4);
  }
  // recount the reported witness
  double recheck = std::fabs(discrepancy(k, U, t, best.witness_v).D);
  best.bound = recheck;
  return best;
}

std::optional<BadDilateWitness> find_bad_dilate(const QuadraticField& k, const Region& U,
                                                long budget, uint64_t seed) {
  if (k.degree() < 2)
    throw ParseError("find_bad_dilate: dim V >= 2 required (no witness exists on R)");
  Rng rng(seed);
  long probes = 0;
  const double margin = 1e-6;
  auto verdict = [&](const VPoint& t, const VPoint& v) -> std::optional<BadDilateWitness> {
    DiscrepancyValue dv = discrepancy(k, U, t, v);
    ++probes;
    if (std::fabs(dv.D) <= 1 + margin) return std::nullopt;
    // independent recount with a padded box before reporting
    long n2 = count_region(k, U, t, v);
    if (n2 != dv.N) return std::nullopt;
    double D2 = (double)n2 - dv.main_term;
    if (std::fabs(D2) <= 1 + margin) return std::nullopt;
    BadDilateWitness w;
    w.t = t;
    w.v = v;
    w.N = n2;
    w.main_term = dv.main_term;
    w.D = D2;
    w.probes = probes;
    return w;
  };

  // boundary pairs (p, q) frame two lattice points: t = (q - p)^{-1},
  // v = -p * t sends p -> 0 and q -> 1; scan dilations and nearby shifts
  long mb = 64;
  auto bnd = U.boundary_points(mb);
  std::uniform_real_distribution<double> jit(-0.35, 0.35);
  const double eps_list[] = {0.03, 0.06, 0.12, 0.2, 0.3, 0.45};
  while (probes < budget) {
    size_t i = rng() % bnd.size(), j = rng() % bnd.size();
    if (i == j) continue;
    VPoint p{bnd[i].first, bnd[i].second}, q{bnd[j].first, bnd[j].second};
    VPoint diff = vsub(k, q, p);
    if (k.is_real_quadratic() && (std::fabs(diff.v0) < 1e-9 || std::fabs(diff.v1) < 1e-9))
      continue;
    if (pnorm(k, diff) < 1e-12) continue;
    VPoint t0 = vinv(k, diff);
    if (pnorm(k, t0) * U.paper_measure() > 2e5) continue;  // keep counting cheap
    VPoint v0 = vmul(k, vscale(k, -1.0, p), t0);
    for (double e : eps_list) {
      for (double sgn : {1.0, -1.0}) {
        VPoint t = vscale(k, 1 + sgn * e, t0);
        if (auto w = verdict(t, v0)) return w;
        VPoint v1{v0.v0 + jit(rng), v0.v1 + jit(rng)};
        if (auto w = verdict(t, v1)) return w;
        if (probes >= budget) return std::nullopt;
      }
    }
  }
  return std::nullopt;
}

}  // namespace nopt
