#include "nopt/optimal.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <functional>
#include <set>
#include <thread>

namespace nopt {

namespace {

void require_distinct(const std::vector<Elem>& S) {
  std::set<std::pair<std::string, std::string>> seen;
  for (const auto& x : S)
    if (!seen.insert({x.a.get_str(), x.b.get_str()}).second)
      throw ParseError("set has repeated elements");
}

// prime ideals dividing at least one pairwise difference, with the largest
// pairwise valuation each
std::map<PrimeIdeal, long> difference_support(const QuadraticField& k,
                                              const std::vector<Elem>& S) {
  std::map<PrimeIdeal, long> sup;
  std::set<mpz_class> rational;
  std::vector<Elem> diffs;
  for (size_t i = 0; i < S.size(); ++i)
    for (size_t j = i + 1; j < S.size(); ++j) diffs.push_back(S[i] - S[j]);
  for (const auto& d : diffs)
    for (const auto& [p, e] : factorize(abs_norm(k, d))) rational.insert(p);
  for (const auto& p : rational) {
    for (const auto& P : factor_rational_prime(k, p)) {
      long mx = 0;
      for (const auto& d : diffs) mx = std::max(mx, *valuation(k, d, P));
      if (mx > 0) sup[P] = mx;
    }
  }
  return sup;
}

}  // namespace

AlmostUniformReport is_almost_uniform(const QuadraticField& k, const std::vector<Elem>& S,
                                      const PrimeIdeal& P, long l, long cap) {
  ResidueSystem rs(k, P, l);
  if (rs.class_count() > cap) throw CapError("residue class count exceeds cap");
  AlmostUniformReport rep;
  rep.histogram.assign(rs.class_count().get_si(), 0);
  for (const auto& x : S) rep.histogram[rs.index(x).get_si()]++;
  rep.max_count = *std::max_element(rep.histogram.begin(), rep.histogram.end());
  rep.min_count = *std::min_element(rep.histogram.begin(), rep.histogram.end());
  rep.uniform = rep.max_count - rep.min_count <= 1;
  return rep;
}

Verdict certify_n_optimal(const QuadraticField& k, const std::vector<Elem>& S) {
  if (S.size() < 2) throw ParseError("certify: |S| < 2");
  require_distinct(S);
  Verdict verdict;
  auto sup = difference_support(k, S);
  for (const auto& [P, maxv] : sup) {
    long lmax = maxv + 1;
    verdict.checked.push_back({P, lmax});
    for (long l = 1; l <= lmax; ++l) {
      ResidueSystem rs(k, P, l);
      std::map<mpz_class, long> hist;
      for (const auto& x : S) hist[rs.index(x)]++;
      long mx = 0;
      mpz_class arg_hi;
      for (const auto& [idx, c] : hist)
        if (c > mx) {
          mx = c;
          arg_hi = idx;
        }
      long mn;
      mpz_class arg_lo;
      if (mpz_class((long)hist.size()) < rs.class_count()) {
        mn = 0;
        // smallest index not occupied
        mpz_class probe = 0;
        while (hist.count(probe)) ++probe;
        arg_lo = probe;
      } else {
        mn = mx;
        for (const auto& [idx, c] : hist)
          if (c < mn) {
            mn = c;
            arg_lo = idx;
          }
      }
      if (mx - mn > 1) {
        FailureWitness w;
        w.P = P;
        w.l = l;
        w.class_hi = arg_hi;
        w.class_lo = arg_lo;
        w.count_hi = mx;
        w.count_lo = mn;
        verdict.witness = w;
        verdict.optimal = false;
        return verdict;
      }
    }
  }
  verdict.optimal = true;
  return verdict;
}

VolumeResult volume(const QuadraticField& k, const std::vector<Elem>& S) {
  if (S.empty()) throw ParseError("volume: empty set");
  require_distinct(S);
  VolumeResult out;
  out.generator = Elem(1);
  double lg = 0;
  for (size_t i = 0; i < S.size(); ++i)
    for (size_t j = 0; j < S.size(); ++j) {
      if (i == j) continue;
      Elem d = S[i] - S[j];
      out.generator = mul(k, out.generator, d);
      out.abs_norm *= abs_norm(k, d);
      lg += log_abs(norm(k, d));
    }
  out.log_norm = lg;
  auto sup = difference_support(k, S);
  for (const auto& [P, mx] : sup) {
    long tot = 0;
    for (size_t i = 0; i < S.size(); ++i)
      for (size_t j = i + 1; j < S.size(); ++j) tot += *valuation(k, S[i] - S[j], P);
    (void)mx;
    if (tot > 0) out.factored[P] = 2 * tot;
  }
  return out;
}

bool certify_via_volume(const QuadraticField& k, const std::vector<Elem>& S) {
  if (S.size() < 2) throw ParseError("certify_via_volume: |S| < 2");
  require_distinct(S);
  long n = (long)S.size() - 1;
  VolumeResult vol = volume(k, S);
  const FactorialTable& t = factorial_table(k, n);
  std::map<PrimeIdeal, long> rhs;
  for (size_t i = 0; i < t.primes.size(); ++i) {
    if (t.primes[i].residue_norm() > n) continue;
    long tot = 0;
    for (long m = 0; m <= n; ++m) tot += t.prefix[i][m];
    if (tot > 0) rhs[t.primes[i]] = 2 * tot;
  }
  return vol.factored == rhs;
}

LowerBoundCheck lower_volume_bound_check(const QuadraticField& k,
                                         const std::vector<Elem>& F) {
  require_distinct(F);
  long n = (long)F.size() - 1;
  mpz_class lhs = 1;
  for (size_t i = 0; i < F.size(); ++i)
    for (size_t j = i + 1; j < F.size(); ++j) {
      mpz_class nn = abs_norm(k, F[i] - F[j]);
      lhs *= nn * nn;
    }
  mpz_class rhs = 1;
  for (long m = 0; m <= n; ++m) {
    mpz_class nm = generalized_factorial(k, m).norm;
    rhs *= nm * nm;
  }
  LowerBoundCheck out;
  out.holds = lhs >= rhs;
  out.log_volume = (lhs == 1) ? 0.0 : log_abs(lhs);
  out.log_bound = (rhs == 1) ? 0.0 : log_abs(rhs);
  return out;
}

// ---- search -----------------------------------------------------------------

namespace {

struct TrackedSystem {
  ResidueSystem rs;
  long classes;
  long floor_cnt, ceil_cnt;
  std::vector<long> index_of;  // per candidate element
};

}  // namespace

std::vector<std::vector<Elem>> search_n_optimal(const QuadraticField& k, long n, long box,
                                                const SearchOptions& opt,
                                                SearchStatus* status) {
  if (n < 1) throw ParseError("search: n < 1");
  // candidate elements ordered by (norm, lex); 0 is forced into every set
  std::vector<Elem> cand;
  long brange = k.is_rational() ? 0 : box;
  for (long a = -box; a <= box; ++a)
    for (long b = -brange; b <= brange; ++b) {
      if (a == 0 && b == 0) continue;
      cand.emplace_back(mpz_class(a), mpz_class(b));
    }
  std::sort(cand.begin(), cand.end(), [&](const Elem& x, const Elem& y) {
    mpz_class nx = abs_norm(k, x), ny = abs_norm(k, y);
    if (nx != ny) return nx < ny;
    return x < y;
  });

  // tracked prime powers N(P)^l <= n+1 for incremental pruning
  std::vector<TrackedSystem> tracked;
  for (const auto& P : prime_ideals_norm_up_to(k, n + 1)) {
    for (long l = 1;; ++l) {
      mpz_class cc;
      mpz_pow_ui(cc.get_mpz_t(), P.residue_norm().get_mpz_t(), l);
      if (cc > n + 1) break;
      ResidueSystem rs(k, P, l);
      TrackedSystem ts{rs, cc.get_si(), (n + 1) / cc.get_si(),
                       ((n + 1) + cc.get_si() - 1) / cc.get_si(), {}};
      ts.index_of.reserve(cand.size());
      for (const auto& x : cand) ts.index_of.push_back(rs.index(x).get_si());
      tracked.push_back(std::move(ts));
    }
  }
  std::vector<long> zero_idx(tracked.size());
  for (size_t t = 0; t < tracked.size(); ++t)
    zero_idx[t] = tracked[t].rs.index(Elem(0L)).get_si();

  std::atomic<long> nodes{0};
  std::atomic<bool> capped{false};
  long ncand = (long)cand.size();

  // one DFS branch per first chosen element
  auto run_branch = [&](long first, std::vector<std::vector<Elem>>& found) {
    std::vector<std::vector<long>> hist(tracked.size());
    for (size_t t = 0; t < tracked.size(); ++t) {
      hist[t].assign(tracked[t].classes, 0);
      hist[t][zero_idx[t]]++;  // the forced 0
    }
    std::vector<long> chosen;
    auto ok_add = [&](long ci) {
      for (size_t t = 0; t < tracked.size(); ++t)
        if (hist[t][tracked[t].index_of[ci]] + 1 > tracked[t].ceil_cnt) return false;
      return true;
    };
    auto feasible = [&](long picked) {
      long remaining = n - picked;
      for (size_t t = 0; t < tracked.size(); ++t) {
        long deficit = 0;
        for (long c = 0; c < tracked[t].classes; ++c)
          deficit += std::max(0L, tracked[t].floor_cnt - hist[t][c]);
        if (deficit > remaining) return false;
      }
      return true;
    };
    std::function<void(long, long)> dfs = [&](long start, long picked) {
      if (capped.load(std::memory_order_relaxed)) return;
      if (picked == n) {
        std::vector<Elem> S{Elem(0L)};
        for (long ci : chosen) S.push_back(cand[ci]);
        if (certify_n_optimal(k, S).optimal) found.push_back(S);
        return;
      }
      for (long ci = start; ci < ncand; ++ci) {
        if (nodes.fetch_add(1, std::memory_order_relaxed) > opt.node_cap) {
          capped.store(true);
          return;
        }
        if (!ok_add(ci)) continue;
        for (size_t t = 0; t < tracked.size(); ++t) hist[t][tracked[t].index_of[ci]]++;
        chosen.push_back(ci);
        if (feasible(picked + 1)) dfs(ci + 1, picked + 1);
        chosen.pop_back();
        for (size_t t = 0; t < tracked.size(); ++t) hist[t][tracked[t].index_of[ci]]--;
      }
    };
    // branch = index of the smallest chosen element
    if (!ok_add(first)) return;
    for (size_t t = 0; t < tracked.size(); ++t) hist[t][tracked[t].index_of[first]]++;
    chosen.push_back(first);
    if (feasible(1)) dfs(first + 1, 1);
  };

  std::vector<std::vector<std::vector<Elem>>> per_branch(ncand);
  std::vector<char> branch_done(ncand, 0);
  std::atomic<long> next{opt.resume_branch};
  auto worker = [&]() {
    while (true) {
      long b = next.fetch_add(1);
      if (b >= ncand || capped.load()) break;
      run_branch(b, per_branch[b]);
      if (!capped.load()) branch_done[b] = 1;
    }
  };
  if (opt.threads <= 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (int t = 0; t < opt.threads; ++t) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
  }
  // the resume token is the first branch not known to be fully explored
  long done_until = ncand;
  if (capped.load()) {
    done_until = opt.resume_branch;
    while (done_until < ncand && branch_done[done_until]) ++done_until;
  }

  // every certified set with 0 forced is emitted; the family is complete up
  // to translation since any in-box set containing 0 appears directly
  std::vector<std::vector<Elem>> out;
  for (long b = 0; b < ncand; ++b)
    for (auto& S : per_branch[b]) {
      std::sort(S.begin(), S.end());
      out.push_back(S);
    }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  if (status) {
    status->complete = !capped.load();
    status->nodes = nodes.load();
    status->next_branch = capped.load() ? done_until : ncand;
  }
  if (capped.load() && !status) throw CapError("search node cap exceeded");
  return out;
}

PairwiseLogBound pairwise_log_bound(const QuadraticField& k, const std::vector<Elem>& S) {
  if (S.size() < 2) throw ParseError("pairwise_log_bound: |S| < 2");
  PairwiseLogBound out;
  double mx = -1e300;
  for (size_t i = 0; i < S.size(); ++i)
    for (size_t j = i + 1; j < S.size(); ++j)
      mx = std::max(mx, log_abs(norm(k, S[i] - S[j])));
  out.max_log_diff = mx;
  out.excess = mx - std::log((double)S.size() - 1);
  return out;
}

// ---- minimal enclosing disk (Welzl) -------------------------------------------

namespace {

struct Disk {
  double x = 0, y = 0, r = 0;
};

bool in_disk(const Disk& d, double px, double py) {
  double dx = px - d.x, dy = py - d.y;
  return dx * dx + dy * dy <= d.r * d.r * (1 + 1e-12) + 1e-18;
}

Disk disk2(double ax, double ay, double bx, double by) {
  Disk d;
  d.x = (ax + bx) / 2;
  d.y = (ay + by) / 2;
  d.r = std::hypot(ax - bx, ay - by) / 2;
  return d;
}

Disk disk3(double ax, double ay, double bx, double by, double cx, double cy) {
  double bx2 = bx - ax, by2 = by - ay, cx2 = cx - ax, cy2 = cy - ay;
  double B = bx2 * bx2 + by2 * by2, C = cx2 * cx2 + cy2 * cy2;
  double D = bx2 * cy2 - by2 * cx2;
  if (std::fabs(D) < 1e-14) {
    // collinear: take the widest pair
    Disk d1 = disk2(ax, ay, bx, by), d2 = disk2(ax, ay, cx, cy), d3 = disk2(bx, by, cx, cy);
    Disk best = d1;
    if (d2.r > best.r) best = d2;
    if (d3.r > best.r) best = d3;
    return best;
  }
  Disk d;
  d.x = ax + (cy2 * B - by2 * C) / (2 * D);
  d.y = ay + (bx2 * C - cx2 * B) / (2 * D);
  d.r = std::hypot(d.x - ax, d.y - ay);
  return d;
}

Disk welzl(std::vector<std::pair<double, double>> pts) {
  Rng rng(12345);
  std::shuffle(pts.begin(), pts.end(), rng);
  Disk d{0, 0, -1};
  for (size_t i = 0; i < pts.size(); ++i) {
    if (d.r >= 0 && in_disk(d, pts[i].first, pts[i].second)) continue;
    d = {pts[i].first, pts[i].second, 0};
    for (size_t j = 0; j < i; ++j) {
      if (in_disk(d, pts[j].first, pts[j].second)) continue;
      d = disk2(pts[i].first, pts[i].second, pts[j].first, pts[j].second);
      for (size_t l = 0; l < j; ++l) {
        if (in_disk(d, pts[l].first, pts[l].second)) continue;
        d = disk3(pts[i].first, pts[i].second, pts[j].first, pts[j].second, pts[l].first,
                  pts[l].second);
      }
    }
  }
  if (d.r < 0) d.r = 0;
  return d;
}

}  // namespace

HullResult cylinder_hull(const QuadraticField& k, const std::vector<Elem>& S) {
  if (S.empty()) throw ParseError("cylinder_hull: empty set");
  HullResult out;
  if (k.is_imaginary()) {
    std::vector<std::pair<double, double>> pts;
    for (const auto& x : S) {
      VPoint v = embed(k, x);
      pts.push_back({v.v0, v.v1});
    }
    Disk d = welzl(pts);
    out.hull.center = {d.x, d.y};
    out.hull.r0 = d.r;
  } else {
    double lo0 = 1e300, hi0 = -1e300, lo1 = 1e300, hi1 = -1e300;
    for (const auto& x : S) {
      VPoint v = embed(k, x);
      lo0 = std::min(lo0, v.v0);
      hi0 = std::max(hi0, v.v0);
      lo1 = std::min(lo1, v.v1);
      hi1 = std::max(hi1, v.v1);
    }
    out.hull.center = {(lo0 + hi0) / 2, (lo1 + hi1) / 2};
    out.hull.r0 = (hi0 - lo0) / 2;
    out.hull.r1 = (hi1 - lo1) / 2;
  }
  out.volume = cylinder_volume(k, out.hull);
  out.ratio = out.volume / (double)S.size();
  return out;
}

}  // namespace nopt
