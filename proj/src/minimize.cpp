#include "nopt/minimize.hpp"

#include <algorithm>
#include <cmath>

#include "nopt/collapse.hpp"
#include "nopt/potential.hpp"

namespace nopt {

namespace {

double energy_of(const DensityGrid& g) { return energy(g).I; }

// indicator of {P_V < alpha} with alpha chosen so the paper mass is closest
// to 1 (full cells only: the output stays a {0,1} density)
DensityGrid level_set_reset(const DensityGrid& g) {
  Eigen::ArrayXXd P = potential_field(g);
  std::vector<double> vals;
  vals.reserve(g.nx * g.ny);
  for (long i = 0; i < g.nx; ++i)
    for (long j = 0; j < g.ny; ++j) vals.push_back(P(i, j));
  long want = std::max(1L, (long)std::llround(1.0 / g.cell_volume()));
  want = std::min<long>(want, (long)vals.size());
  std::nth_element(vals.begin(), vals.begin() + (want - 1), vals.end());
  double alpha = vals[want - 1];
  DensityGrid out = g;
  out.cells = (P <= alpha).cast<double>();
  return out;
}

}  // namespace

MinimizeResult minimize_energy_from(const DensityGrid& start, const MinimizeParams& params) {
  const QuadraticField& k = QuadraticField::get(start.d);
  if (start.nx < 64 || start.ny < 64)
    throw ParseError("minimize_energy: resolution must be >= 64");
  MinimizeResult res;
  DensityGrid cur = start;
  double I = energy_of(cur);
  double mass = cur.mass();
  if (std::fabs(mass - 1.0) > 1e-6)
    throw ParseError("minimize_energy: start grid must have paper mass 1");
  res.trace.push_back({0, "start", I, mass, true});
  double eps_accept = 1e-12 * (1 + std::fabs(I));

  auto try_step = [&](const std::string& name, long round, const DensityGrid& cand) {
    double In = energy_of(cand);
    bool ok = In <= I + eps_accept;
    res.trace.push_back({round, name, In, cand.mass(), ok});
    if (ok) {
      bool improved = In < I - params.tolerance;
      cur = cand;
      I = In;
      return improved;
    }
    return false;
  };

  bool any = true;
  long round = 0;
  while (any && round < params.max_rounds) {
    ++round;
    any = false;
    if (k.is_real_quadratic()) {
      any |= try_step("collapse-x", round, collapse(cur, 0, mass_median(cur, 0)));
      any |= try_step("collapse-y", round, collapse(cur, 1, mass_median(cur, 1)));
    } else {
      auto [cx, cy] = mass_centroid(cur);
      any |= try_step("collapse", round, collapse(cur, 0, cx, cy));
    }
    any |= try_step("level-set", round, level_set_reset(cur));
  }
  res.rounds = round;
  res.converged = !any;
  // final state as a sharp level-set indicator
  DensityGrid fin = level_set_reset(cur);
  if (energy_of(fin) <= I + eps_accept) cur = fin;
  res.grid = cur;
  res.report = energy(cur);
  return res;
}

MinimizeResult minimize_energy(const QuadraticField& k, const MinimizeParams& params) {
  if (k.is_rational()) throw ParseError("minimize_energy requires a quadratic field");
  double L = params.box_halfwidth;
  if (L <= 0) L = k.is_imaginary() ? 0.8 : 1.6;
  DensityGrid g = make_grid_box(k, L, params.resolution);
  // start from a density-1 square of paper mass 1
  double side = k.is_imaginary() ? std::sqrt(0.5) : 1.0;
  fill_rect(g, -side / 2, -side / 2, side / 2, side / 2);
  scale_to_mass(g, 1.0);
  return minimize_energy_from(g, params);
}

}  // namespace nopt
