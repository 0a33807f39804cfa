#include "nopt/quantize.hpp"

#include <algorithm>
#include <cmath>

#include "nopt/energy.hpp"

namespace nopt {

QuantizeResult quantize(const QuadraticField& k, const Region& U, long n, long cap) {
  if (n < 0) throw ParseError("quantize: n < 0");
  QuantizeResult out;
  if (n == 0) return out;
  double scale = std::pow((double)n * std::sqrt(to_double(abs(k.disc()))),
                          1.0 / k.degree());
  out.scale = scale;
  double ax, bx, ay, by;
  U.bbox(ax, bx, ay, by);
  for_lattice_in_bbox(k, ax * scale, bx * scale, ay * scale, by * scale, cap,
                      [&](long p, long q, const VPoint& v) {
                        if (U.contains(v.v0 / scale, v.v1 / scale))
                          out.points.push_back(Elem(mpz_class(p), mpz_class(q)));
                      });
  std::sort(out.points.begin(), out.points.end());
  out.count = (long)out.points.size();
  if (out.count >= 2) {
    // s = scale * (1, ..., 1) has ||s|| = n sqrt|disc|
    VPoint s = k.is_imaginary() ? VPoint{scale, 0} : VPoint{scale, scale};
    out.discrete_energy = energy_discrete(k, out.points, s);
  }
  return out;
}

QuantizeResult quantize(const QuadraticField& k, const DensityGrid& indicator, long n,
                        long cap) {
  return quantize(k, Region::make_level_set(indicator), n, cap);
}

}  // namespace nopt
