#include "nopt/cylinder.hpp"

#include <cmath>

namespace nopt {

double cylinder_volume(const QuadraticField& k, const Cylinder& c) {
  if (k.is_rational()) return 2 * c.r0;
  if (k.is_imaginary()) return 2 * M_PI * c.r0 * c.r0;
  return 4 * c.r0 * c.r1;
}

bool cylinder_contains(const QuadraticField& k, const Cylinder& c, const VPoint& v) {
  if (k.is_rational()) return std::fabs(v.v0 - c.center.v0) <= c.r0;
  if (k.is_imaginary()) {
    double dx = v.v0 - c.center.v0, dy = v.v1 - c.center.v1;
    return dx * dx + dy * dy <= c.r0 * c.r0;
  }
  return std::fabs(v.v0 - c.center.v0) <= c.r0 && std::fabs(v.v1 - c.center.v1) <= c.r1;
}

CylinderCount count_lattice_in_cylinder(const QuadraticField& k, const Cylinder& c, long cap) {
  if (c.r0 < 0 || c.r1 < 0) throw ParseError("cylinder radii must be nonnegative");
  CylinderCount out;
  out.volume = cylinder_volume(k, c);
  double r1 = k.is_imaginary() ? c.r0 : c.r1;
  for_lattice_in_bbox(k, c.center.v0 - c.r0, c.center.v0 + c.r0, c.center.v1 - r1,
                      c.center.v1 + r1, cap, [&](long, long, const VPoint& v) {
                        if (cylinder_contains(k, c, v)) ++out.count;
                      });
  out.ratio = double(out.count) / (1.0 + out.volume);
  return out;
}

}  // namespace nopt
