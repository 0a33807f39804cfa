#pragma once

#include "nopt/field.hpp"

namespace nopt {

// Coordinate-wise product of closed balls in V. For real quadratic fields the
// two radii bound the two real coordinates; for imaginary quadratic (and Q)
// only r0 is used.
struct Cylinder {
  VPoint center;
  double r0 = 0, r1 = 0;
};

// Volume in the paper convention (complex factor carries twice the planar
// measure).
double cylinder_volume(const QuadraticField& k, const Cylinder& c);

bool cylinder_contains(const QuadraticField& k, const Cylinder& c, const VPoint& v);

struct CylinderCount {
  long count = 0;
  double volume = 0;
  double ratio = 0;  // count / (1 + volume)
};

CylinderCount count_lattice_in_cylinder(const QuadraticField& k, const Cylinder& c,
                                        long cap = 50000000);

}  // namespace nopt
