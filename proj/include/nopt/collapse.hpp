#pragma once

#include "nopt/grid.hpp"

namespace nopt {

// Steiner-type collapsing of the grid measure along coordinate `axis` about
// the center c. Real quadratic: every fiber is replaced by the centered
// interval of the same mass (axis 0 or 1). Imaginary quadratic: the whole
// measure is replaced by the centered disk of the same mass (axis 0, center
// (c0, c1)). Mass is preserved to machine precision and the output density
// is {0,1} up to fractional boundary cells.
DensityGrid collapse(const DensityGrid& g, int axis, double c0, double c1 = 0);

// per-coordinate mass median and centroid, the default collapse centers
double mass_median(const DensityGrid& g, int axis);
std::pair<double, double> mass_centroid(const DensityGrid& g);

}  // namespace nopt
