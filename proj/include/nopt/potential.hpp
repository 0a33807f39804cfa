#pragma once

#include "nopt/grid.hpp"

namespace nopt {

struct PotentialValue {
  double P = 0;       // P_i at the evaluation point
  double dP = 0;      // derivative along the coordinate (radial on C)
  bool singular = false;
};

// P_i(x_i) = int log|x - y|_i dnu(y) (squared absolute value on a complex
// coordinate) and its derivative. Real coordinates integrate the exact
// piecewise-linear marginal; the complex coordinate evaluates radially about
// the grid's mass centroid using per-cell disk potentials.
PotentialValue potential(const DensityGrid& g, int axis, double x);

// Full potential P_V at a V-point: sum of the coordinate potentials (real
// quadratic) or the complex potential (imaginary quadratic).
double potential_V(const DensityGrid& g, double x, double y);

// log-potential of the uniform planar disk of radius T at radius s:
// int_{B(0,T)} log|s e^{i t} - z|^2 dA(z), with its radial derivative;
// the two branch formulas agree at s = T.
double disk_log_potential_sq(double T, double s);
double disk_log_potential_sq_deriv(double T, double s);

// exact int over [ax,bx] x [ay,by] of log|z - t| dA(t) (planar), and its
// partial derivative in zx; closed form via the double antiderivative of
// log(x^2 + y^2)
double cell_log_planar_integral(double zx, double zy, double ax, double bx, double ay,
                                double by);
double cell_log_planar_integral_dx(double zx, double zy, double ax, double bx, double ay,
                                   double by);

// P_V at every cell center (FFT-accelerated on the complex place)
Eigen::ArrayXXd potential_field(const DensityGrid& g);

}  // namespace nopt
