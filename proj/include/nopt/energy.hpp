#pragma once

#include <vector>

#include "nopt/grid.hpp"

namespace nopt {

struct EnergyReport {
  double I = 0;
  std::vector<std::pair<double, double>> I_T;  // (T, I_T) pairs, nonincreasing toward I
  double quadrature_error = 0;
  double mass = 0;
};

struct EnergyOptions {
  std::vector<double> T_values;
  bool rescale_to_probability = false;
};

// I(nu) = iint log||x-y|| dnu dnu for the grid measure. Real quadratic grids
// use exact separable cell-pair integrals; the complex case uses offset
// kernels that are exact for near cells and midpoint beyond (the smoothed
// log kernel is harmonic, so the midpoint tail error is fourth order).
EnergyReport energy(const DensityGrid& g, const EnergyOptions& opt = {});

// I'(mu_n) of the normalized counting measure of S rescaled by s^{-1}:
// (1/n^2) sum over ordered pairs of log||s^{-1}(x - y)||, n = |S| - 1.
double energy_discrete(const QuadraticField& k, const std::vector<Elem>& S, const VPoint& s);

struct PairDeltaResult {
  double delta = 0;
  bool positive = false;
};

// Delta_delta of the interval gluing step: the energy gain of shifting
// [a2,b2] toward [a1,b1] by kappa under the smoothed kernel
// log(|x-y|^2 + delta^2); exact via the closed-form double antiderivative.
PairDeltaResult energy_pair_delta(double a1, double b1, double a2, double b2, double kappa,
                                  double delta);

// exact iint_{[a1,b1] x [a2,b2]} log(|x-y|^2 + delta^2) dx dy
double log_sq_box_integral(double a1, double b1, double a2, double b2, double delta);

// 1D building block: double antiderivative of log|u| (G'' = log|u|)
double log_antideriv2(double u);

// S(i) = sum_j f(j) K(i - j) over the grid, via zero-padded 2D FFT
Eigen::ArrayXXd grid_correlate(const Eigen::ArrayXXd& f,
                               const std::function<double(long, long)>& kernel);

}  // namespace nopt
