#pragma once

#include <string>
#include <vector>

#include "nopt/energy.hpp"

namespace nopt {

struct MinimizeParams {
  long resolution = 256;     // >= 64
  double box_halfwidth = 0;  // 0: a field-appropriate default
  double tolerance = 1e-7;
  long max_rounds = 64;
};

struct MinimizeTraceRow {
  long round = 0;
  std::string step;
  double I = 0;
  double mass = 0;
  bool accepted = false;
};

struct MinimizeResult {
  DensityGrid grid;  // {0,1} indicator of the final level set
  EnergyReport report;
  std::vector<MinimizeTraceRow> trace;
  bool converged = false;
  long rounds = 0;
};

// Alternates coordinate collapses (mass median / centroid centers) with the
// potential level-set reset U = {P_V < alpha}, alpha bisected so the paper
// mass is 1. A step is accepted only if the energy does not increase.
MinimizeResult minimize_energy(const QuadraticField& k, const MinimizeParams& params = {});

// the same loop started from a caller-provided probability grid
MinimizeResult minimize_energy_from(const DensityGrid& start, const MinimizeParams& params);

}  // namespace nopt
