#pragma once

#include <string>

#include "nopt/field.hpp"

namespace nopt {

struct ValueWithError {
  double value = 0;
  double error = 0;
};

struct FieldConstants {
  ValueWithError rho;        // residue of zeta_k at s = 1
  ValueWithError gamma_k;    // Euler-Kronecker constant of k
  ValueWithError gamma_Q;    // Euler-Mascheroni
  ValueWithError L1;         // L(1, chi_disc) (quadratic k)
  ValueWithError L1prime;    // L'(1, chi_disc)
  ValueWithError bound;      // -1/2 log|disc| - 3/2 - gamma_k + gamma_Q
  double route_gap = 0;      // |L-route - Laurent-route| for gamma_k
  long term_cap = 0;
};

// rho_k = 2^{r1} (2 pi)^{r2} h R / (w sqrt|disc|); the class number formula
// identifies it with L(1, chi_disc) for quadratic k.
ValueWithError residue_rho(const QuadraticField& k);

// gamma_k by the L-function route (gamma + L'/L at 1) checked against a
// Laurent-expansion route (Richardson extrapolation of zeta_k at 1+).
// Throws CapError when the two routes disagree beyond their stated errors.
ValueWithError gamma_euler_kronecker(const QuadraticField& k, long term_cap = 10000000);

// the limit-energy constant -1/2 log|disc| - 3/2 - gamma_k + gamma_Q
ValueWithError energy_lower_constant(const QuadraticField& k, long term_cap = 10000000);

// full bundle, memoized per (field, term_cap)
const FieldConstants& field_constants(const QuadraticField& k, long term_cap = 10000000);

// building blocks, exposed for the dual-route tests
double euler_mascheroni();
double hurwitz_zeta(double s, double x);                       // s > 1
double dirichlet_l(const QuadraticField& k, double s);         // L(s, chi_disc), s > 1
ValueWithError dirichlet_l_prime_at_1(const QuadraticField& k, long term_cap);

}  // namespace nopt
