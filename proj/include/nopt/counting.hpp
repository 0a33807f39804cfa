#pragma once

#include <string>
#include <vector>

#include "nopt/domain.hpp"

namespace nopt {

struct SaxPair {
  Elem x;       // point of F cap O_k
  Elem lambda;  // unit; the solution is y = x * lambda^{-1}
  long unit_norm_inf = 0;
};

struct SaxRecord {
  Elem a;
  double X = 0;
  std::vector<SaxPair> pairs;
  long count = 0;
  long tail_count = 0;   // pairs with ||lambda||_inf >= M
  long M = 0;
  bool slack_warning = false;  // ||a|| < X e^{-B}: outside the theorem's regime
};

// S(a, X) = {(x, lambda) : x in F cap O_k, ||x(a - x lambda^{-1})|| <= X^2,
// ||x|| <= X}, enumerated exhaustively; the unit range per x is certified by
// coordinate growth of ||a - x lambda^{-1}||. Counts are exact regardless of
// the B slack; B only gates the warning flag.
SaxRecord count_S_aX(const QuadraticField& k, const FundamentalDomain& F, const Elem& a,
                     double X, long M = 0, long cap = 100000000, double B = 1.0);

// |{x in O_k : ||x(a - x)|| <= X^2}| by unit-orbit enumeration; exact.
struct NormPairCount {
  long count = 0;
  std::vector<Elem> solutions;  // sorted, included when requested
};
NormPairCount count_norm_pairs(const QuadraticField& k, const Elem& a, double X,
                               bool keep_solutions = false, long cap = 100000000);

struct RationalNumber {
  long num = 0, den = 1;
};
// kappa(N) = min(1/(2N(N-1)), 1/(4N-1)) as an exact rational; N >= 2
RationalNumber kappa(int N);

struct FitResult {
  double slope = 0, intercept = 0;
  std::vector<double> residuals;
  double slope_minus_bound = 0;  // slope - (1 + kappa)
  // slowly-varying terms (iterated-log factors) are unobservable at these
  // scales and are absorbed into the intercept
  std::string note = "iterated-log factors treated as constant at this scale";
};
// least-squares slope of log(count) against log(X)
FitResult fit_count_scaling(const QuadraticField& k, const std::vector<Elem>& a_seq,
                            const std::vector<double>& X_grid);

struct UnitEqResult {
  std::vector<std::pair<Elem, Elem>> solutions;  // (lambda1, lambda2)
  long nu = 0;
  bool complete = false;  // bound covers the certified exponent range
  long certified_bound = 0;
};
// solutions of a1*l1 + a2*l2 = a3 in units, ||lambda_i||_inf <= bound
UnitEqResult unit_equation_solutions(const QuadraticField& k, const Elem& a1, const Elem& a2,
                                     const Elem& a3, long exponent_bound);

struct AvgUnitEqResult {
  long total = 0;  // includes the two degenerate solutions x = 0 and x = a3
  long norm_pair_count = 0;
  bool match = false;
};
// sum of nu(a1, a2, a3) over unit-orbit pairs with ||a1 a2|| <= X^2;
// equals count_norm_pairs(a3, X) exactly
AvgUnitEqResult average_unit_equation_sum(const QuadraticField& k, const Elem& a3, double X,
                                          long exponent_bound = 64);

struct IdealSumResult {
  double sum = 0;
  long terms = 0;
  double main_term = 0;  // r! * (rho_k / h_k) * X
  double ratio = 0;
};
// sum over principal ideals of norm <= X of (log X - log N)^r
IdealSumResult principal_ideal_sum(const QuadraticField& k, double X, int r,
                                   long cap = 200000000);

struct SectorSurveyRow {
  double t = 0;
  long points = 0;
  long prime_points = 0;
};
// counts of prime-generating elements in dilates t * (sector-annulus)
std::vector<SectorSurveyRow> sector_prime_survey(const QuadraticField& k, double r_lo,
                                                 double r_hi, double theta_lo,
                                                 double theta_hi,
                                                 const std::vector<double>& dilations,
                                                 int threads = 1);

}  // namespace nopt
