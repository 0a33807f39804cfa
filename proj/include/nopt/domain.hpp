#pragma once

#include <vector>

#include "nopt/field.hpp"

namespace nopt {

// Good fundamental domain for the unit action on V^x.
//   real quadratic: two sign-cones {v0 > 0, sign(v1) = s} cut by the log-slope
//     u = log|v0| - log|v1| lying in [offset_s, offset_s + 2R);
//   imaginary quadratic: the sector arg(z) in [sector_offset, +2pi/w);
//   Q: the positive ray.
// Offsets are nudged so that no lattice point with coordinates up to
// `nudge_box` lies within `boundary_clearance` of the cone boundary.
struct FundamentalDomain {
  long d = 1;
  double slope_width = 0;                      // 2 R_k (real quadratic)
  double offset_pos = 0, offset_neg = 0;       // per sign-cone
  double sector_offset = 0, sector_width = 0;  // imaginary quadratic
  double C0 = 1;     // cone comparability: C0^-1 ||v||^(1/N) <= |v_i| <= C0 ||v||^(1/N)
  double alpha = 0;  // unit-norm comparability; = R_k for unit rank 1
  long nudge_box = 0;
  double boundary_clearance = 0;
};

FundamentalDomain build_fundamental_domain(const QuadraticField& k, long nudge_box = 200,
                                           double nudge_tol = 1e-9);

bool domain_contains(const QuadraticField& k, const FundamentalDomain& F, const VPoint& v);
bool domain_contains_elem(const QuadraticField& k, const FundamentalDomain& F, const Elem& x);

// y = x * lambda with x in the interior of F and lambda a unit; unique.
struct Decomposition {
  Elem x;
  Elem lambda;
  long exponent = 0;    // |exponent| = ||lambda||_inf for unit rank 1
  int torsion_index = 0;
};

Decomposition decompose(const QuadraticField& k, const FundamentalDomain& F, const Elem& y);

// all units lambda with ||lambda||_inf <= M (every unit for rank 0), sorted
std::vector<Elem> units_in_box(const QuadraticField& k, long M);

// unit together with its exponent data
struct UnitWithExp {
  Elem u;
  long exponent;
  int torsion_index;
};
std::vector<UnitWithExp> units_with_exponents(const QuadraticField& k, long M);

// Visits every x in F cap O_k with 0 < ||x|| <= X.
void for_domain_points(const QuadraticField& k, const FundamentalDomain& F, double X,
                       long cap, const std::function<void(const Elem&, const VPoint&)>& fn);

}  // namespace nopt
