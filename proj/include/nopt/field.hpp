#pragma once

#include <optional>
#include <string>
#include <vector>

#include "nopt/elem.hpp"
#include "nopt/util.hpp"

namespace nopt {

// The ambient field k = Q(sqrt(d)) for squarefree d (d = 1 encodes Q).
// All invariants (discriminant, signature, unit group data, class number)
// are computed eagerly at construction; instances are immutable and shared.
class QuadraticField {
 public:
  static const QuadraticField& get(long d);          // memoized factory
  static const QuadraticField& parse(const std::string& spec);  // "Q", "Q(i)", "Q(sqrt:D)"

  long d() const { return d_; }
  const mpz_class& disc() const { return disc_; }
  bool omega_half() const { return omega_half_; }  // omega = (1+sqrt d)/2
  int degree() const { return degree_; }
  int r1() const { return r1_; }
  int r2() const { return r2_; }
  int places() const { return r1_ + r2_; }
  long torsion_order() const { return torsion_; }
  long class_number() const { return class_number_; }
  double regulator() const { return regulator_; }  // log sigma_1(eps); 1 for unit rank 0
  int unit_rank() const { return d_ > 1 ? 1 : 0; }
  const Elem& fundamental_unit() const;  // throws unless d > 1
  int fundamental_unit_norm() const { return eps_norm_; }
  const std::vector<Elem>& torsion_units() const { return torsion_units_; }

  // omega in the two real embeddings (d > 0) / as a complex number (d < 0).
  double omega1() const { return omega1_; }
  double omega2() const { return omega2_; }
  double omega_re() const { return omega_re_; }
  double omega_im() const { return omega_im_; }

  std::string spec_string() const;   // "Q", "Q(i)", "Q(sqrt:D)"
  std::string omega_string() const;  // "w=..." convention tag

  bool is_rational() const { return d_ == 1; }
  bool is_real_quadratic() const { return d_ > 1; }
  bool is_imaginary() const { return d_ < 0; }

 private:
  explicit QuadraticField(long d);

  long d_;
  mpz_class disc_;
  bool omega_half_;
  int degree_, r1_, r2_;
  long torsion_;
  long class_number_;
  std::optional<Elem> fundamental_unit_;
  int eps_norm_ = 0;
  double regulator_;
  double omega1_, omega2_, omega_re_, omega_im_;
  std::vector<Elem> torsion_units_;
};

// ---- arithmetic in O_k -------------------------------------------------------

Elem mul(const QuadraticField& k, const Elem& x, const Elem& y);
Elem conj(const QuadraticField& k, const Elem& x);
mpz_class norm(const QuadraticField& k, const Elem& x);      // N_{k/Q}(x), exact
mpz_class abs_norm(const QuadraticField& k, const Elem& x);  // |N(x)|
mpz_class trace(const QuadraticField& k, const Elem& x);
bool is_unit(const QuadraticField& k, const Elem& x);

// Exact division x / y in O_k; nullopt if y = 0 or y does not divide x.
std::optional<Elem> divide_exact(const QuadraticField& k, const Elem& x, const Elem& y);

// u^e for a unit u (e may be negative).
Elem unit_pow(const QuadraticField& k, const Elem& u, long e);

// canonical form (collapses b into a for k = Q)
Elem canon(const QuadraticField& k, const Elem& x);

// ---- embedding into V --------------------------------------------------------

VPoint embed(const QuadraticField& k, const Elem& x);

// log|coordinate| per place, robust against catastrophic cancellation for
// huge coordinates (falls back to log|N| - log|other|).
// Returns {log|sigma_1|, log|sigma_2|} (second unused when places() == 1).
std::pair<double, double> embed_logs(const QuadraticField& k, const Elem& x);

// exact sign of sigma_i(x) for real quadratic / Q (place in {0, 1})
int sigma_sign(const QuadraticField& k, const Elem& x, int place);

// embedding direction (scaled to avoid overflow); only the direction is
// meaningful for huge coordinates
VPoint embed_direction(const QuadraticField& k, const Elem& x);

// ---- V-point algebra (coordinate-wise; complex case uses C-multiplication) ----

VPoint vadd(const QuadraticField& k, const VPoint& s, const VPoint& t);
VPoint vsub(const QuadraticField& k, const VPoint& s, const VPoint& t);
VPoint vmul(const QuadraticField& k, const VPoint& s, const VPoint& t);
VPoint vinv(const QuadraticField& k, const VPoint& t);  // t in V^x
VPoint vscale(const QuadraticField& k, double c, const VPoint& t);
// paper norm ||v||: prod |v_i| over real places, |v|^2 on the complex place
double pnorm(const QuadraticField& k, const VPoint& v);

// ---- serialization -----------------------------------------------------------

Elem parse_elem(const QuadraticField& k, const std::string& s);  // "a+b*w"
std::string format_elem(const QuadraticField& k, const Elem& x);

// ---- lattice enumeration ------------------------------------------------------
// Visits every x = p + q*omega whose embedding lies in the closed bounding box
// [lo0,hi0] x [lo1,hi1] (second axis ignored for k = Q), with integer slack so
// the caller must re-test membership. Throws CapError beyond `cap` points.
void for_lattice_in_bbox(const QuadraticField& k, double lo0, double hi0, double lo1,
                         double hi1, long cap,
                         const std::function<void(long, long, const VPoint&)>& fn);

}  // namespace nopt
