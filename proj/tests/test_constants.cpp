#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "nopt/constants.hpp"
#include "nopt/counting.hpp"
#include "nopt/energy.hpp"
#include "oracles.hpp"

using namespace nopt;

namespace {
const QuadraticField& QI = QuadraticField::get(-1);
const QuadraticField& Q2 = QuadraticField::get(2);
const QuadraticField& Qm3 = QuadraticField::get(-3);
const QuadraticField& QQ = QuadraticField::get(1);
}  // namespace

TEST_CASE("Euler-Mascheroni") {
  CHECK(euler_mascheroni() == doctest::Approx(0.57721566490153286).epsilon(1e-12));
}

TEST_CASE("hurwitz zeta sanity") {
  // zeta(2) = pi^2/6; zeta(s, 1/2) = (2^s - 1) zeta(s)
  CHECK(hurwitz_zeta(2.0, 1.0) == doctest::Approx(M_PI * M_PI / 6).epsilon(1e-12));
  CHECK(hurwitz_zeta(2.0, 0.5) == doctest::Approx(3 * M_PI * M_PI / 6).epsilon(1e-12));
}

TEST_CASE("residue rho") {
  CHECK(residue_rho(QI).value == doctest::Approx(M_PI / 4).epsilon(1e-12));
  CHECK(residue_rho(Q2).value ==
        doctest::Approx(2 * std::log(1 + std::sqrt(2.0)) / std::sqrt(8.0)).epsilon(1e-12));
  CHECK(residue_rho(QQ).value == 1.0);
}

TEST_CASE("L(s) via Hurwitz matches the residue at s -> 1") {
  // L(1, chi_-4) = pi/4; evaluate just above 1 and compare
  double near = dirichlet_l(QI, 1.0 + 1e-7);
  CHECK(near == doctest::Approx(M_PI / 4).epsilon(1e-5));
  // known closed form at s = 2 for chi_-4 (Catalan's constant)
  CHECK(dirichlet_l(QI, 2.0) == doctest::Approx(0.91596559417721901).epsilon(1e-10));
}

TEST_CASE("gamma_k for Q(i)") {
  auto g = gamma_euler_kronecker(QI);
  CHECK(g.value == doctest::Approx(0.8228252496).epsilon(2e-4));
  CHECK(g.error < 1e-4);
}

TEST_CASE("gamma_k dual-route agreement") {
  for (const QuadraticField* kp : {&QI, &Q2, &Qm3, &QuadraticField::get(5)}) {
    auto& fc = field_constants(*kp);
    CHECK(fc.route_gap < 1e-4);
  }
}

TEST_CASE("error-bound honesty: halving the term cap stays within the bound") {
  for (const QuadraticField* kp : {&QI, &Q2, &Qm3}) {
    auto full = gamma_euler_kronecker(*kp, 8000000);
    auto half = gamma_euler_kronecker(*kp, 4000000);
    CHECK(std::fabs(full.value - half.value) <= full.error + half.error);
  }
}

TEST_CASE("paper energy constant") {
  auto ci = energy_lower_constant(QI);
  CHECK(ci.value == doctest::Approx(-2.43875691).epsilon(5e-4));
  CHECK(ci.error < 1e-3);
  auto cq = energy_lower_constant(QQ);
  CHECK(cq.value == -1.5);
}

TEST_CASE("counting cross-validation: principal ideals per unit norm") {
  for (const QuadraticField* kp : {&QI, &Q2, &Qm3}) {
    const QuadraticField& k = *kp;
    auto r = principal_ideal_sum(k, 100000, 0);
    double target = residue_rho(k).value / k.class_number();
    CHECK(std::fabs(r.sum / 100000.0 - target) / target < 0.02);
  }
}

TEST_CASE("energy lower bound holds on 1000 random probability grids per field") {
  Rng rng(424243);
  std::uniform_real_distribution<double> u01(0, 1);
  for (const QuadraticField* kp : {&Q2, &Qm3}) {
    const QuadraticField& k = *kp;
    double bound = energy_lower_constant(k).value;
    long violations = 0;
    for (int it = 0; it < 1000; ++it) {
      DensityGrid g = make_grid_box(k, 1.2, 64);
      fill_rect(g, -1.1, -1.1, 1.1, 1.1, 0.06);
      int blobs = 2 + (int)(rng() % 4);
      for (int b = 0; b < blobs; ++b) {
        double cx = -0.8 + 1.6 * u01(rng), cy = -0.8 + 1.6 * u01(rng);
        double w = 0.1 + 0.5 * u01(rng), h = 0.1 + 0.5 * u01(rng);
        fill_rect(g, cx - w / 2, cy - h / 2, cx + w / 2, cy + h / 2, 0.3 + 0.7 * u01(rng));
      }
      scale_to_mass(g, 1.0);
      EnergyReport r = energy(g);
      if (r.I < bound - r.quadrature_error - 1e-6) ++violations;
    }
    CHECK(violations == 0);
  }
}
