#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <set>

#include "nopt/cylinder.hpp"
#include "nopt/domain.hpp"
#include "nopt/primes.hpp"
#include "oracles.hpp"

using namespace nopt;

namespace {
const QuadraticField& QI = QuadraticField::get(-1);
const QuadraticField& Q2 = QuadraticField::get(2);
const QuadraticField& Q5 = QuadraticField::get(5);
const QuadraticField& Qm3 = QuadraticField::get(-3);
const QuadraticField& QQ = QuadraticField::get(1);

Elem E(long a, long b) { return Elem(mpz_class(a), mpz_class(b)); }
}  // namespace

TEST_CASE("field invariants") {
  CHECK(QI.disc() == -4);
  CHECK(QI.torsion_order() == 4);
  CHECK(QI.class_number() == 1);
  CHECK(Qm3.disc() == -3);
  CHECK(Qm3.torsion_order() == 6);
  CHECK(Q2.disc() == 8);
  CHECK(Q2.fundamental_unit() == E(1, 1));
  CHECK(Q2.fundamental_unit_norm() == -1);
  CHECK(Q2.regulator() == doctest::Approx(std::log(1 + std::sqrt(2.0))).epsilon(1e-12));
  CHECK(Q5.fundamental_unit() == E(0, 1));  // golden ratio
  CHECK(Q5.regulator() == doctest::Approx(std::log((1 + std::sqrt(5.0)) / 2)).epsilon(1e-12));
  CHECK(QuadraticField::get(3).fundamental_unit() == E(2, 1));
  CHECK(QuadraticField::get(3).fundamental_unit_norm() == 1);
  CHECK(QQ.degree() == 1);
  CHECK(QQ.disc() == 1);
  // r1 + 2 r2 = N
  for (const QuadraticField* k : {&QI, &Q2, &Q5, &Qm3, &QQ})
    CHECK(k->r1() + 2 * k->r2() == k->degree());
}

TEST_CASE("class numbers match known values") {
  CHECK(QuadraticField::get(-5).class_number() == 2);
  CHECK(QuadraticField::get(-23).class_number() == 3);
  CHECK(QuadraticField::get(-47).class_number() == 5);
  CHECK(QuadraticField::get(10).class_number() == 2);
  CHECK(QuadraticField::get(79).class_number() == 3);
  CHECK(QuadraticField::get(223).class_number() == 3);
}

TEST_CASE("field spec strings") {
  CHECK(&QuadraticField::parse("Q") == &QQ);
  CHECK(&QuadraticField::parse("Q(i)") == &QI);
  CHECK(&QuadraticField::parse("Q(sqrt:2)") == &Q2);
  CHECK(&QuadraticField::parse("Q(sqrt:-1)") == &QI);
  CHECK_THROWS_AS(QuadraticField::parse("Q(sqrt:4)"), ParseError);
  CHECK_THROWS_AS(QuadraticField::parse("nonsense"), ParseError);
  CHECK(Q2.spec_string() == "Q(sqrt:2)");
}

TEST_CASE("norm examples") {
  CHECK(norm(QI, E(1, 1)) == 2);       // N(1+i)
  CHECK(norm(QI, E(0, 0)) == 0);
  CHECK(norm(Q2, E(1, 1)) == -1);      // N(1+sqrt2)
  CHECK(abs_norm(Q2, E(1, 1)) == 1);
  CHECK(norm(QQ, E(-7, 0)) == -7);
}

TEST_CASE("norm multiplicativity on random pairs") {
  Rng rng(42);
  std::uniform_int_distribution<long> coord(-50, 50);
  for (const QuadraticField* k : {&QI, &Q2, &Q5, &Qm3}) {
    for (int i = 0; i < 2500; ++i) {
      Elem x = E(coord(rng), coord(rng)), y = E(coord(rng), coord(rng));
      CHECK(norm(*k, mul(*k, x, y)) == norm(*k, x) * norm(*k, y));
    }
  }
}

TEST_CASE("embedding examples and norm product property") {
  VPoint v = embed(Q2, E(1, 1));
  CHECK(v.v0 == doctest::Approx(2.41421356).epsilon(1e-8));
  CHECK(v.v1 == doctest::Approx(-0.41421356).epsilon(1e-8));
  VPoint z = embed(QI, E(1, 1));
  CHECK(z.v0 == 1.0);
  CHECK(z.v1 == 1.0);
  CHECK(pnorm(QI, z) == doctest::Approx(2.0));
  VPoint o = embed(Q5, E(0, 0));
  CHECK(o.v0 == 0.0);
  CHECK(o.v1 == 0.0);

  Rng rng(7);
  std::uniform_int_distribution<long> coord(-1000, 1000);
  std::uniform_int_distribution<long> big(-1000000, 1000000);  // ||x|| up to ~1e12
  for (const QuadraticField* k : {&QI, &Q2, &Q5, &Qm3, &QQ}) {
    for (int i = 0; i < 500; ++i) {
      Elem x = E(coord(rng), coord(rng));
      if (x.is_zero()) continue;
      double n = to_double(abs_norm(*k, x));
      CHECK(pnorm(*k, embed(*k, x)) == doctest::Approx(n).epsilon(1e-9));
    }
    for (int i = 0; i < 200; ++i) {
      Elem x = E(big(rng), big(rng));
      if (x.is_zero()) continue;
      double n = to_double(abs_norm(*k, x));
      if (n > 1e12 || n == 0) continue;
      CHECK(pnorm(*k, embed(*k, x)) == doctest::Approx(n).epsilon(1e-9));
    }
  }
}

TEST_CASE("embed_logs is robust for huge coordinates") {
  Elem u = unit_pow(Q2, Q2.fundamental_unit(), 400);  // astronomically large coords
  auto [l1, l2] = embed_logs(Q2, u);
  double R = Q2.regulator();
  CHECK(l1 == doctest::Approx(400 * R).epsilon(1e-9));
  CHECK(l2 == doctest::Approx(-400 * R).epsilon(1e-6));
}

TEST_CASE("factor_rational_prime in Q(i)") {
  auto f5 = factor_rational_prime(QI, 5);
  REQUIRE(f5.size() == 2);
  CHECK(f5[0].kind == PrimeKind::split);
  CHECK(f5[0].residue_norm() == 5);
  REQUIRE(f5[0].generator.has_value());
  CHECK(abs_norm(QI, *f5[0].generator) == 5);
  CHECK(f5[0].c != f5[1].c);

  auto f2 = factor_rational_prime(QI, 2);
  REQUIRE(f2.size() == 1);
  CHECK(f2[0].kind == PrimeKind::ramified);
  CHECK(f2[0].residue_norm() == 2);
  REQUIRE(f2[0].generator.has_value());
  CHECK(abs_norm(QI, *f2[0].generator) == 2);

  auto f3 = factor_rational_prime(QI, 3);
  REQUIRE(f3.size() == 1);
  CHECK(f3[0].kind == PrimeKind::inert);
  CHECK(f3[0].residue_norm() == 9);

  CHECK_THROWS_AS(factor_rational_prime(QI, 6), ParseError);
}

TEST_CASE("sum of e*f = 2 over primes above p") {
  for (const QuadraticField* k : {&QI, &Q2, &Q5, &Qm3, &QuadraticField::get(-7),
                                  &QuadraticField::get(13), &QuadraticField::get(-15)}) {
    for (long p : {2L, 3L, 5L, 7L, 11L, 13L, 17L, 19L, 23L, 29L, 31L, 41L, 97L}) {
      auto fs = factor_rational_prime(*k, p);
      long total = 0;
      for (auto& P : fs) total += P.ramification() * P.f;
      // split contributes 1+1 via two ideals
      if (fs.size() == 2) total = fs[0].f + fs[1].f;
      CHECK(total == 2);
    }
  }
}

TEST_CASE("valuation examples") {
  auto f2 = factor_rational_prime(QI, 2);
  CHECK(valuation(QI, E(2, 0), f2[0]) == 2);  // 2 = -i (1+i)^2
  CHECK(valuation(QI, E(1, 0), f2[0]) == 0);
  CHECK(!valuation(QI, E(0, 0), f2[0]).has_value());  // v(0) sentinel
}

TEST_CASE("valuation consistency against HNF ideal membership") {
  for (const QuadraticField* kp : {&QI, &Q2, &Q5, &Qm3}) {
    const QuadraticField& k = *kp;
    std::vector<PrimeIdeal> primes;
    for (auto& P : prime_ideals_norm_up_to(k, 50)) primes.push_back(P);
    Rng rng(99);
    std::uniform_int_distribution<long> coord(-20, 20);
    for (int i = 0; i < 200; ++i) {
      Elem x = E(coord(rng), coord(rng));
      if (x.is_zero()) continue;
      for (const auto& P : primes) {
        auto v = valuation(k, x, P);
        REQUIRE(v.has_value());
        CHECK(*v == oracle::valuation_by_membership(k, x, P));
      }
    }
  }
}

TEST_CASE("valuation is additive") {
  Rng rng(5);
  std::uniform_int_distribution<long> coord(-30, 30);
  for (const QuadraticField* kp : {&QI, &Q2, &Qm3}) {
    const QuadraticField& k = *kp;
    auto primes = prime_ideals_norm_up_to(k, 30);
    for (int i = 0; i < 300; ++i) {
      Elem x = E(coord(rng), coord(rng)), y = E(coord(rng), coord(rng));
      if (x.is_zero() || y.is_zero()) continue;
      for (const auto& P : primes)
        CHECK(*valuation(k, mul(k, x, y), P) == *valuation(k, x, P) + *valuation(k, y, P));
    }
  }
}

TEST_CASE("residue classes") {
  auto f2 = factor_rational_prime(QI, 2);
  auto r = residue_classes(QI, f2[0], 1);
  CHECK(r.size() == 2);

  auto f3 = factor_rational_prime(QI, 3);
  auto r9 = residue_classes(QI, f3[0], 1);
  CHECK(r9.size() == 9);

  // pairwise incongruent and complete, against HNF membership
  for (const QuadraticField* kp : {&QI, &Q2, &Qm3, &Q5}) {
    const QuadraticField& k = *kp;
    for (long p : {2L, 3L, 5L}) {
      for (auto& P : factor_rational_prime(k, p)) {
        for (long l = 1; l <= 3; ++l) {
          if (P.residue_norm() > 30) continue;
          ResidueSystem rs(k, P, l);
          if (rs.class_count() > 200) continue;
          auto reps = rs.representatives(1000);
          CHECK(mpz_class((long)reps.size()) == rs.class_count());
          // distinct indices
          std::set<std::string> seen;
          oracle::HnfIdeal Pl = oracle::prime_ideal_hnf(k, P);
          oracle::HnfIdeal power = Pl;
          for (long j = 1; j < l; ++j) power = oracle::ideal_product(k, power, Pl);
          for (size_t i = 0; i < reps.size(); ++i) {
            CHECK(seen.insert(rs.index(reps[i]).get_str()).second);
            for (size_t j = i + 1; j < reps.size(); ++j)
              CHECK(!oracle::ideal_contains(power, reps[i] - reps[j]));
          }
          // index is constant on classes: x and x + p^l stay together
          Elem x = reps[reps.size() / 2];
          mpz_class pl;
          mpz_pow_ui(pl.get_mpz_t(), P.p.get_mpz_t(), l);
          CHECK(rs.index(x) == rs.index(x + Elem(pl, 0)));
        }
      }
    }
  }
  CHECK_THROWS_AS(residue_classes(QI, f3[0], 12, 1000), CapError);
}

TEST_CASE("residue index agrees with HNF membership partition") {
  for (const QuadraticField* kp : {&QI, &Q2, &Qm3, &QuadraticField::get(10)}) {
    const QuadraticField& k = *kp;
    for (long p : {2L, 5L}) {
      for (auto& P : factor_rational_prime(k, p)) {
        for (long l = 1; l <= 3; ++l) {
          ResidueSystem rs(k, P, l);
          oracle::HnfIdeal Pl = oracle::prime_ideal_hnf(k, P);
          oracle::HnfIdeal power = Pl;
          for (long j = 1; j < l; ++j) power = oracle::ideal_product(k, power, Pl);
          Rng rng(1234 + p + l);
          std::uniform_int_distribution<long> coord(-40, 40);
          for (int i = 0; i < 150; ++i) {
            Elem x = E(coord(rng), coord(rng)), y = E(coord(rng), coord(rng));
            bool same = rs.index(x) == rs.index(y);
            CHECK(same == oracle::ideal_contains(power, x - y));
          }
        }
      }
    }
  }
}

TEST_CASE("units_in_box") {
  auto ui = units_in_box(QI, 5);
  CHECK(ui.size() == 4);  // {1, i, -1, -i} regardless of M
  auto u2 = units_in_box(Q2, 1);
  CHECK(u2.size() == 6);
  for (auto& u : u2) CHECK(abs_norm(Q2, u) == 1);
  auto u0 = units_in_box(Q2, 0);
  CHECK(u0.size() == 2);  // torsion only
  auto um3 = units_in_box(Qm3, 3);
  CHECK(um3.size() == 6);
}

TEST_CASE("lattice points in cylinders") {
  // unit ball at 0 in Q(i): 0, +-1, +-i
  Cylinder c;
  c.center = {0, 0};
  c.r0 = 1.0;
  auto r = count_lattice_in_cylinder(QI, c);
  CHECK(r.count == 5);
  CHECK(r.volume == doctest::Approx(2 * M_PI));

  // empty: radius 0 off-lattice
  Cylinder e;
  e.center = {0.5, 0.25};
  e.r0 = 0.0;
  e.r1 = 0.0;
  CHECK(count_lattice_in_cylinder(QI, e).count == 0);

  // box |v1|,|v2| <= 3 in Q(sqrt2) against a direct coordinate scan
  Cylinder b;
  b.center = {0, 0};
  b.r0 = 3.0;
  b.r1 = 3.0;
  long brute = 0;
  for (long p = -10; p <= 10; ++p)
    for (long q = -10; q <= 10; ++q) {
      VPoint v = embed(Q2, E(p, q));
      if (std::fabs(v.v0) <= 3 && std::fabs(v.v1) <= 3) ++brute;
    }
  CHECK(count_lattice_in_cylinder(Q2, b).count == brute);
}

TEST_CASE("element strings round-trip") {
  CHECK(parse_elem(QI, "1+1*w") == E(1, 1));
  CHECK(parse_elem(QI, "i") == E(0, 1));
  CHECK(parse_elem(Q2, "-3+2*w") == E(-3, 2));
  CHECK(parse_elem(Q2, "w") == E(0, 1));
  CHECK(parse_elem(Q2, "4") == E(4, 0));
  CHECK(parse_elem(QQ, "5+1*w") == E(6, 0));  // omega = 1 collapses
  CHECK(format_elem(Q2, E(1, -2)) == "1-2*w");
  CHECK(format_elem(QQ, E(-7, 0)) == "-7");
  CHECK(parse_elem(Q2, format_elem(Q2, E(-123, 456))) == E(-123, 456));
  CHECK_THROWS_AS(parse_elem(Q2, "1++"), ParseError);
  CHECK_THROWS_AS(parse_elem(Q2, ""), ParseError);
}

TEST_CASE("exact division") {
  auto q = divide_exact(QI, E(2, 0), E(1, 1));
  REQUIRE(q.has_value());
  CHECK(mul(QI, *q, E(1, 1)) == E(2, 0));
  CHECK(!divide_exact(QI, E(1, 0), E(1, 1)).has_value());
  CHECK(!divide_exact(QI, E(1, 0), E(0, 0)).has_value());
}
