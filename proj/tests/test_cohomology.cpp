#include <doctest.h>

#include <random>

#include "calabi/cohomology.hpp"
#include "calabi/errors.hpp"

using namespace calabi;

TEST_CASE("rational parsing and arithmetic") {
  CHECK(Rational::parse("5/2")->num() == 5);
  CHECK(Rational::parse("5/2")->den() == 2);
  CHECK(*Rational::parse("2.5") == Rational(5, 2));
  CHECK(*Rational::parse("-3") == Rational(-3));
  CHECK(*Rational::parse("1e-3") == Rational(1, 1000));
  CHECK(*Rational::parse("  10/4") == Rational(5, 2));
  CHECK(!Rational::parse("abc"));
  CHECK(!Rational::parse(""));
  CHECK(!Rational::parse("1/0"));
  CHECK(!Rational::parse("1.2.3"));

  CHECK(Rational(1, 3) + Rational(1, 6) == Rational(1, 2));
  CHECK(Rational(1, 3) - Rational(1, 2) == Rational(-1, 6));
  CHECK(Rational(2, 3) * Rational(9, 4) == Rational(3, 2));
  CHECK(Rational(1, 2) / Rational(1, 8) == Rational(4));
  CHECK(Rational(1, 3) < Rational(1, 2));
  CHECK(Rational(5, 2).str() == "5/2");
  CHECK(Rational(4, 2).str() == "2");
  CHECK(Rational(3, -6) == Rational(-1, 2));
}

TEST_CASE("classify: the three cases and the singular time") {
  SUBCASE("case I via a0(n+k) > b0(n-k), k < n") {
    const auto rep = classify(SurfaceParams::make_exact(3, 1, Rational(2), Rational(3)));
    CHECK(rep.case_label == Case::I);
    CHECK(rep.T == doctest::Approx(0.5).epsilon(1e-15));
    CHECK(*rep.T_exact == Rational(1, 2));
    CHECK(rep.aT == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(rep.bT == doctest::Approx(1.0).epsilon(1e-15));
  }
  SUBCASE("case II via exact equality") {
    const auto rep = classify(SurfaceParams::make_exact(2, 1, Rational(1), Rational(3)));
    CHECK(rep.case_label == Case::II);
    CHECK(*rep.T_exact == Rational(1));
    CHECK(rep.aT == 0.0);
    CHECK(rep.bT == 0.0);
  }
  SUBCASE("case III") {
    const auto rep = classify(SurfaceParams::make_exact(2, 1, Rational(1), Rational(4)));
    CHECK(rep.case_label == Case::III);
    CHECK(rep.T == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(rep.aT == 0.0);
    // b_T = b0 - (k+n) T = 4 - 3
    CHECK(rep.bT == doctest::Approx(1.0).epsilon(1e-15));
  }
  SUBCASE("k >= n is always case I") {
    const auto rep = classify(SurfaceParams::make(2, 2, 1.0, 5.0));
    CHECK(rep.case_label == Case::I);
    CHECK(rep.T == doctest::Approx(1.0).epsilon(1e-15));
  }
  SUBCASE("cone violations") {
    CHECK_THROWS_AS(classify(SurfaceParams::make(2, 1, 3.0, 2.0)), invalid_params);
    CHECK_THROWS_AS(classify(SurfaceParams::make(2, 1, -1.0, 2.0)), invalid_params);
    CHECK_THROWS_AS(classify(SurfaceParams::make(1, 1, 1.0, 2.0)), invalid_params);
    CHECK_THROWS_AS(classify(SurfaceParams::make(2, 0, 1.0, 2.0)), invalid_params);
  }
  SUBCASE("case II equality tolerance in the double path") {
    CHECK(classify(SurfaceParams::make(2, 1, 1.0, 3.0 * (1.0 + 5e-13))).case_label == Case::II);
    CHECK(classify(SurfaceParams::make(2, 1, 1.0, 3.0 * (1.0 + 1e-10))).case_label == Case::III);
    CHECK(classify(SurfaceParams::make(2, 1, 1.0, 3.0 * (1.0 - 1e-10))).case_label == Case::I);
  }
}

TEST_CASE("class_at evolves the coefficients linearly") {
  const auto p = SurfaceParams::make(3, 1, 2.0, 3.0);
  SUBCASE("interior time") {
    const auto s = class_at(p, 0.25);
    CHECK(s.a == doctest::Approx(1.5).epsilon(1e-15));
    CHECK(s.b == doctest::Approx(2.0).epsilon(1e-15));
  }
  SUBCASE("t = 0 is the initial class") {
    const auto s = class_at(p, 0.0);
    CHECK(s.a == 2.0);
    CHECK(s.b == 3.0);
  }
  SUBCASE("t = T and negative t are rejected") {
    CHECK_THROWS_AS(class_at(p, 0.5), out_of_range_time);
    CHECK_THROWS_AS(class_at(p, 0.7), out_of_range_time);
    CHECK_THROWS_AS(class_at(p, -0.1), out_of_range_time);
  }
}

TEST_CASE("cone membership holds along every classified run") {
  std::mt19937_64 rng(1234);
  std::uniform_int_distribution<int> un(2, 5), uk(1, 5);
  std::uniform_real_distribution<double> ua(0.1, 5.0), ug(0.1, 5.0), ut(0.0, 1.0);
  for (int trial = 0; trial < 500; ++trial) {
    const int n = un(rng), k = uk(rng);
    const double a0 = ua(rng);
    const auto p = SurfaceParams::make(n, k, a0, a0 + ug(rng));
    const auto rep = classify(p);
    const double t = ut(rng) * rep.T * (1.0 - 1e-9);
    const auto s = class_at(p, t);
    CHECK(s.a > 0.0);
    CHECK(s.a < s.b);
  }
}

TEST_CASE("classify is scale invariant; T scales with the class") {
  std::mt19937_64 rng(99);
  std::uniform_int_distribution<int> un(2, 5), uk(1, 5);
  std::uniform_real_distribution<double> ua(0.1, 5.0), ug(0.1, 5.0), ul(0.1, 10.0);
  for (int trial = 0; trial < 200; ++trial) {
    const int n = un(rng), k = uk(rng);
    const double a0 = ua(rng), b0 = a0 + ug(rng), lam = ul(rng);
    const auto r1 = classify(SurfaceParams::make(n, k, a0, b0));
    const auto r2 = classify(SurfaceParams::make(n, k, lam * a0, lam * b0));
    CHECK(r1.case_label == r2.case_label);
    CHECK(r2.T == doctest::Approx(lam * r1.T).epsilon(1e-12));
  }
  // exact path
  const auto r1 = classify(SurfaceParams::make_exact(2, 1, Rational(1), Rational(3)));
  const auto r2 =
      classify(SurfaceParams::make_exact(2, 1, Rational(7, 3), Rational(7)));
  CHECK(r1.case_label == r2.case_label);
  CHECK(*r2.T_exact == Rational(7, 3) * *r1.T_exact);
}

TEST_CASE("case I limit coefficient matches the closed form") {
  std::mt19937_64 rng(7);
  std::uniform_int_distribution<int> un(2, 5), uk(1, 6);
  std::uniform_real_distribution<double> ua(0.1, 5.0), ug(0.1, 5.0);
  int found = 0;
  for (int trial = 0; trial < 400; ++trial) {
    const int n = un(rng), k = uk(rng);
    const double a0 = ua(rng), b0 = a0 + ug(rng);
    const auto rep = classify(SurfaceParams::make(n, k, a0, b0));
    if (rep.case_label != Case::I) continue;
    ++found;
    const double aT_formula = (a0 * (n + k) - b0 * (n - k)) / (2.0 * k);
    CHECK(rep.aT == doctest::Approx(aT_formula).epsilon(1e-13));
    CHECK(rep.aT == doctest::Approx(rep.bT).epsilon(1e-12));
    CHECK(rep.aT > 0.0);
  }
  CHECK(found > 50);
}
