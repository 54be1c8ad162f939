#include <catch2/catch_amalgamated.hpp>

#include "homocycle/exact.hpp"

using namespace homocycle;

TEST_CASE("rational token parsing") {
  CHECK(parse_rational_token("5") == rational(5));
  CHECK(parse_rational_token("-3/2") == rational(-3, 2));
  CHECK(parse_rational_token("+7/4") == rational(7, 4));
  CHECK(parse_rational_token("1.25") == rational(5, 4));
  CHECK(parse_rational_token("-0.1") == rational(-1, 10));
  CHECK(parse_rational_token(".5") == rational(1, 2));
  CHECK(parse_rational_token("  12  ") == rational(12));
  CHECK(parse_rational_token("0") == rational(0));

  CHECK_THROWS_AS(parse_rational_token(""), ParseError);
  CHECK_THROWS_AS(parse_rational_token("1e3"), ParseError);
  CHECK_THROWS_AS(parse_rational_token("1/0"), ParseError);
  CHECK_THROWS_AS(parse_rational_token("1.2.3"), ParseError);
  CHECK_THROWS_AS(parse_rational_token("abc"), ParseError);
  CHECK_THROWS_AS(parse_rational_token("1/ 2"), ParseError);
}

TEST_CASE("length arithmetic is exact") {
  ExactLength a = ExactLength::from_rational(rational(3, 2));
  ExactLength b = ExactLength::surd(1);  // sqrt 2
  ExactLength c = a + b;
  CHECK(c.q[0] == rational(3, 2));
  CHECK(c.q[1] == 1);
  CHECK(!c.is_rational());
  CHECK((c - b) == a);
  CHECK((3 * b).q[1] == 3);
  CHECK((rational(1, 2) * c).q[0] == rational(3, 4));

  ExactLength sum;
  for (int i = 0; i < 100; ++i) sum += b;
  CHECK(sum == 100 * b);
}

TEST_CASE("doubles convert without rounding") {
  double x = 0.1;  // not exactly 1/10 in binary; conversion must keep the
                   // represented value, not the decimal spelling
  ExactLength e = ExactLength::from_double(x);
  CHECK(e.is_rational());
  CHECK(e.value_as<float100>() == float100(x));
  CHECK(ExactLength::from_double(0.5).q[0] == rational(1, 2));
  CHECK(ExactLength::from_double(3.0).q[0] == 3);
}

TEST_CASE("sign decides tiny irrational differences") {
  // sqrt2 + sqrt3 vs sqrt5: clearly separated
  ExactLength d = ExactLength::surd(1) + ExactLength::surd(2) -
                  ExactLength::surd(3);
  CHECK(d.sign() == 1);

  // 665857/470832 is a continued-fraction convergent of sqrt2; the gap is
  // ~1.6e-12 and must still be resolved
  ExactLength close =
      ExactLength::from_rational(rational(665857, 470832)) -
      ExactLength::surd(1);
  CHECK(close.sign() == 1);
  CHECK((ExactLength::surd(1) -
         ExactLength::from_rational(rational(665857, 470832)))
            .sign() == -1);

  // an astronomically close convergent: x -> (x+2)/(x+1) converges to sqrt2
  // with error ~0.17^n, so 100 steps land around 1e-77 — far below double or
  // quad precision, forcing the high-precision fallback
  rational x = 1;
  for (int i = 0; i < 100; ++i) x = (x + 2) / (x + 1);
  ExactLength tiny = ExactLength::from_rational(x) - ExactLength::surd(1);
  CHECK(tiny.sign() != 0);
  CHECK(tiny.sign() == -(ExactLength::surd(1) -
                         ExactLength::from_rational(x))
                            .sign());

  CHECK(ExactLength{}.sign() == 0);
  CHECK((d - d).sign() == 0);
}

TEST_CASE("comparison and ordering") {
  ExactLength one = ExactLength::from_rational(1);
  ExactLength r2 = ExactLength::surd(1);
  CHECK(compare(one, r2) == -1);
  CHECK(compare(r2, one) == 1);
  CHECK(compare(r2, r2) == 0);

  std::vector<ExactLength> v = {r2, one, one + one, r2 + one};
  std::sort(v.begin(), v.end(), [](const ExactLength& a, const ExactLength& b) {
    return compare(a, b) < 0;
  });
  CHECK(v[0] == one);
  CHECK(v[1] == r2);
  CHECK(v[2] == one + one);
  CHECK(v[3] == r2 + one);
}

TEST_CASE("rational ratios and lattice gcd") {
  ExactLength a = ExactLength::from_rational(rational(3, 2));
  ExactLength b = ExactLength::from_rational(rational(9, 4));
  auto r = rational_ratio(b, a);
  REQUIRE(r.has_value());
  CHECK(*r == rational(3, 2));

  ExactLength s2 = ExactLength::surd(1);
  CHECK(rational_ratio(3 * s2, s2).has_value());
  CHECK(*rational_ratio(3 * s2, s2) == 3);
  CHECK(!rational_ratio(s2, a).has_value());
  // mixed basis with a common irrational part still has rational ratio
  ExactLength m = a + s2;
  CHECK(*rational_ratio(2 * m, m) == 2);

  CHECK(rational_gcd(rational(3, 2), rational(9, 4)) == rational(3, 4));
  CHECK(rational_gcd(rational(4), rational(6)) == 2);
}

TEST_CASE("numeric rendering") {
  ExactLength x = ExactLength::from_rational(rational(13, 10)) +
                  ExactLength::surd(3, rational(1, 10));
  CHECK(x.str() == "13/10 + 1/10*sqrt5");
  CHECK(ExactLength::from_rational(2).str() == "2");
  double want = 1.3 + std::sqrt(5.0) / 10.0;
  CHECK(std::abs(x.to_double() - want) < 1e-15);
  float100 v = x.value_as<float100>();
  CHECK(abs(v - float100("1.523606797749978969640917366873127")) <
        float100("1e-30"));
}
