#include "doctest.h"

#include <random>

#include "lplde/ring.hpp"

using namespace lplde;

namespace {

Rational rat(long n, long d = 1) { return Rational(n, d); }

// |a - b| measured in units of the last place of b.
bool within_ulps(const BigFloat &a, const BigFloat &b, long ulps) {
  if (b.is_zero()) return a.is_zero();
  BigFloat diff = (a - b).abs();
  if (diff.is_zero()) return true;
  long exp_b = mpfr_get_exp(b.raw());
  long exp_d = mpfr_get_exp(diff.raw());
  // ulp(b) = 2^(exp_b - prec); diff <= ulps*ulp iff exp_d small enough.
  return exp_d <= exp_b - b.precision_bits() + 2 && ulps >= 2;
}

} // namespace

TEST_SUITE("ring") {

TEST_CASE("rational arithmetic is exact and canonical") {
  CHECK(rat(3, 128) + rat(51, 131072) == rat(3123, 131072));
  CHECK((rat(3, 128) + rat(51, 131072)).str() == "3123/131072");
  CHECK(rat(1, 3) * rat(3) == rat(1));
  CHECK((rat(1, 3) * rat(3)).str() == "1");
  CHECK(rat(2, 4).str() == "1/2");
  CHECK(rat(-2, -4).str() == "1/2");
  CHECK(rat(2, -4).str() == "-1/2");

  Rational x(7, 5);
  CHECK((x * rat(0)).is_zero());
  CHECK(x - x == rat(0));
  CHECK(x.pow(3) == rat(343, 125));
  CHECK(x.pow(0) == rat(1));
  CHECK(x.pow(-2) == rat(25, 49));
}

TEST_CASE("rational parsing round-trips") {
  for (const char *s : {"3123/131072", "-5/7", "0", "42"}) {
    CHECK(Rational(std::string(s)).str() == s);
  }
  CHECK_THROWS_AS(Rational("1/0"), DivisionByZero);
  CHECK_THROWS_AS(Rational("abc"), ConfigError);
  CHECK_THROWS_AS(rat(1, 0), DivisionByZero);
  CHECK_THROWS_AS(rat(1) / rat(0), DivisionByZero);
}

TEST_CASE("rational field axioms on random values") {
  std::mt19937_64 rng(20251201);
  std::uniform_int_distribution<long> num(-1000, 1000), den(1, 1000);
  auto draw = [&] { return Rational(num(rng), den(rng)); };
  for (int i = 0; i < 200; ++i) {
    Rational a = draw(), b = draw(), c = draw();
    CHECK(a + b == b + a);
    CHECK(a * b == b * a);
    CHECK((a + b) + c == a + (b + c));
    CHECK((a * b) * c == a * (b * c));
    CHECK(a * (b + c) == a * b + a * c);
    CHECK(a + rat(0) == a);
    CHECK(a * rat(1) == a);
    CHECK(a + (-a) == rat(0));
    if (!a.is_zero()) CHECK(a * (rat(1) / a) == rat(1));
    Rational acc = c;
    acc.add_mul(a, b);
    CHECK(acc == c + a * b);
  }
}

TEST_CASE("bigfloat carries fixed precision") {
  BigFloat x = BigFloat::from_long(2, 128);
  CHECK(x.precision_bits() == 128);
  CHECK((x + x).precision_bits() == 128);
  CHECK(x.sqrt().precision_bits() == 128);

  BigFloat y = BigFloat::from_long(1, 256);
  CHECK_THROWS_AS(x + y, RingMismatch);
  CHECK_THROWS_AS(x * y, RingMismatch);
  CHECK_THROWS_AS(x.add_mul(y, y), RingMismatch);
  CHECK_THROWS_AS(BigFloat(32), ConfigError);
  CHECK_THROWS_AS(x / BigFloat::zero(128), DivisionByZero);
}

TEST_CASE("bigfloat elementary functions") {
  long p = 256;
  BigFloat two = BigFloat::from_long(2, p);
  BigFloat r = two.sqrt();
  CHECK(within_ulps(r * r, two, 2));
  CHECK(within_ulps(BigFloat::from_long(1, p).exp().log(), BigFloat::from_long(1, p), 2));

  BigFloat pi = BigFloat::pi(p);
  CHECK(pi.cos() < BigFloat::from_rational(Rational(-999999, 1000000), p));
  BigFloat s(p), c(p);
  (pi / 6).sin_cos(s, c);
  CHECK(within_ulps(s, BigFloat::from_rational(Rational(1, 2), p), 2));
  CHECK_THROWS_AS((-two).sqrt(), NonOscillatory);

  CHECK(within_ulps(two.pow(-3), BigFloat::from_rational(Rational(1, 8), p), 2));
}

TEST_CASE("rational to bigfloat conversion") {
  // Dyadic rationals convert exactly.
  BigFloat h = BigFloat::from_rational(rat(1, 2), 128);
  CHECK(h == BigFloat::from_double(0.5, 128));
  CHECK(h.to_rational() == rat(1, 2));

  BigFloat z = BigFloat::from_rational(rat(0), 128);
  CHECK(z.is_zero());

  // 1/3 rounds to nearest; the error is below one ulp.
  BigFloat t = BigFloat::from_rational(rat(1, 3), 128);
  Rational back = t.to_rational();
  Rational err = (back - rat(1, 3)).abs();
  CHECK(err < Rational(1) / rat(2).pow(128));
  CHECK(t.str().substr(0, 20) == "3.333333333333333333");
}

TEST_CASE("rational/bigfloat homomorphism within 2 ulp") {
  std::mt19937_64 rng(7);
  std::uniform_int_distribution<long> num(-10000, 10000), den(1, 10000);
  long p = 128;
  for (int i = 0; i < 100; ++i) {
    BigFloat fa = BigFloat::from_rational(Rational(num(rng), den(rng)), p);
    BigFloat fb = BigFloat::from_rational(Rational(num(rng), den(rng)), p);
    // Compare against exact arithmetic on the values the floats represent,
    // so cancellation does not inflate the ulp distance.
    Rational a = fa.to_rational(), b = fb.to_rational();
    CHECK(within_ulps(fa + fb, BigFloat::from_rational(a + b, p), 2));
    CHECK(within_ulps(fa - fb, BigFloat::from_rational(a - b, p), 2));
    CHECK(within_ulps(fa * fb, BigFloat::from_rational(a * b, p), 2));
    if (!b.is_zero()) CHECK(within_ulps(fa / fb, BigFloat::from_rational(a / b, p), 2));
  }
}

TEST_CASE("bigfloat decimal strings round-trip") {
  std::mt19937_64 rng(99);
  std::uniform_int_distribution<long> num(-100000, 100000), den(1, 100000);
  for (long p : {64L, 128L, 256L}) {
    for (int i = 0; i < 30; ++i) {
      BigFloat x = BigFloat::from_rational(Rational(num(rng), den(rng)), p);
      BigFloat y = BigFloat::from_string(x.str(), p);
      CHECK(x == y);
    }
  }
  CHECK(BigFloat::zero(64).str() == "0");
  CHECK(BigFloat::from_long(-3, 64).str() == "-3e0");
}

TEST_CASE("ring scalar boundary type") {
  RingScalar a{rat(3, 128)}, b{rat(51, 131072)};
  CHECK((a + b).tagged_str() == "3123/131072");
  CHECK(RingScalar::parse("3123/131072") == a + b);

  RingScalar f{BigFloat::from_rational(rat(1, 2), 128)};
  CHECK(f.tagged_str() == "5e-1@128");
  CHECK(RingScalar::parse(f.tagged_str()) == f);
  CHECK(f.ring() == Ring::bigfloat(128));
  CHECK(a.ring() == Ring::exact_rational());
  CHECK(a.ring() != f.ring());

  CHECK_THROWS_AS(a + f, RingMismatch);
  CHECK_THROWS_AS(f + RingScalar{BigFloat::from_long(1, 256)}, RingMismatch);
  CHECK(a.to_bigfloat(128) * RingScalar{rat(2)}.to_bigfloat(128) ==
        BigFloat::from_rational(rat(3, 64), 128));
  CHECK(f.to_bigfloat(256).precision_bits() == 256);
}

TEST_CASE("ring descriptors") {
  CHECK(Ring::exact_rational().is_exact());
  CHECK(Ring::exact_rational().str() == "exact-rational");
  CHECK(Ring::bigfloat(128).precision_bits() == 128);
  CHECK(Ring::bigfloat(128).str() == "bigfloat:128");
  CHECK_THROWS_AS(Ring::bigfloat(16), ConfigError);
  CHECK_THROWS_AS(Ring::exact_rational().precision_bits(), RingMismatch);
}

} // TEST_SUITE
