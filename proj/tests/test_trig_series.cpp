#include "doctest.h"

#include <random>

#include "lplde/trig_series.hpp"

using namespace lplde;

namespace {

using RSeries = TrigSeries<Rational>;
using FSeries = TrigSeries<BigFloat>;

Rational rat(long n, long d = 1) { return Rational(n, d); }

RSeries random_series(std::mt19937_64 &rng, long max_k = 6) {
  std::uniform_int_distribution<long> num(-20, 20), den(1, 20), kd(0, max_k);
  RSeries s(Ring::exact_rational());
  for (int i = 0; i < 5; ++i) {
    long k = kd(rng);
    Rational c(num(rng), den(rng));
    if (c.is_zero()) continue;
    s.add_cos(k, c);
    if (k > 0) s.add_sin(k, Rational(num(rng), den(rng)));
  }
  return s;
}

// |a - b| < 2^tol_exp2
bool close(const BigFloat &a, const BigFloat &b, long tol_exp2) {
  BigFloat d = (a - b).abs();
  return d.is_zero() || mpfr_get_exp(d.raw()) <= tol_exp2;
}

} // namespace

TEST_SUITE("trig_series") {

TEST_CASE("addition and scaling keep canonical form") {
  RSeries c1 = RSeries::cosine(1, rat(1));
  CHECK((c1 + (-c1)).is_zero());
  CHECK((c1 - c1).is_zero());

  RSeries s = RSeries::cosine(3, rat(1)) * rat(1, 4);
  CHECK(s.cos_coef(3) == rat(1, 4));
  CHECK(s.cos_terms().size() == 1);

  RSeries two = c1 + RSeries::cosine(3, rat(1));
  CHECK(two.cos_terms().size() == 2);
  CHECK(two.max_harmonic() == 3);
  CHECK(two.cos_coef(1) == rat(1));
  CHECK((two * rat(0)).is_zero());

  FSeries f = FSeries::cosine(1, BigFloat::from_long(1, 128));
  CHECK_THROWS_AS(f.add_cos(2, BigFloat::from_long(1, 256)), RingMismatch);
}

TEST_CASE("products expand by the product-to-sum identities") {
  RSeries c1 = RSeries::cosine(1, rat(1));
  RSeries s1 = RSeries::sine(1, rat(1));

  RSeries sq = c1 * c1;
  CHECK(sq.cos_coef(0) == rat(1, 2));
  CHECK(sq.cos_coef(2) == rat(1, 2));
  CHECK(sq.cos_terms().size() == 2);

  RSeries cube = sq * c1;
  CHECK(cube.cos_coef(1) == rat(3, 4));
  CHECK(cube.cos_coef(3) == rat(1, 4));
  CHECK(cube.cos_terms().size() == 2);
  CHECK(cube.sin_terms().empty());

  RSeries cs = c1 * s1;
  CHECK(cs.sin_coef(2) == rat(1, 2));
  CHECK(cs.cos_terms().empty());
  CHECK(cs.sin_terms().size() == 1);

  RSeries ss = s1 * s1;
  CHECK(ss.cos_coef(0) == rat(1, 2));
  CHECK(ss.cos_coef(2) == rat(-1, 2));

  // sin folding with negative index: sin(2t)cos(3t) = (sin 5t - sin t)/2
  RSeries r = RSeries::sine(2, rat(1)) * RSeries::cosine(3, rat(1));
  CHECK(r.sin_coef(5) == rat(1, 2));
  CHECK(r.sin_coef(1) == rat(-1, 2));
}

TEST_CASE("differentiation") {
  CHECK(RSeries::cosine(1, rat(1)).differentiate() == RSeries::sine(1, rat(-1)));
  CHECK(RSeries::cosine(3, rat(1)).differentiate() == RSeries::sine(3, rat(-3)));
  CHECK(RSeries::constant(rat(5)).differentiate().is_zero());
  CHECK(RSeries::sine(2, rat(1)).differentiate() == RSeries::cosine(2, rat(2)));
}

TEST_CASE("resonant part extraction") {
  RSeries a = RSeries::cosine(1, rat(3, 4)) + RSeries::cosine(3, rat(1, 4));
  auto [c1, s1] = a.resonant_part();
  CHECK(c1 == rat(3, 4));
  CHECK(s1 == rat(0));

  auto [c2, s2] = RSeries::sine(2, rat(1)).resonant_part();
  CHECK(c2 == rat(0));
  CHECK(s2 == rat(0));

  RSeries b = RSeries::sine(1, rat(2)) - RSeries::cosine(1, rat(1));
  auto [c3, s3] = b.resonant_part();
  CHECK(c3 == rat(-1));
  CHECK(s3 == rat(2));

  CHECK(b.without_resonant_part().is_zero());
}

TEST_CASE("linear oscillator inversion") {
  RSeries rhs = RSeries::cosine(3, rat(1));
  RSeries y = rhs.solve_linear_oscillator(rat(1));
  CHECK(y == RSeries::cosine(3, rat(-1, 8)));

  CHECK(RSeries::constant(rat(2)).solve_linear_oscillator(rat(4)) ==
        RSeries::constant(rat(1, 2)));

  CHECK_THROWS_AS(RSeries::cosine(1, rat(1)).solve_linear_oscillator(rat(1)),
                  ResonantRHS);
  CHECK_THROWS_AS(RSeries::sine(1, rat(1)).solve_linear_oscillator(rat(1)),
                  ResonantRHS);
}

TEST_CASE("oscillator inversion round-trips exactly") {
  std::mt19937_64 rng(31337);
  for (int i = 0; i < 50; ++i) {
    RSeries rhs = random_series(rng).without_resonant_part();
    Rational w0(7, 3);
    RSeries y = rhs.solve_linear_oscillator(w0);
    RSeries lhs = (y.differentiate().differentiate() + y) * w0;
    CHECK(lhs == rhs);
  }
}

TEST_CASE("evaluation") {
  long p = 256;
  BigFloat zero(p);
  CHECK(RSeries::cosine(1, rat(1)).evaluate(zero) == BigFloat::from_long(1, p));
  CHECK(RSeries::sine(2, rat(1)).evaluate(zero).is_zero());

  RSeries cube = RSeries::cosine(1, rat(3, 4)) + RSeries::cosine(3, rat(1, 4));
  CHECK(cube.evaluate(zero) == BigFloat::from_long(1, p));
  CHECK(cube.value_at_zero() == rat(1));
  CHECK(cube.derivative_at_zero() == rat(0));

  RSeries s = RSeries::sine(3, rat(2));
  CHECK(s.derivative_at_zero() == rat(6));
}

TEST_CASE("evaluation is multiplicative on random series") {
  std::mt19937_64 rng(424242);
  long p = 256;
  std::uniform_real_distribution<double> td(-3.0, 3.0);
  for (int i = 0; i < 10; ++i) {
    RSeries s = random_series(rng), t = random_series(rng);
    RSeries st = s * t;
    for (int j = 0; j < 10; ++j) {
      BigFloat tau = BigFloat::from_double(td(rng), p);
      BigFloat lhs = st.evaluate(tau);
      BigFloat rhs = s.evaluate(tau) * t.evaluate(tau);
      // Values are O(10^4) at 256 bits; 2^-230 leaves ~20 bits of slack.
      CHECK(close(lhs, rhs, -230));
    }
  }
}

TEST_CASE("differentiation satisfies the product rule") {
  std::mt19937_64 rng(5150);
  for (int i = 0; i < 30; ++i) {
    RSeries s = random_series(rng), t = random_series(rng);
    RSeries lhs = (s * t).differentiate();
    RSeries rhs = s.differentiate() * t + s * t.differentiate();
    CHECK(lhs == rhs);
  }
}

TEST_CASE("products of odd-harmonic cosine series stay odd-harmonic") {
  std::mt19937_64 rng(11);
  std::uniform_int_distribution<long> num(-9, 9), den(1, 9);
  for (int i = 0; i < 30; ++i) {
    RSeries a(Ring::exact_rational()), b(Ring::exact_rational()), c(Ring::exact_rational());
    for (long k : {1L, 3L, 5L}) {
      a.add_cos(k, Rational(num(rng), den(rng)));
      b.add_cos(k, Rational(num(rng), den(rng)));
      c.add_cos(k, Rational(num(rng), den(rng)));
    }
    RSeries abc = a * b * c;
    CHECK(abc.only_odd_harmonics());
    CHECK(abc.pure_cos());
    CHECK(abc.max_harmonic() <= 15);
  }
}

TEST_CASE("bigfloat series share one precision") {
  FSeries s(Ring::bigfloat(128));
  s.add_cos(1, BigFloat::from_long(2, 128));
  FSeries t(Ring::bigfloat(256));
  t.add_cos(1, BigFloat::from_long(2, 256));
  CHECK_THROWS_AS(s + t, RingMismatch);
  CHECK_THROWS_AS(s *t, RingMismatch);
  CHECK_THROWS_AS(s * BigFloat::from_long(1, 256), RingMismatch);

  FSeries conv = RSeries::cosine(3, rat(1, 4)).to_bigfloat(128);
  CHECK(conv.ring() == Ring::bigfloat(128));
  CHECK(conv.cos_coef(3) == BigFloat::from_rational(rat(1, 4), 128));

  CHECK(s.l1_norm() == BigFloat::from_long(2, 128));
  RSeries m = RSeries::cosine(1, rat(-3)) + RSeries::sine(2, rat(1, 2));
  CHECK(m.l1_norm() == rat(7, 2));
}

} // TEST_SUITE
