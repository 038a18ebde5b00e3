#include "lplde/ring.hpp"

#include <cstdlib>
#include <cstring>
#include <memory>

namespace lplde {

std::string Ring::str() const {
  return is_exact() ? "exact-rational" : "bigfloat:" + std::to_string(bits_);
}

Rational::Rational(long num, long den) {
  if (den == 0) throw DivisionByZero("rational with zero denominator");
  q_ = mpq_class(num, den);
  q_.canonicalize();
}

Rational::Rational(const std::string &s) {
  if (q_.set_str(s, 10) != 0)
    throw ConfigError("cannot parse rational: '" + s + "'");
  if (sgn(q_.get_den()) == 0) throw DivisionByZero("rational with zero denominator");
  q_.canonicalize();
}

Rational &Rational::operator/=(const Rational &o) {
  if (o.is_zero()) throw DivisionByZero();
  q_ /= o.q_;
  return *this;
}

Rational Rational::pow(long e) const {
  if (e == 0) return Rational(1);
  if (is_zero()) {
    if (e < 0) throw DivisionByZero("0 raised to a negative power");
    return Rational(0);
  }
  mpq_class base = e > 0 ? q_ : mpq_class(1 / q_);
  unsigned long n = static_cast<unsigned long>(e > 0 ? e : -e);
  mpq_class r;
  mpz_pow_ui(mpq_numref(r.get_mpq_t()), mpq_numref(base.get_mpq_t()), n);
  mpz_pow_ui(mpq_denref(r.get_mpq_t()), mpq_denref(base.get_mpq_t()), n);
  return Rational(r);
}

BigFloat::BigFloat(long precision_bits) {
  if (precision_bits < kMinPrecisionBits)
    throw ConfigError("BigFloat precision must be at least 64 bits");
  mpfr_init2(v_, precision_bits);
  mpfr_set_zero(v_, 1);
}

BigFloat::BigFloat(const BigFloat &o) {
  mpfr_init2(v_, mpfr_get_prec(o.v_));
  mpfr_set(v_, o.v_, MPFR_RNDN);
}

BigFloat::BigFloat(BigFloat &&o) noexcept {
  mpfr_init2(v_, mpfr_get_prec(o.v_));
  mpfr_swap(v_, o.v_);
}

BigFloat &BigFloat::operator=(const BigFloat &o) {
  if (this != &o) {
    mpfr_set_prec(v_, mpfr_get_prec(o.v_));
    mpfr_set(v_, o.v_, MPFR_RNDN);
  }
  return *this;
}

BigFloat &BigFloat::operator=(BigFloat &&o) noexcept {
  if (this != &o) mpfr_swap(v_, o.v_);
  return *this;
}

BigFloat::~BigFloat() { mpfr_clear(v_); }

BigFloat BigFloat::from_long(long v, long prec) {
  BigFloat r(prec);
  mpfr_set_si(r.v_, v, MPFR_RNDN);
  return r;
}

BigFloat BigFloat::from_double(double v, long prec) {
  BigFloat r(prec);
  mpfr_set_d(r.v_, v, MPFR_RNDN);
  return r;
}

BigFloat BigFloat::from_rational(const Rational &q, long prec) {
  BigFloat r(prec);
  mpfr_set_q(r.v_, q.raw().get_mpq_t(), MPFR_RNDN);
  return r;
}

BigFloat BigFloat::from_string(const std::string &s, long prec) {
  BigFloat r(prec);
  if (mpfr_set_str(r.v_, s.c_str(), 10, MPFR_RNDN) != 0)
    throw ConfigError("cannot parse bigfloat: '" + s + "'");
  return r;
}

BigFloat BigFloat::pi(long prec) {
  BigFloat r(prec);
  mpfr_const_pi(r.v_, MPFR_RNDN);
  return r;
}

BigFloat BigFloat::operator-() const {
  BigFloat r(precision_bits());
  mpfr_neg(r.v_, v_, MPFR_RNDN);
  return r;
}

BigFloat &BigFloat::operator+=(const BigFloat &o) {
  check_same(o);
  mpfr_add(v_, v_, o.v_, MPFR_RNDN);
  return *this;
}

BigFloat &BigFloat::operator-=(const BigFloat &o) {
  check_same(o);
  mpfr_sub(v_, v_, o.v_, MPFR_RNDN);
  return *this;
}

BigFloat &BigFloat::operator*=(const BigFloat &o) {
  check_same(o);
  mpfr_mul(v_, v_, o.v_, MPFR_RNDN);
  return *this;
}

BigFloat &BigFloat::operator/=(const BigFloat &o) {
  check_same(o);
  if (o.is_zero()) throw DivisionByZero();
  mpfr_div(v_, v_, o.v_, MPFR_RNDN);
  return *this;
}

BigFloat &BigFloat::operator/=(long k) {
  if (k == 0) throw DivisionByZero();
  mpfr_div_si(v_, v_, k, MPFR_RNDN);
  return *this;
}

BigFloat BigFloat::abs() const {
  BigFloat r(precision_bits());
  mpfr_abs(r.v_, v_, MPFR_RNDN);
  return r;
}

BigFloat BigFloat::sqrt() const {
  if (sign() < 0) throw NonOscillatory("square root of negative value");
  BigFloat r(precision_bits());
  mpfr_sqrt(r.v_, v_, MPFR_RNDN);
  return r;
}

BigFloat BigFloat::exp() const {
  BigFloat r(precision_bits());
  mpfr_exp(r.v_, v_, MPFR_RNDN);
  return r;
}

BigFloat BigFloat::log() const {
  if (sign() <= 0) throw ConfigError("log of non-positive value");
  BigFloat r(precision_bits());
  mpfr_log(r.v_, v_, MPFR_RNDN);
  return r;
}

BigFloat BigFloat::cos() const {
  BigFloat r(precision_bits());
  mpfr_cos(r.v_, v_, MPFR_RNDN);
  return r;
}

BigFloat BigFloat::sin() const {
  BigFloat r(precision_bits());
  mpfr_sin(r.v_, v_, MPFR_RNDN);
  return r;
}

void BigFloat::sin_cos(BigFloat &s, BigFloat &c) const {
  s = BigFloat(precision_bits());
  c = BigFloat(precision_bits());
  mpfr_sin_cos(s.v_, c.v_, v_, MPFR_RNDN);
}

BigFloat BigFloat::pow(long e) const {
  if (e < 0 && is_zero()) throw DivisionByZero("0 raised to a negative power");
  BigFloat r(precision_bits());
  mpfr_pow_si(r.v_, v_, e, MPFR_RNDN);
  return r;
}

Rational BigFloat::to_rational() const {
  if (!is_finite()) throw ConfigError("cannot convert non-finite bigfloat to rational");
  mpq_class q;
  mpfr_get_q(q.get_mpq_t(), v_);
  return Rational(q);
}

std::string BigFloat::str() const {
  if (is_zero()) return sign() < 0 ? "-0" : "0";
  if (!is_finite()) {
    if (mpfr_nan_p(v_)) return "nan";
    return sign() < 0 ? "-inf" : "inf";
  }
  mpfr_exp_t e;
  // n_digits = 0 asks MPFR for the minimal digit count that round-trips.
  char *raw = mpfr_get_str(nullptr, &e, 10, 0, v_, MPFR_RNDN);
  std::string digits(raw);
  mpfr_free_str(raw);

  std::string sign_part;
  if (!digits.empty() && digits[0] == '-') {
    sign_part = "-";
    digits.erase(0, 1);
  }
  // Strip trailing zeros (keep at least one digit).
  size_t last = digits.find_last_not_of('0');
  digits.erase(last + 1);

  std::string mant = digits.substr(0, 1);
  if (digits.size() > 1) mant += "." + digits.substr(1);
  // mpfr_get_str's exponent is relative to a 0.d1d2... mantissa.
  return sign_part + mant + "e" + std::to_string(e - 1);
}

const Rational &RingScalar::rational() const {
  if (!is_rational()) throw RingMismatch("scalar is not rational");
  return std::get<Rational>(v_);
}

const BigFloat &RingScalar::bigfloat() const {
  if (is_rational()) throw RingMismatch("scalar is not a bigfloat");
  return std::get<BigFloat>(v_);
}

namespace {
template <class Op>
RingScalar binop(const RingScalar &a, const RingScalar &b, Op op) {
  if (a.ring() != b.ring())
    throw RingMismatch("scalar rings differ: " + a.ring().str() + " vs " + b.ring().str());
  if (a.is_rational()) return RingScalar(op(a.rational(), b.rational()));
  return RingScalar(op(a.bigfloat(), b.bigfloat()));
}
} // namespace

RingScalar operator+(const RingScalar &a, const RingScalar &b) {
  return binop(a, b, [](const auto &x, const auto &y) { return x + y; });
}
RingScalar operator-(const RingScalar &a, const RingScalar &b) {
  return binop(a, b, [](const auto &x, const auto &y) { return x - y; });
}
RingScalar operator*(const RingScalar &a, const RingScalar &b) {
  return binop(a, b, [](const auto &x, const auto &y) { return x * y; });
}
RingScalar operator/(const RingScalar &a, const RingScalar &b) {
  return binop(a, b, [](const auto &x, const auto &y) { return x / y; });
}

RingScalar RingScalar::operator-() const {
  if (is_rational()) return RingScalar(-rational());
  return RingScalar(-bigfloat());
}

bool operator==(const RingScalar &a, const RingScalar &b) {
  if (a.ring() != b.ring()) return false;
  if (a.is_rational()) return a.rational() == b.rational();
  return a.bigfloat() == b.bigfloat();
}

BigFloat RingScalar::to_bigfloat(long precision_bits) const {
  if (is_rational()) return BigFloat::from_rational(rational(), precision_bits);
  const BigFloat &f = bigfloat();
  BigFloat r(precision_bits);
  mpfr_set(r.raw(), f.raw(), MPFR_RNDN);
  return r;
}

bool RingScalar::is_zero() const {
  return is_rational() ? rational().is_zero() : bigfloat().is_zero();
}

double RingScalar::to_double() const {
  return is_rational() ? rational().to_double() : bigfloat().to_double();
}

std::string RingScalar::tagged_str() const {
  if (is_rational()) return rational().str();
  const BigFloat &f = bigfloat();
  return f.str() + "@" + std::to_string(f.precision_bits());
}

RingScalar RingScalar::parse(const std::string &s) {
  auto at = s.rfind('@');
  if (at == std::string::npos) return RingScalar(Rational(s));
  long bits = 0;
  try {
    bits = std::stol(s.substr(at + 1));
  } catch (const std::exception &) {
    throw ConfigError("bad precision tag in scalar: '" + s + "'");
  }
  return RingScalar(BigFloat::from_string(s.substr(0, at), bits));
}

} // namespace lplde
