#ifndef LPLDE_RING_HPP
#define LPLDE_RING_HPP

#include <gmpxx.h>
#include <mpfr.h>

#include <cstdint>
#include <string>
#include <variant>

#include "lplde/errors.hpp"

namespace lplde {

constexpr long kMinPrecisionBits = 64;
constexpr long kDefaultPrecisionBits = 256;

// Descriptor of a coefficient ring: the exact rational field, or binary
// floating point at a fixed precision.
class Ring {
public:
  static Ring exact_rational() { return Ring(0); }
  static Ring bigfloat(long precision_bits) {
    if (precision_bits < kMinPrecisionBits)
      throw ConfigError("BigFloat precision must be at least 64 bits");
    return Ring(precision_bits);
  }

  bool is_exact() const { return bits_ == 0; }
  long precision_bits() const {
    if (is_exact())
      throw RingMismatch("exact rational ring has no precision");
    return bits_;
  }

  friend bool operator==(const Ring &a, const Ring &b) { return a.bits_ == b.bits_; }
  friend bool operator!=(const Ring &a, const Ring &b) { return a.bits_ != b.bits_; }

  std::string str() const;

private:
  explicit Ring(long bits) : bits_(bits) {}
  long bits_; // 0 = exact rational
};

// Arbitrary-precision rational, always in lowest terms with positive
// denominator (GMP keeps mpq_t canonical through arithmetic).
class Rational {
public:
  Rational() : q_(0) {}
  Rational(long n) : q_(n) {}
  Rational(long num, long den);
  explicit Rational(const mpq_class &q) : q_(q) { q_.canonicalize(); }
  // Parses "p", "p/q", with optional sign.
  explicit Rational(const std::string &s);

  const mpq_class &raw() const { return q_; }

  bool is_zero() const { return sgn(q_) == 0; }
  int sign() const { return sgn(q_); }
  Rational abs() const { return Rational(mpq_class(::abs(q_))); }

  Rational operator-() const { return Rational(mpq_class(-q_)); }
  Rational &operator+=(const Rational &o) { q_ += o.q_; return *this; }
  Rational &operator-=(const Rational &o) { q_ -= o.q_; return *this; }
  Rational &operator*=(const Rational &o) { q_ *= o.q_; return *this; }
  Rational &operator/=(const Rational &o);

  friend Rational operator+(Rational a, const Rational &b) { a += b; return a; }
  friend Rational operator-(Rational a, const Rational &b) { a -= b; return a; }
  friend Rational operator*(Rational a, const Rational &b) { a *= b; return a; }
  friend Rational operator/(Rational a, const Rational &b) { a /= b; return a; }

  friend bool operator==(const Rational &a, const Rational &b) { return a.q_ == b.q_; }
  friend bool operator!=(const Rational &a, const Rational &b) { return a.q_ != b.q_; }
  friend bool operator<(const Rational &a, const Rational &b) { return a.q_ < b.q_; }
  friend bool operator<=(const Rational &a, const Rational &b) { return a.q_ <= b.q_; }
  friend bool operator>(const Rational &a, const Rational &b) { return a.q_ > b.q_; }
  friend bool operator>=(const Rational &a, const Rational &b) { return a.q_ >= b.q_; }

  // *this += a*b, the accumulation primitive of series products.
  void add_mul(const Rational &a, const Rational &b) {
    mpq_mul(t_.get_mpq_t(), a.q_.get_mpq_t(), b.q_.get_mpq_t());
    q_ += t_;
  }

  Rational pow(long e) const;

  std::string num_str() const { return q_.get_num().get_str(); }
  std::string den_str() const { return q_.get_den().get_str(); }
  // GMP canonical form: "p/q", or "p" when the denominator is 1.
  std::string str() const { return q_.get_str(); }

  double to_double() const { return q_.get_d(); }

private:
  mpq_class q_;
  mpq_class t_; // scratch for add_mul
};

// Fixed-precision binary float backed by MPFR.  Every value carries its
// precision; binary operations require both operands at the same precision
// and round to nearest.
class BigFloat {
public:
  explicit BigFloat(long precision_bits = kDefaultPrecisionBits);
  BigFloat(const BigFloat &o);
  BigFloat(BigFloat &&o) noexcept;
  BigFloat &operator=(const BigFloat &o);
  BigFloat &operator=(BigFloat &&o) noexcept;
  ~BigFloat();

  static BigFloat zero(long prec) { return BigFloat(prec); }
  static BigFloat from_long(long v, long prec);
  static BigFloat from_double(double v, long prec);
  static BigFloat from_rational(const Rational &q, long prec);
  // Parses a decimal string (as produced by str()).
  static BigFloat from_string(const std::string &s, long prec);
  static BigFloat pi(long prec);

  long precision_bits() const { return mpfr_get_prec(v_); }

  // The same value rounded to another working precision.
  BigFloat at_precision(long precision_bits) const {
    BigFloat r(precision_bits);
    mpfr_set(r.v_, v_, MPFR_RNDN);
    return r;
  }

  bool is_zero() const { return mpfr_zero_p(v_) != 0; }
  bool is_finite() const { return mpfr_number_p(v_) != 0; }
  int sign() const { return mpfr_sgn(v_); }

  BigFloat operator-() const;
  BigFloat &operator+=(const BigFloat &o);
  BigFloat &operator-=(const BigFloat &o);
  BigFloat &operator*=(const BigFloat &o);
  BigFloat &operator/=(const BigFloat &o);

  friend BigFloat operator+(BigFloat a, const BigFloat &b) { a += b; return a; }
  friend BigFloat operator-(BigFloat a, const BigFloat &b) { a -= b; return a; }
  friend BigFloat operator*(BigFloat a, const BigFloat &b) { a *= b; return a; }
  friend BigFloat operator/(BigFloat a, const BigFloat &b) { a /= b; return a; }

  BigFloat &operator*=(long k) { mpfr_mul_si(v_, v_, k, MPFR_RNDN); return *this; }
  BigFloat &operator/=(long k);
  friend BigFloat operator*(BigFloat a, long k) { a *= k; return a; }
  friend BigFloat operator*(long k, BigFloat a) { a *= k; return a; }
  friend BigFloat operator/(BigFloat a, long k) { a /= k; return a; }
  friend BigFloat operator/(long k, const BigFloat &a) {
    return BigFloat::from_long(k, a.precision_bits()) / a;
  }
  friend BigFloat operator+(BigFloat a, long k) { mpfr_add_si(a.v_, a.v_, k, MPFR_RNDN); return a; }
  friend BigFloat operator+(long k, BigFloat a) { mpfr_add_si(a.v_, a.v_, k, MPFR_RNDN); return a; }
  friend BigFloat operator-(BigFloat a, long k) { mpfr_sub_si(a.v_, a.v_, k, MPFR_RNDN); return a; }
  friend BigFloat operator-(long k, const BigFloat &a) {
    BigFloat r(a.precision_bits());
    mpfr_si_sub(r.v_, k, a.v_, MPFR_RNDN);
    return r;
  }

  // *this += a*b via fused multiply-add.
  void add_mul(const BigFloat &a, const BigFloat &b) {
    check_same(a); check_same(b);
    mpfr_fma(v_, a.v_, b.v_, v_, MPFR_RNDN);
  }

  friend int compare(const BigFloat &a, const BigFloat &b) { return mpfr_cmp(a.v_, b.v_); }
  friend bool operator==(const BigFloat &a, const BigFloat &b) { return mpfr_cmp(a.v_, b.v_) == 0; }
  friend bool operator!=(const BigFloat &a, const BigFloat &b) { return mpfr_cmp(a.v_, b.v_) != 0; }
  friend bool operator<(const BigFloat &a, const BigFloat &b) { return mpfr_cmp(a.v_, b.v_) < 0; }
  friend bool operator<=(const BigFloat &a, const BigFloat &b) { return mpfr_cmp(a.v_, b.v_) <= 0; }
  friend bool operator>(const BigFloat &a, const BigFloat &b) { return mpfr_cmp(a.v_, b.v_) > 0; }
  friend bool operator>=(const BigFloat &a, const BigFloat &b) { return mpfr_cmp(a.v_, b.v_) >= 0; }

  BigFloat abs() const;
  BigFloat sqrt() const;
  BigFloat exp() const;
  BigFloat log() const;
  BigFloat cos() const;
  BigFloat sin() const;
  void sin_cos(BigFloat &s, BigFloat &c) const;
  BigFloat pow(long e) const;

  double to_double() const { return mpfr_get_d(v_, MPFR_RNDN); }
  Rational to_rational() const; // exact (every finite binary float is rational)

  // Shortest decimal string that round-trips at this precision, in
  // scientific notation.
  std::string str() const;

  const mpfr_t &raw() const { return v_; }
  mpfr_t &raw() { return v_; }

private:
  void check_same(const BigFloat &o) const {
    if (mpfr_get_prec(v_) != mpfr_get_prec(o.v_))
      throw RingMismatch("BigFloat precision mismatch: " +
                         std::to_string(mpfr_get_prec(v_)) + " vs " +
                         std::to_string(mpfr_get_prec(o.v_)));
  }
  mpfr_t v_;
};

// A scalar in either ring; the boundary type used by serialization, the CLI
// and the Python bindings.  Arithmetic across variants is an error.
class RingScalar {
public:
  RingScalar(Rational q) : v_(std::move(q)) {}
  RingScalar(BigFloat f) : v_(std::move(f)) {}

  bool is_rational() const { return std::holds_alternative<Rational>(v_); }
  const Rational &rational() const;
  const BigFloat &bigfloat() const;

  Ring ring() const {
    return is_rational() ? Ring::exact_rational()
                         : Ring::bigfloat(std::get<BigFloat>(v_).precision_bits());
  }

  friend RingScalar operator+(const RingScalar &a, const RingScalar &b);
  friend RingScalar operator-(const RingScalar &a, const RingScalar &b);
  friend RingScalar operator*(const RingScalar &a, const RingScalar &b);
  friend RingScalar operator/(const RingScalar &a, const RingScalar &b);
  RingScalar operator-() const;

  friend bool operator==(const RingScalar &a, const RingScalar &b);

  BigFloat to_bigfloat(long precision_bits) const;

  bool is_zero() const;
  double to_double() const;

  // Tagged string form: rationals as "p/q", bigfloats as "<decimal>@<bits>".
  std::string tagged_str() const;
  static RingScalar parse(const std::string &s);

private:
  std::variant<Rational, BigFloat> v_;
};

// Uniform construction helpers used by code templated over the ring type.
template <class T> struct RingOps;

template <> struct RingOps<Rational> {
  using Scalar = Rational;
  static Ring ring_of(const Rational &) { return Ring::exact_rational(); }
  static Rational zero(const Ring &) { return Rational(0); }
  static Rational from_long(long v, const Ring &) { return Rational(v); }
  static Rational from_ratio(long n, long d, const Ring &) { return Rational(n, d); }
  static bool is_zero(const Rational &x) { return x.is_zero(); }
  static Rational mul_long(const Rational &x, long k) { return x * Rational(k); }
  static Rational div_long(const Rational &x, long k) { return x / Rational(k); }
  static RingScalar to_scalar(const Rational &x) { return RingScalar(x); }
  static BigFloat to_bigfloat(const Rational &x, long prec) { return BigFloat::from_rational(x, prec); }
};

template <> struct RingOps<BigFloat> {
  using Scalar = BigFloat;
  static Ring ring_of(const BigFloat &x) { return Ring::bigfloat(x.precision_bits()); }
  static BigFloat zero(const Ring &r) { return BigFloat::zero(r.precision_bits()); }
  static BigFloat from_long(long v, const Ring &r) { return BigFloat::from_long(v, r.precision_bits()); }
  static BigFloat from_ratio(long n, long d, const Ring &r) {
    return BigFloat::from_rational(Rational(n, d), r.precision_bits());
  }
  static bool is_zero(const BigFloat &x) { return x.is_zero(); }
  static BigFloat mul_long(const BigFloat &x, long k) { return x * k; }
  static BigFloat div_long(const BigFloat &x, long k) { return x / k; }
  static RingScalar to_scalar(const BigFloat &x) { return RingScalar(x); }
  static BigFloat to_bigfloat(const BigFloat &x, long) { return x; }
};

} // namespace lplde

#endif
