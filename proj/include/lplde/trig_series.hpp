#ifndef LPLDE_TRIG_SERIES_HPP
#define LPLDE_TRIG_SERIES_HPP

#include <map>
#include <utility>

#include "lplde/errors.hpp"
#include "lplde/ring.hpp"

namespace lplde {

// Finite trigonometric polynomial
//
//   s(tau) = sum_k a_k cos(k tau) + sum_k b_k sin(k tau)
//
// with coefficients in a fixed ring (exact rationals or fixed-precision
// bigfloats).  Stored sparsely and kept canonical: no zero coefficients,
// cos keys >= 0, sin keys >= 1.  Products use the product-to-sum identities,
// so the class is closed under the ring operations, differentiation and the
// inverse of the harmonic-oscillator operator.
template <class T> class TrigSeries {
public:
  using Map = std::map<long, T>;

  explicit TrigSeries(const Ring &ring) : ring_(ring) {}

  static TrigSeries cosine(long k, T coef) {
    TrigSeries s(RingOps<T>::ring_of(coef));
    s.add_cos(k, std::move(coef));
    return s;
  }
  static TrigSeries sine(long k, T coef) {
    if (k <= 0) throw ConfigError("sine harmonic must be positive");
    TrigSeries s(RingOps<T>::ring_of(coef));
    s.add_sin(k, std::move(coef));
    return s;
  }
  static TrigSeries constant(T value) { return cosine(0, std::move(value)); }

  const Ring &ring() const { return ring_; }
  const Map &cos_terms() const { return cos_; }
  const Map &sin_terms() const { return sin_; }

  bool is_zero() const { return cos_.empty() && sin_.empty(); }
  long max_harmonic() const {
    long m = 0;
    if (!cos_.empty()) m = cos_.rbegin()->first;
    if (!sin_.empty() && sin_.rbegin()->first > m) m = sin_.rbegin()->first;
    return m;
  }

  T cos_coef(long k) const {
    auto it = cos_.find(k);
    return it == cos_.end() ? RingOps<T>::zero(ring_) : it->second;
  }
  T sin_coef(long k) const {
    auto it = sin_.find(k);
    return it == sin_.end() ? RingOps<T>::zero(ring_) : it->second;
  }

  void add_cos(long k, const T &coef) {
    if (k < 0) throw ConfigError("cosine harmonic must be non-negative");
    check_ring(RingOps<T>::ring_of(coef));
    accumulate(cos_, k, coef);
  }
  void add_sin(long k, const T &coef) {
    if (k <= 0) throw ConfigError("sine harmonic must be positive");
    check_ring(RingOps<T>::ring_of(coef));
    accumulate(sin_, k, coef);
  }

  TrigSeries &operator+=(const TrigSeries &o) {
    check_ring(o.ring_);
    for (const auto &[k, c] : o.cos_) accumulate(cos_, k, c);
    for (const auto &[k, c] : o.sin_) accumulate(sin_, k, c);
    return *this;
  }
  TrigSeries &operator-=(const TrigSeries &o) {
    add_scaled(o, RingOps<T>::from_long(-1, ring_));
    return *this;
  }
  friend TrigSeries operator+(TrigSeries a, const TrigSeries &b) { a += b; return a; }
  friend TrigSeries operator-(TrigSeries a, const TrigSeries &b) { a -= b; return a; }

  TrigSeries operator-() const {
    TrigSeries r = *this;
    for (auto &[k, c] : r.cos_) c = -c;
    for (auto &[k, c] : r.sin_) c = -c;
    return r;
  }

  // *this += factor * o, the accumulation primitive of the recursions.
  void add_scaled(const TrigSeries &o, const T &factor) {
    check_ring(o.ring_);
    check_ring(RingOps<T>::ring_of(factor));
    for (const auto &[k, c] : o.cos_) accumulate(cos_, k, factor * c);
    for (const auto &[k, c] : o.sin_) accumulate(sin_, k, factor * c);
  }

  TrigSeries &operator*=(const T &factor) {
    check_ring(RingOps<T>::ring_of(factor));
    scale_map(cos_, factor);
    scale_map(sin_, factor);
    return *this;
  }
  friend TrigSeries operator*(TrigSeries a, const T &f) { a *= f; return a; }
  friend TrigSeries operator*(const T &f, TrigSeries a) { a *= f; return a; }

  TrigSeries mul_long(long k) const {
    return *this * RingOps<T>::from_long(k, ring_);
  }
  TrigSeries div_long(long k) const {
    if (k == 0) throw DivisionByZero();
    TrigSeries r = *this;
    for (auto &[h, c] : r.cos_) c = RingOps<T>::div_long(c, k);
    for (auto &[h, c] : r.sin_) c = RingOps<T>::div_long(c, k);
    return r;
  }

  friend TrigSeries operator*(const TrigSeries &a, const TrigSeries &b) {
    a.check_ring(b.ring_);
    TrigSeries r(a.ring_);
    // cos(p)cos(q) = (cos(p-q) + cos(p+q))/2
    for (const auto &[p, x] : a.cos_)
      for (const auto &[q, y] : b.cos_) {
        T h = half(x * y);
        r.acc_cos(p - q, h);
        r.acc_cos(p + q, h);
      }
    // sin(p)sin(q) = (cos(p-q) - cos(p+q))/2
    for (const auto &[p, x] : a.sin_)
      for (const auto &[q, y] : b.sin_) {
        T h = half(x * y);
        r.acc_cos(p - q, h);
        r.acc_cos(p + q, -h);
      }
    // sin(p)cos(q) = (sin(p+q) + sin(p-q))/2
    for (const auto &[p, x] : a.sin_)
      for (const auto &[q, y] : b.cos_) {
        T h = half(x * y);
        r.acc_sin(p + q, h);
        r.acc_sin(p - q, h);
      }
    // cos(p)sin(q) = (sin(p+q) - sin(p-q))/2
    for (const auto &[p, x] : a.cos_)
      for (const auto &[q, y] : b.sin_) {
        T h = half(x * y);
        r.acc_sin(p + q, h);
        r.acc_sin(p - q, -h);
      }
    return r;
  }

  // d/dtau
  TrigSeries differentiate() const {
    TrigSeries r(ring_);
    for (const auto &[k, c] : cos_)
      if (k > 0) r.accumulate(r.sin_, k, RingOps<T>::mul_long(c, -k));
    for (const auto &[k, c] : sin_)
      r.accumulate(r.cos_, k, RingOps<T>::mul_long(c, k));
    return r;
  }

  // Coefficients of cos(tau) and sin(tau): the terms the kernel of
  // (d^2/dtau^2 + 1) would turn secular.
  std::pair<T, T> resonant_part() const { return {cos_coef(1), sin_coef(1)}; }

  TrigSeries without_resonant_part() const {
    TrigSeries r = *this;
    r.cos_.erase(1);
    r.sin_.erase(1);
    return r;
  }

  // Particular solution of  omega0_sq * (x'' + x) = *this  containing no
  // harmonic-1 component.  Throws if the right-hand side is resonant.
  TrigSeries solve_linear_oscillator(const T &omega0_sq) const {
    check_ring(RingOps<T>::ring_of(omega0_sq));
    if (RingOps<T>::is_zero(omega0_sq))
      throw DivisionByZero("oscillator frequency is zero");
    if (cos_.count(1) || sin_.count(1))
      throw ResonantRHS("harmonic-1 forcing has no periodic particular solution");
    TrigSeries r(ring_);
    for (const auto &[k, c] : cos_)
      r.accumulate(r.cos_, k, RingOps<T>::div_long(c / omega0_sq, 1 - k * k));
    for (const auto &[k, c] : sin_)
      r.accumulate(r.sin_, k, RingOps<T>::div_long(c / omega0_sq, 1 - k * k));
    return r;
  }

  // Exact values of s and s' at tau = 0.
  T value_at_zero() const {
    T v = RingOps<T>::zero(ring_);
    for (const auto &[k, c] : cos_) v = v + c;
    return v;
  }
  T derivative_at_zero() const {
    T v = RingOps<T>::zero(ring_);
    for (const auto &[k, c] : sin_) v = v + RingOps<T>::mul_long(c, k);
    return v;
  }

  bool only_odd_harmonics() const {
    for (const auto &[k, c] : cos_)
      if (k % 2 == 0) return false;
    for (const auto &[k, c] : sin_)
      if (k % 2 == 0) return false;
    return true;
  }
  bool pure_cos() const { return sin_.empty(); }

  // Sum of |coefficients|; a cheap series norm for residual checks.
  T l1_norm() const {
    T v = RingOps<T>::zero(ring_);
    for (const auto &[k, c] : cos_) v = v + abs_of(c);
    for (const auto &[k, c] : sin_) v = v + abs_of(c);
    return v;
  }

  TrigSeries<BigFloat> to_bigfloat(long prec) const {
    TrigSeries<BigFloat> r(Ring::bigfloat(prec));
    for (const auto &[k, c] : cos_) r.add_cos(k, RingOps<T>::to_bigfloat(c, prec));
    for (const auto &[k, c] : sin_) r.add_sin(k, RingOps<T>::to_bigfloat(c, prec));
    return r;
  }

  BigFloat evaluate(const BigFloat &theta) const {
    long prec = theta.precision_bits();
    BigFloat v(prec), s(prec), c(prec);
    for (const auto &[k, coef] : cos_) {
      (theta * k).sin_cos(s, c);
      v.add_mul(RingOps<T>::to_bigfloat(coef, prec), c);
    }
    for (const auto &[k, coef] : sin_) {
      (theta * k).sin_cos(s, c);
      v.add_mul(RingOps<T>::to_bigfloat(coef, prec), s);
    }
    return v;
  }

  friend bool operator==(const TrigSeries &a, const TrigSeries &b) {
    return a.ring_ == b.ring_ && a.cos_ == b.cos_ && a.sin_ == b.sin_;
  }

private:
  void check_ring(const Ring &r) const {
    if (r != ring_)
      throw RingMismatch("series ring " + ring_.str() + " vs operand ring " + r.str());
  }

  static T half(const T &v) { return RingOps<T>::div_long(v, 2); }

  static T abs_of(const T &v) { return v.abs(); }

  void accumulate(Map &m, long k, const T &coef) {
    if (RingOps<T>::is_zero(coef)) return;
    auto [it, inserted] = m.try_emplace(k, coef);
    if (!inserted) {
      it->second = it->second + coef;
      if (RingOps<T>::is_zero(it->second)) m.erase(it);
    }
  }

  // Accumulation with index folding: cos is even, sin is odd in its harmonic.
  void acc_cos(long k, const T &coef) { accumulate(cos_, k < 0 ? -k : k, coef); }
  void acc_sin(long k, const T &coef) {
    if (k == 0) return;
    if (k < 0) accumulate(sin_, -k, -coef);
    else accumulate(sin_, k, coef);
  }

  void scale_map(Map &m, const T &factor) {
    if (RingOps<T>::is_zero(factor)) {
      m.clear();
      return;
    }
    for (auto &[k, c] : m) c = c * factor;
  }

  Ring ring_;
  Map cos_, sin_;

  template <class U> friend class TrigSeries;
};

} // namespace lplde

#endif
