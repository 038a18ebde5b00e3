#include "lplde/ode.hpp"

#include <cmath>

namespace lplde {

namespace {

// Dormand-Prince 5(4) tableau (exact rationals): nodes, stage weights, the
// fifth-order solution weights and the (b - b*) error weights.
struct Entry {
  long num, den;
};
constexpr Entry kC[] = {{0, 1}, {1, 5}, {3, 10}, {4, 5}, {8, 9}, {1, 1}, {1, 1}};
constexpr Entry kA[7][6] = {
    {},
    {{1, 5}},
    {{3, 40}, {9, 40}},
    {{44, 45}, {-56, 15}, {32, 9}},
    {{19372, 6561}, {-25360, 2187}, {64448, 6561}, {-212, 729}},
    {{9017, 3168}, {-355, 33}, {46732, 5247}, {49, 176}, {-5103, 18656}},
    {{35, 384}, {0, 1}, {500, 1113}, {125, 192}, {-2187, 6784}, {11, 84}},
};
constexpr Entry kB[7] = {{35, 384},     {0, 1},   {500, 1113}, {125, 192},
                         {-2187, 6784}, {11, 84}, {0, 1}};
constexpr Entry kBStar[7] = {{5179, 57600},     {0, 1},      {7571, 16695}, {393, 640},
                             {-92097, 339200}, {187, 2100}, {1, 40}};

BigFloat from_entry(const Entry &e, long prec) {
  return BigFloat::from_rational(Rational(e.num, e.den), prec);
}

} // namespace

Dopri5::Dopri5(Oscillator system, BigFloat tol)
    : sys_(std::move(system)), tol_(std::move(tol)), prec_(sys_.precision_bits()),
      h_(BigFloat::zero(prec_)) {
  if (tol_.sign() <= 0) throw ConfigError("integration tolerance must be positive");
  if (tol_.precision_bits() != prec_)
    throw RingMismatch("tolerance and system precision differ");
  // Layout: a[1..6][0..i-1], then b[7], b-b*[7], c[1..6].
  for (int i = 1; i < 7; ++i)
    for (int j = 0; j < i; ++j) tab_.push_back(from_entry(kA[i][j], prec_));
  for (const auto &e : kB) tab_.push_back(from_entry(e, prec_));
  for (int i = 0; i < 7; ++i)
    tab_.push_back(from_entry(kB[i], prec_) - from_entry(kBStar[i], prec_));
  for (int i = 1; i < 7; ++i) tab_.push_back(from_entry(kC[i], prec_));
}

void Dopri5::trial_step(const OdeState &s, const BigFloat &h, OdeState &out,
                        BigFloat &err) const {
  // Stage derivatives for (x, v).
  BigFloat kx[7], kv[7];
  kx[0] = s.v;
  kv[0] = sys_.acceleration(s.x, s.v);
  size_t a_at = 0;
  for (int i = 1; i < 7; ++i) {
    BigFloat xi = s.x, vi = s.v;
    for (int j = 0; j < i; ++j) {
      const BigFloat w = tab_[a_at + j] * h;
      xi.add_mul(w, kx[j]);
      vi.add_mul(w, kv[j]);
    }
    a_at += i;
    kx[i] = vi;
    kv[i] = sys_.acceleration(xi, vi);
  }
  const size_t b_at = a_at, e_at = b_at + 7;
  out.t = s.t + h;
  out.x = s.x;
  out.v = s.v;
  BigFloat ex = BigFloat::zero(prec_), ev = ex;
  for (int i = 0; i < 7; ++i) {
    const BigFloat w = tab_[b_at + i] * h;
    out.x.add_mul(w, kx[i]);
    out.v.add_mul(w, kv[i]);
    const BigFloat we = tab_[e_at + i] * h;
    ex.add_mul(we, kx[i]);
    ev.add_mul(we, kv[i]);
  }
  // Error normalized against tol * (1 + |state|), mixed absolute/relative.
  BigFloat sx = 1 + (s.x.abs() > out.x.abs() ? s.x.abs() : out.x.abs());
  BigFloat sv = 1 + (s.v.abs() > out.v.abs() ? s.v.abs() : out.v.abs());
  BigFloat nx = ex.abs() / sx, nv = ev.abs() / sv;
  err = (nx > nv ? nx : nv) / tol_;
}

BigFloat Dopri5::initial_step(const OdeState &s, const BigFloat &t_scale) const {
  // Conservative guess: scaled by the state's own rates when available.
  BigFloat a = sys_.acceleration(s.x, s.v).abs() + s.v.abs() + BigFloat::from_double(1e-8, prec_);
  BigFloat h = (1 + s.x.abs()) / a;
  double hd = h.to_double(), cap = t_scale.to_double() / 64;
  if (!(cap > 0) || !std::isfinite(cap)) cap = 1.0;
  double h0 = std::min(std::max(hd / 100, 1e-12), cap);
  // Respect the tolerance's fifth-root scaling from the start.
  h0 *= std::pow(tol_.to_double(), 0.2) * 1e2;
  if (h0 <= 0 || !std::isfinite(h0)) h0 = 1e-6;
  return BigFloat::from_double(std::min(h0, cap), prec_);
}

OdeState Dopri5::step_adaptive(OdeState &s, const BigFloat &t_limit) {
  const OdeState before = s;
  if (h_.is_zero()) h_ = initial_step(s, t_limit - s.t);
  const BigFloat t_tiny =
      (1 + s.t.abs()) * BigFloat::from_double(std::ldexp(1.0, -int(prec_ - 8)), prec_);
  for (int attempt = 0; attempt < 200; ++attempt) {
    BigFloat h = h_;
    bool clipped = false;
    if (s.t + h > t_limit) {
      h = t_limit - s.t;
      clipped = true;
    }
    OdeState out{BigFloat::zero(prec_), BigFloat::zero(prec_), BigFloat::zero(prec_)};
    BigFloat err(prec_);
    trial_step(s, h, out, err);
    const double e = err.to_double();
    if (e <= 1.0) {
      // Accept; grow the stored step from the unclipped size.
      double grow = e > 0 ? std::min(5.0, 0.9 * std::pow(e, -0.2)) : 5.0;
      if (!clipped) h_ = h_ * BigFloat::from_double(grow, prec_);
      s = out;
      return before;
    }
    double shrink = std::max(0.2, 0.9 * std::pow(e, -0.2));
    h_ = h * BigFloat::from_double(shrink, prec_);
    if (h_ < t_tiny)
      throw StepSizeUnderflow("step size collapsed at t = " + s.t.str());
  }
  throw StepSizeUnderflow("no acceptable step after 200 reductions");
}

void Dopri5::advance_to(OdeState &s, const BigFloat &t_end, Trajectory *record) {
  if (record && record->size() == 0) record->push(s);
  while (s.t < t_end) {
    step_adaptive(s, t_end);
    if (record) record->push(s);
  }
}

OdeState Dopri5::next_v_zero(const OdeState &start, int required_x_sign,
                             const BigFloat &t_max) {
  OdeState s = start;
  while (s.t < t_max) {
    const OdeState pre = step_adaptive(s, t_max);
    if (pre.v.sign() == 0 || pre.v.sign() == s.v.sign() || s.t == pre.t) continue;

    // Bracketed Newton refinement of v(t) = 0 inside [pre.t, s.t]; v and x at
    // trial times come from re-integrating the bracketing step.
    BigFloat lo = pre.t, hi = s.t;
    // Linear interpolation seed.
    BigFloat t_guess = pre.t + (s.t - pre.t) * (pre.v / (pre.v - s.v));
    OdeState at{BigFloat::zero(prec_), BigFloat::zero(prec_), BigFloat::zero(prec_)};
    const int lo_sign = pre.v.sign();
    for (int iter = 0; iter < 80; ++iter) {
      if (t_guess <= lo || t_guess >= hi) t_guess = (lo + hi) / 2;
      at = pre;
      Dopri5 local(sys_, tol_);
      local.advance_to(at, t_guess);
      if (at.v.is_zero()) break;
      if (at.v.sign() == lo_sign) lo = t_guess;
      else hi = t_guess;
      const BigFloat acc = sys_.acceleration(at.x, at.v);
      if (acc.is_zero()) {
        t_guess = (lo + hi) / 2;
        continue;
      }
      const BigFloat dt = at.v / acc;
      t_guess = at.t - dt;
      const BigFloat span = hi - lo;
      if (span < (1 + at.t.abs()) * tol_ ||
          dt.abs() < (1 + at.t.abs()) * BigFloat::from_double(std::ldexp(1.0, -int(prec_ - 6)), prec_))
        break;
    }
    if (required_x_sign == 0 || at.x.sign() == required_x_sign) {
      at.v = BigFloat::zero(prec_); // on the section by construction
      return at;
    }
  }
  throw NoCrossing("no section crossing before t = " + t_max.str());
}

Trajectory integrate_ivp(const Oscillator &sys, const BigFloat &x0, const BigFloat &v0,
                         const BigFloat &t_end, const BigFloat &tol) {
  if (t_end.sign() < 0) throw ConfigError("integration horizon must be non-negative");
  Dopri5 rk(sys, tol);
  const long prec = sys.precision_bits();
  OdeState s{BigFloat::zero(prec), x0, v0};
  Trajectory traj;
  rk.advance_to(s, t_end, &traj);
  return traj;
}

Trajectory sample_uniform(const Oscillator &sys, const OdeState &start,
                          const BigFloat &span, long m, const BigFloat &tol) {
  if (m < 2) throw ConfigError("uniform sampling needs at least two points");
  if (span.sign() <= 0) throw ConfigError("sampling span must be positive");
  Dopri5 rk(sys, tol);
  OdeState s = start;
  Trajectory traj;
  traj.push(s);
  for (long j = 1; j < m; ++j) {
    rk.advance_to(s, start.t + span * j / m);
    traj.push(s);
  }
  return traj;
}

} // namespace lplde
