#ifndef LPLDE_ODE_HPP
#define LPLDE_ODE_HPP

#include <vector>

#include "lplde/errors.hpp"
#include "lplde/expansion.hpp"
#include "lplde/ring.hpp"

namespace lplde {

// Right-hand side of the two oscillator families in first-order form
// (x' = v, v' = acceleration).
struct Oscillator {
  FamilyKind family = FamilyKind::Conservative;
  long power = 2; // N: conservative restoring force is -x - mu x^(2N-1)
  BigFloat mu;

  static Oscillator conservative(long n_power, BigFloat mu_val) {
    return {FamilyKind::Conservative, n_power, std::move(mu_val)};
  }
  static Oscillator vdp(BigFloat mu_val) {
    return {FamilyKind::VanDerPol, 2, std::move(mu_val)};
  }

  long precision_bits() const { return mu.precision_bits(); }

  BigFloat acceleration(const BigFloat &x, const BigFloat &v) const {
    if (family == FamilyKind::Conservative)
      return -x - mu * x.pow(2 * power - 1);
    return mu * (1 - x * x) * v - x;
  }

  // Potential of the conservative family, V(x) = x^2/2 + mu x^(2N)/(2N).
  BigFloat potential(const BigFloat &x) const {
    if (family != FamilyKind::Conservative)
      throw InvalidFamily("potential is defined for the conservative family");
    return x * x / 2 + mu * x.pow(2 * power) / (2 * power);
  }
};

struct OdeState {
  BigFloat t, x, v;
};

struct Trajectory {
  std::vector<BigFloat> t, x, v;
  size_t size() const { return t.size(); }
  void push(const OdeState &s) {
    t.push_back(s.t);
    x.push_back(s.x);
    v.push_back(s.v);
  }
};

// Dormand-Prince 5(4) embedded pair with adaptive step control.  The tableau
// is expanded from its exact rational entries at the working precision, so
// the integrator itself adds no coefficient noise on top of roundoff.
class Dopri5 {
public:
  Dopri5(Oscillator system, BigFloat tol);

  const BigFloat &tol() const { return tol_; }
  const Oscillator &system() const { return sys_; }

  // Advances the state to exactly t_end (t_end >= s.t), optionally recording
  // every accepted step.
  void advance_to(OdeState &s, const BigFloat &t_end, Trajectory *record = nullptr);

  // Advances until v changes sign with x of the required sign (+1 / -1 / 0 =
  // either), refines the crossing time by bracketed Newton iteration, and
  // returns the state on the section.  Throws NoCrossing past t_max.
  OdeState next_v_zero(const OdeState &start, int required_x_sign, const BigFloat &t_max);

private:
  // One trial step of size h; fills `out` and the embedded error estimate.
  void trial_step(const OdeState &s, const BigFloat &h, OdeState &out, BigFloat &err) const;
  // One adaptive step from s; returns the pre-step state copy.
  OdeState step_adaptive(OdeState &s, const BigFloat &t_limit);
  BigFloat initial_step(const OdeState &s, const BigFloat &t_scale) const;

  Oscillator sys_;
  BigFloat tol_;
  long prec_;
  BigFloat h_; // current step size, persisted across steps
  std::vector<BigFloat> tab_; // flattened tableau at working precision
};

// Records every accepted step from (x0, v0) at t = 0 up to t_end.
Trajectory integrate_ivp(const Oscillator &sys, const BigFloat &x0, const BigFloat &v0,
                         const BigFloat &t_end, const BigFloat &tol);

// m states equally spaced on [t0, t0 + span), for period-synchronized
// Fourier analysis.
Trajectory sample_uniform(const Oscillator &sys, const OdeState &start,
                          const BigFloat &span, long m, const BigFloat &tol);

} // namespace lplde

#endif
