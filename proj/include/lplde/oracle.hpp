#ifndef LPLDE_ORACLE_HPP
#define LPLDE_ORACLE_HPP

#include <cmath>
#include <utility>
#include <vector>

#include "lplde/errors.hpp"
#include "lplde/expansion.hpp"
#include "lplde/ode.hpp"
#include "lplde/ring.hpp"

namespace lplde {

// Ground-truth results produced by the numerical oracles.  Fields that a
// particular oracle does not compute are left empty (Fourier lists) or zero.
//
//  - `fourier_cos[n]` / `fourier_sin[n]` hold the coefficient of
//    cos((2n+1)wt) / sin((2n+1)wt): both oscillator families have
//    half-period antisymmetry, so even harmonics vanish and only odd ones
//    are reported.
//  - `trajectory` holds whatever sampling the oracle produced: uniform
//    period-synchronized samples for the Fourier oracle, the sequence of
//    Poincare-section states (t_k, x_k, 0) for the limit-cycle oracle.
//  - `estimated_error` is a method-intrinsic error indicator (quadrature
//    doubling difference, section-return displacement, spectral leakage).
struct OracleResult {
  BigFloat period;
  BigFloat omega_sq_exact;
  std::vector<BigFloat> fourier_cos;
  std::vector<BigFloat> fourier_sin;
  Trajectory trajectory;
  BigFloat estimated_error;
};

// Tolerance used by the oracles when the caller does not pick one: tight
// enough to dominate every digit we compare against, loose enough to keep
// the integrators fast at the given precision.
inline BigFloat default_oracle_tolerance(long precision_bits) {
  return BigFloat::from_double(precision_bits >= 128 ? 1e-30 : 1e-15, precision_bits);
}

// Period of the conservative oscillator x'' + x + mu x^(2N-1) = 0 released
// from rest at displacement A, via the quadrature
//     T = 4 * Int_0^{pi/2} dtheta / sqrt(1 + c * Sum_{j<N} sin^{2j} theta),
//     c = mu A^(2N-2) / N,
// i.e. T = 4 Int_0^A dx / sqrt(2(V(A)-V(x))) after x = A sin(theta), which
// removes the turning-point singularity analytically.  The integrand is a
// smooth periodic function of theta, so trapezoid sums with interval
// doubling converge spectrally; iteration stops when the doubling
// difference is below 2^(-3p/4) relative at p-bit precision.
// Throws NonOscillatory outside the well (mu < 0 with 1 + mu A^(2N-2) <= 0)
// and QuadratureFailure if doubling stalls.
OracleResult exact_period_conservative(long n_power, const BigFloat &mu, const BigFloat &amplitude);

// Independent cross-check of the quadrature: detects the period of the same
// oscillator by integrating from (A, 0) until the trajectory returns to the
// section {v = 0, sign(x) = sign(A)}.  Shares no code path with the
// quadrature beyond BigFloat arithmetic.
BigFloat conservative_period_rk(long n_power, const BigFloat &mu, const BigFloat &amplitude,
                                const BigFloat &tol);

// Van der Pol limit cycle: integrates from (2, 0) until successive crossings
// of the section {v = 0, x > 0} agree in x to within tol (the integrator
// itself runs at tol/1024 so its noise floor sits below the agreement
// threshold).  The period is the time between the last two refined
// crossings.  `trajectory` records the section states visited while
// settling, so `trajectory.x.back()` is the limit-cycle amplitude.
// Throws NoConvergence if settling exceeds 200 section returns.
OracleResult vdp_limit_cycle(const BigFloat &mu, const BigFloat &tol);

// Fourier coefficients of a uniformly sampled single period:
//     c_k = (2/T) Int_0^T x(t) cos(k w t) dt   (c_0 without the factor 2),
// computed as composite sums over the m samples, which is spectrally
// accurate for periodic data.  The trajectory must hold m >= 2(n_max+1)
// samples at times t_0 + j*period/m, j = 0..m-1 (one full period, endpoint
// excluded); the phase origin is t_0.  Returns harmonics k = 0..n_max as
// (cos list, sin list).  Throws InsufficientSpan if the samples do not
// cover one period or cannot resolve the requested modes, ConfigError if
// they are not uniform.
std::pair<std::vector<BigFloat>, std::vector<BigFloat>>
fourier_from_trajectory(const Trajectory &traj, const BigFloat &period, long n_max);

// Full conservative oracle: quadrature period, an m-sample trajectory over
// one period from (A, 0), and the odd-harmonic Fourier coefficients
// c_n = coefficient of cos((2n+1)wt) for n = 0..n_max.  estimated_error
// includes the spectral leakage into even harmonics and sine terms, which
// are exactly zero for the true solution.
OracleResult conservative_fourier_exact(long n_power, const BigFloat &mu,
                                        const BigFloat &amplitude, long n_max,
                                        const BigFloat &tol, long m_samples = 2048);

// Frequency error in percent: |om2 - om2_exact| / om2_exact * 100.
inline BigFloat error_metric(const BigFloat &omega_sq, const BigFloat &omega_sq_exact) {
  if (omega_sq_exact.is_zero())
    throw DivisionByZero("error metric needs a nonzero reference frequency");
  return ((omega_sq - omega_sq_exact) / omega_sq_exact).abs() * 100;
}

// Energy-conservation diagnostic of an assembled approximation.  At the
// approximation's own x = 0 crossing (tau = pi/2 for the odd-cosine series,
// polished by Newton) all energy is kinetic, so the exact solution would
// carry (1/2)(dx/dt)^2 = V(A) there.  `crossing_energy` returns
// (1/2) Om^2 x'(tau)^2, `exact_energy` returns V(A), and `energy_defect`
// their absolute difference, all evaluated at `precision_bits` (defaults:
// the expansion's own precision, or 256 bits for exact rings).
namespace detail {
template <class T> long defect_precision(const Expansion<T> &e, long precision_bits) {
  const Ring ring = e.problem.ring();
  return precision_bits > 0
             ? precision_bits
             : (ring.is_exact() ? kDefaultPrecisionBits : ring.precision_bits());
}
} // namespace detail

// Energy the exact orbit of amplitude A carries: V(A) = A^2/2 + mu A^(2N)/(2N).
template <class T>
BigFloat exact_energy(const Expansion<T> &e, long precision_bits = 0) {
  if (e.problem.family != FamilyKind::Conservative)
    throw InvalidFamily("orbit energy is defined for the conservative family");
  const long prec = detail::defect_precision(e, precision_bits);
  const BigFloat a = RingOps<T>::to_bigfloat(e.problem.amplitude, prec);
  const BigFloat mu = RingOps<T>::to_bigfloat(e.problem.mu, prec);
  const long two_n = 2 * e.problem.power;
  return a * a / 2 + mu * a.pow(two_n) / two_n;
}

template <class T>
BigFloat crossing_energy(const Expansion<T> &e, long precision_bits = 0) {
  if (e.problem.family != FamilyKind::Conservative)
    throw InvalidFamily("crossing energy is defined for the conservative family");
  const long prec = detail::defect_precision(e, precision_bits);
  const BigFloat om2 = RingOps<T>::to_bigfloat(e.omega_sq_total(), prec);
  if (om2.sign() <= 0)
    throw NonOscillatory("assembled squared frequency is not positive");
  const TrigSeries<BigFloat> x = e.assembled_solution().to_bigfloat(prec);
  const TrigSeries<BigFloat> xp = x.differentiate();

  // Odd-cosine series vanish at pi/2 identically; Newton is a defensive
  // polish that also absorbs roundoff in the evaluation itself.
  BigFloat tau = BigFloat::pi(prec) / 2;
  const BigFloat eps = BigFloat::from_double(std::ldexp(1.0, -int(prec - 4)), prec);
  for (int iter = 0; iter < 60; ++iter) {
    const BigFloat f = x.evaluate(tau);
    if (f.is_zero()) break;
    const BigFloat fp = xp.evaluate(tau);
    if (fp.is_zero())
      throw NoCrossing("flat derivative while polishing the x = 0 crossing");
    const BigFloat step = f / fp;
    tau = tau - step;
    if (step.abs() < eps * (1 + tau.abs())) break;
  }
  const BigFloat scale = x.l1_norm() + BigFloat::from_long(1, prec);
  if (!(x.evaluate(tau).abs() <
        scale * BigFloat::from_double(std::ldexp(1.0, -int(prec / 2)), prec)))
    throw NoCrossing("no x = 0 crossing near the quarter period");

  return om2 * xp.evaluate(tau).pow(2) / 2;
}

template <class T>
BigFloat energy_defect(const Expansion<T> &e, long precision_bits = 0) {
  const long prec = detail::defect_precision(e, precision_bits);
  return (crossing_energy(e, prec) - exact_energy(e, prec)).abs();
}

inline BigFloat energy_defect(const AnyExpansion &e, long precision_bits = 0) {
  return std::visit([&](const auto &ee) { return energy_defect(ee, precision_bits); }, e);
}

} // namespace lplde

#endif
