#include "lplde/oracle.hpp"

#include <cmath>

namespace lplde {

namespace {

// Checks that the release amplitude stays inside the potential well.  The
// quadrature radicand is 1 + c * P(sin^2 theta) with P(u) = sum_{j<N} u^j;
// P is increasing on [0, 1], so for c < 0 the minimum sits at theta = pi/2
// where it equals 1 + mu A^(2N-2), the turning-point condition.
BigFloat well_coefficient(long n_power, const BigFloat &mu, const BigFloat &amplitude) {
  if (n_power < 1)
    throw ConfigError("restoring-force power index must be at least 1");
  const BigFloat c = mu * amplitude.pow(2 * n_power - 2) / n_power;
  if (c.sign() < 0 && (1 + c * n_power).sign() <= 0)
    throw NonOscillatory("amplitude reaches the turning points of the potential");
  return c;
}

} // namespace

OracleResult exact_period_conservative(long n_power, const BigFloat &mu,
                                       const BigFloat &amplitude) {
  const long prec = mu.precision_bits();
  const BigFloat c = well_coefficient(n_power, mu, amplitude);
  const BigFloat pi = BigFloat::pi(prec);
  const BigFloat half_pi = pi / 2;

  auto integrand = [&](const BigFloat &theta) {
    const BigFloat s = theta.sin();
    const BigFloat u = s * s;
    BigFloat p = BigFloat::from_long(1, prec);
    for (long j = 1; j < n_power; ++j) p = p * u + 1;
    const BigFloat radicand = 1 + c * p;
    if (radicand.sign() <= 0)
      throw NonOscillatory("potential barrier inside the integration range");
    return 1 / radicand.sqrt();
  };

  // Trapezoid sums with interval doubling and point reuse; the integrand is
  // smooth and periodic, so the doubling difference shrinks geometrically.
  long m = 8;
  BigFloat h = half_pi / m;
  BigFloat sum = (integrand(BigFloat::zero(prec)) + integrand(half_pi)) / 2;
  for (long i = 1; i < m; ++i) sum += integrand(h * i);
  BigFloat t_prev = 4 * sum * h;
  const BigFloat eps = BigFloat::from_double(std::ldexp(1.0, -int(3 * prec / 4)), prec);

  for (int round = 0; round < 20; ++round) {
    const BigFloat h2 = h / 2;
    BigFloat odd = BigFloat::zero(prec);
    for (long i = 0; i < m; ++i) odd += integrand(h2 * (2 * i + 1));
    sum += odd;
    h = h2;
    m *= 2;
    const BigFloat t_new = 4 * sum * h;
    const BigFloat diff = (t_new - t_prev).abs();
    t_prev = t_new;
    if (diff <= eps * t_new.abs()) {
      OracleResult out;
      out.period = t_new;
      const BigFloat w = 2 * pi / t_new;
      out.omega_sq_exact = w * w;
      out.estimated_error = diff;
      return out;
    }
  }
  throw QuadratureFailure("period quadrature did not converge after 20 doublings");
}

BigFloat conservative_period_rk(long n_power, const BigFloat &mu, const BigFloat &amplitude,
                                const BigFloat &tol) {
  if (amplitude.is_zero())
    throw ConfigError("section-return period detection needs a nonzero amplitude");
  well_coefficient(n_power, mu, amplitude);
  const long prec = mu.precision_bits();
  Dopri5 rk(Oscillator::conservative(n_power, mu), tol);
  const OdeState start{BigFloat::zero(prec), amplitude, BigFloat::zero(prec)};
  // The scan stops at the first return, so this bound only caps runaways.
  const BigFloat t_max = BigFloat::from_long(1000000, prec);
  return rk.next_v_zero(start, amplitude.sign(), t_max).t;
}

OracleResult vdp_limit_cycle(const BigFloat &mu, const BigFloat &tol) {
  if (mu.sign() <= 0)
    throw ConfigError("the limit cycle exists for positive damping parameter only");
  if (tol.sign() <= 0)
    throw ConfigError("section-agreement tolerance must be positive");
  const long prec = mu.precision_bits();

  // Integrate tighter than the agreement threshold so the integrator's
  // accumulated noise cannot stall the return-map contraction test.
  Dopri5 rk(Oscillator::vdp(mu), tol / 1024);
  OdeState s{BigFloat::zero(prec), BigFloat::from_long(2, prec), BigFloat::zero(prec)};
  // Generous per-return time bound: the relaxation-oscillation period grows
  // linearly in mu with slope (3 - 2 ln 2) < 2.
  const BigFloat per_return = 6 * mu + 20;

  OracleResult out;
  out.trajectory.push(s);
  BigFloat period = BigFloat::zero(prec);
  BigFloat delta = BigFloat::zero(prec);
  bool settled = false;
  for (int k = 0; k < 200 && !settled; ++k) {
    const OdeState next = rk.next_v_zero(s, +1, s.t + per_return);
    delta = (next.x - s.x).abs();
    period = next.t - s.t;
    settled = k > 0 && delta < tol;
    s = next;
    out.trajectory.push(s);
  }
  if (!settled)
    throw NoConvergence("limit-cycle settling exceeded 200 section returns");

  out.period = period;
  const BigFloat w = 2 * BigFloat::pi(prec) / period;
  out.omega_sq_exact = w * w;
  out.estimated_error = delta;
  return out;
}

std::pair<std::vector<BigFloat>, std::vector<BigFloat>>
fourier_from_trajectory(const Trajectory &traj, const BigFloat &period, long n_max) {
  if (n_max < 0) throw ConfigError("harmonic count must be non-negative");
  if (period.sign() <= 0) throw ConfigError("period must be positive");
  const long m = static_cast<long>(traj.size());
  if (m < 4 || m < 2 * (n_max + 1))
    throw InsufficientSpan("too few samples to resolve the requested harmonics");

  const long prec = period.precision_bits();
  const BigFloat h = period / m;
  const BigFloat slack = period * BigFloat::from_double(1e-9, prec);
  if (((traj.t[m - 1] - traj.t[0]) - h * (m - 1)).abs() > slack)
    throw InsufficientSpan("samples do not span one full period at spacing T/m");
  for (long j = 1; j + 1 < m; ++j)
    if (((traj.t[j] - traj.t[0]) - h * j).abs() > slack)
      throw ConfigError("trajectory samples are not uniformly spaced");

  const BigFloat two_pi = 2 * BigFloat::pi(prec);
  std::vector<BigFloat> cos_out, sin_out;
  cos_out.reserve(n_max + 1);
  sin_out.reserve(n_max + 1);
  for (long k = 0; k <= n_max; ++k) {
    BigFloat ac = BigFloat::zero(prec), as = BigFloat::zero(prec);
    for (long j = 0; j < m; ++j) {
      const BigFloat angle = two_pi * ((k * j) % m) / m;
      BigFloat sv(prec), cv(prec);
      angle.sin_cos(sv, cv);
      ac.add_mul(traj.x[j], cv);
      as.add_mul(traj.x[j], sv);
    }
    cos_out.push_back(k == 0 ? ac / m : 2 * ac / m);
    sin_out.push_back(k == 0 ? BigFloat::zero(prec) : 2 * as / m);
  }
  return {std::move(cos_out), std::move(sin_out)};
}

OracleResult conservative_fourier_exact(long n_power, const BigFloat &mu,
                                        const BigFloat &amplitude, long n_max,
                                        const BigFloat &tol, long m_samples) {
  if (n_max < 0) throw ConfigError("harmonic count must be non-negative");
  OracleResult out = exact_period_conservative(n_power, mu, amplitude);
  const long prec = mu.precision_bits();

  long m = m_samples;
  const long nyquist_headroom = 4 * (2 * n_max + 2);
  if (m < nyquist_headroom) m = nyquist_headroom;

  const OdeState start{BigFloat::zero(prec), amplitude, BigFloat::zero(prec)};
  out.trajectory =
      sample_uniform(Oscillator::conservative(n_power, mu), start, out.period, m, tol);
  const auto [all_cos, all_sin] = fourier_from_trajectory(out.trajectory, out.period, 2 * n_max + 1);

  // Compact to the odd harmonics; the true solution has no even-cosine or
  // sine content, so whatever shows up there measures the oracle's own
  // leakage and is folded into the error estimate.
  BigFloat leak = out.estimated_error;
  for (long k = 0; k < static_cast<long>(all_cos.size()); ++k) {
    if (k % 2 == 1) {
      out.fourier_cos.push_back(all_cos[k]);
      out.fourier_sin.push_back(BigFloat::zero(prec));
    } else if (all_cos[k].abs() > leak) {
      leak = all_cos[k].abs();
    }
    if (all_sin[k].abs() > leak) leak = all_sin[k].abs();
  }
  out.estimated_error = leak;
  return out;
}

} // namespace lplde
