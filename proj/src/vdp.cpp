#include "lplde/expansion.hpp"

namespace lplde {

// Van der Pol limit-cycle expansion in the strained coordinate tau = Omega t:
//
//   Omega^2 x'' + (1 + lambda^2) x = delta [ mu Omega (1 - x^2) x' + lambda^2 x ],
//   Omega = sum_n gamma_n delta^n,  x = sum_n x_n delta^n.
//
// The limit-cycle amplitude is an output, which staggers the bookkeeping: the
// fundamental cos(tau) amplitude a_{n-1} of x_{n-1} stays undetermined until
// the order-n right-hand side exists, where the sin(tau) resonance fixes
// a_{n-1} and the cos(tau) resonance fixes gamma_n.  At order 1 the sin
// condition is cubic in a_0 instead of linear.
//
// Phase convention: no x_n carries a fundamental sin(tau) term, which pins
// the otherwise free time origin of the cycle.
Expansion<BigFloat> expand_vdp(const Problem<BigFloat> &p) {
  using B = BigFloat;
  using Series = TrigSeries<B>;

  if (p.family != FamilyKind::VanDerPol)
    throw InvalidFamily("expected the Van der Pol family");
  if (p.mu.sign() <= 0)
    throw ConfigError("the Van der Pol limit cycle requires mu > 0");
  if (p.lambda_sq.sign() < 0)
    throw ConfigError("the Van der Pol expansion requires lambda^2 >= 0");
  if (p.max_order < 0) throw OrderOutOfRange("max_order must be non-negative");

  const Ring ring = p.ring();
  const B one = B::from_long(1, ring.precision_bits());
  const B w0 = one + p.lambda_sq;
  const B g0 = w0.sqrt();

  Expansion<B> e;
  e.problem = p;
  e.freq_coeffs.push_back(g0);
  if (p.max_order == 0) return e;

  const Series c1 = Series::cosine(1, one);
  const Series c1d = c1.differentiate();

  // Order 1, sin(tau) resonance: with x_0 = a cos(tau), the damping term
  // mu g0 (1 - x_0^2) x_0' has a fundamental component that is an odd cubic
  // s(a) = s1 a + s3 a^3.  Two samples recover the coefficients.
  auto damping_sin1 = [&](long a_sample) {
    Series x0 = Series::cosine(1, B::from_long(a_sample, ring.precision_bits()));
    Series xd = x0.differentiate();
    Series w = xd - x0 * x0 * xd;
    return (p.mu * g0) * w.sin_coef(1);
  };
  const B two = B::from_long(2, ring.precision_bits());
  B s_at_1 = damping_sin1(1), s_at_2 = damping_sin1(2);
  B s3 = (s_at_2 - two * s_at_1) / 6;
  B s1 = s_at_1 - s3;
  if (s3.is_zero()) throw NoRealRoot("amplitude equation degenerates");
  B a0_sq = -(s1 / s3);
  if (a0_sq.sign() <= 0)
    throw NoRealRoot("amplitude equation has no positive real root");
  const B a0 = a0_sq.sqrt();

  Series x0 = Series::cosine(1, a0);
  e.solutions.push_back(x0);
  e.vdp_amplitudes.push_back(a0);

  // Graded caches, entry m valid once x_m is final: xd = x_m', xdd = x_m'',
  // xsq = (x^2)_m, w = [(1 - x^2) x']_m, om2 = (Omega^2)_m.
  std::vector<Series> xd{x0.differentiate()};
  std::vector<Series> xdd{xd[0].differentiate()};
  std::vector<Series> xsq{x0 * x0};
  std::vector<Series> w{xd[0] - xsq[0] * xd[0]};
  std::vector<B> om2{g0 * g0};

  // Order 1, cos(tau) resonance: R_1 = -(2 g0 g1) x_0'' + mu g0 W_0 + lambda^2 x_0,
  // and -x_0'' = x_0, so the unknown enters as +2 g0 g1 a0 cos(tau).
  Series r1 = x0 * p.lambda_sq;
  r1.add_scaled(w[0], p.mu * g0);
  B g1 = -(r1.cos_coef(1) / (two * g0 * a0));
  e.freq_coeffs.push_back(g1);
  om2.push_back(two * g0 * g1);

  // The derivative of the order-n right-hand side with respect to the pending
  // amplitude a_{n-1} is order-independent for n >= 2:
  //   D = (2 g0 g1 + lambda^2) cos(tau) + mu g0 dW,
  //   dW = c1' - (x^2)_0 c1' - 2 x_0 x_0' c1.
  Series dw = c1d - xsq[0] * c1d - (x0 * xd[0] * c1).mul_long(2);
  Series pending_deriv = c1 * (two * g0 * g1 + p.lambda_sq);
  pending_deriv.add_scaled(dw, p.mu * g0);
  const B sin1_d = pending_deriv.sin_coef(1);
  if (sin1_d.is_zero())
    throw NoRealRoot("degenerate sin(tau) resonance derivative");
  // 2 x_0 cos(tau): the a-derivative of (x^2)_{n-1}.
  const Series dxsq = (x0 * c1).mul_long(2);

  // Assembles the order-n right-hand side from the current caches.
  auto rhs_at = [&](long n) {
    Series r = e.solutions[n - 1] * p.lambda_sq;
    for (long k = 1; k <= n && k < static_cast<long>(om2.size()); ++k)
      r.add_scaled(xdd[n - k], -om2[k]);
    for (long i = 0; i < n; ++i)
      r.add_scaled(w[n - 1 - i], p.mu * e.freq_coeffs[i]);
    return r;
  };

  // Appends the particular solution x_n^0 (pending amplitude) and the cache
  // entries derived from it.
  auto push_particular = [&](long n) {
    Series rn = rhs_at(n).without_resonant_part();
    Series xn = rn.solve_linear_oscillator(w0);
    e.solutions.push_back(xn);
    xd.push_back(xn.differentiate());
    xdd.push_back(xd[n].differentiate());
    Series sq(ring);
    for (long i = 0; i <= n; ++i) sq += e.solutions[i] * e.solutions[n - i];
    xsq.push_back(std::move(sq));
    Series wn = xd[n];
    for (long i = 0; i <= n; ++i) wn -= xsq[i] * xd[n - i];
    w.push_back(std::move(wn));
  };

  push_particular(1);

  for (long n = 2; n <= p.max_order; ++n) {
    // Known part of (Omega^2)_n: the gamma_i gamma_j cross terms with
    // i, j >= 1; the 2 g0 gamma_n piece is completed once gamma_n is solved.
    B om2_n = RingOps<B>::zero(ring);
    for (long i = 1; i < n; ++i) om2_n.add_mul(e.freq_coeffs[i], e.freq_coeffs[n - i]);
    om2.push_back(std::move(om2_n));

    // Right-hand side with the pending amplitude set to zero; the unknowns
    // enter as  R_n = R_n^0 + a D + 2 g0 gamma_n a0 cos(tau).
    Series rn0 = rhs_at(n);
    B a = -(rn0.sin_coef(1) / sin1_d);
    B gn = -((rn0.cos_coef(1) + a * pending_deriv.cos_coef(1)) / (two * g0 * a0));

    e.vdp_amplitudes.push_back(a);
    e.freq_coeffs.push_back(gn);

    // Finalize x_{n-1} and its cache entries.
    if (!a.is_zero()) {
      e.solutions[n - 1].add_scaled(c1, a);
      xd[n - 1].add_scaled(c1d, a);
      xdd[n - 1].add_scaled(c1, -a);
      xsq[n - 1].add_scaled(dxsq, a);
      w[n - 1].add_scaled(dw, a);
    }
    om2[n] += two * g0 * gn;

    // The reported solution list stops at x_{max_order - 1}: the order-M
    // conditions deliver gamma_M and a_{M-1} but x_M would need order M + 1.
    if (n < p.max_order) push_particular(n);
  }
  return e;
}

} // namespace lplde
