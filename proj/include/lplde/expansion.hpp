#ifndef LPLDE_EXPANSION_HPP
#define LPLDE_EXPANSION_HPP

#include <utility>
#include <variant>
#include <vector>

#include "lplde/errors.hpp"
#include "lplde/ring.hpp"
#include "lplde/trig_series.hpp"

namespace lplde {

enum class FamilyKind {
  Conservative, // restoring force -x - mu x^(2N-1), potential x^2/2 + mu x^(2N)/(2N)
  VanDerPol,    // damping mu (1 - x^2) x'
};

// Rule fixing the homogeneous cos(tau) amendment of each correction x_n:
// either x_n(0) = 0 for n >= 1 (so the assembled solution reaches the
// amplitude exactly at tau = 0), or no amendment at all.
enum class Convention { AmplitudeAtZero, NoFundamentalCorrections };

template <class T> struct Problem {
  FamilyKind family = FamilyKind::Conservative;
  long power = 2; // N: conservative force term is -mu x^(2N-1)
  T mu;
  T amplitude;
  T lambda_sq;
  long max_order = 0;
  Convention convention = Convention::AmplitudeAtZero;

  Ring ring() const { return RingOps<T>::ring_of(mu); }
};

template <class T>
Problem<T> conservative_problem(long power, T mu, T amplitude, T lambda_sq,
                                long max_order,
                                Convention convention = Convention::AmplitudeAtZero) {
  return Problem<T>{FamilyKind::Conservative, power,        std::move(mu),
                    std::move(amplitude),     std::move(lambda_sq),
                    max_order,                convention};
}

inline Problem<BigFloat> vdp_problem(BigFloat mu, BigFloat lambda_sq, long max_order) {
  BigFloat zero = BigFloat::zero(mu.precision_bits());
  return Problem<BigFloat>{FamilyKind::VanDerPol, 2,         std::move(mu),
                           zero,                  std::move(lambda_sq),
                           max_order,             Convention::AmplitudeAtZero};
}

// Order-by-order result of the strained-coordinate expansion.
//
// Conservative: omega^2 = sum_n freq_coeffs[n], solutions hold x_0..x_M.
// Van der Pol:  omega   = sum_n freq_coeffs[n] (one order higher than the
// solution list: the order-M resonance conditions fix freq_coeffs[M] together
// with the fundamental amplitude of x_{M-1}, so solutions hold x_0..x_{M-1}).
template <class T> struct Expansion {
  Problem<T> problem;
  std::vector<T> freq_coeffs;
  std::vector<TrigSeries<T>> solutions;
  std::vector<T> vdp_amplitudes; // a_n, Van der Pol only

  bool is_vdp() const { return problem.family == FamilyKind::VanDerPol; }

  T omega_sq_total() const {
    T s = sum_freq();
    return is_vdp() ? s * s : s;
  }
  T omega_total_vdp() const {
    if (!is_vdp()) throw InvalidFamily("omega series only exists for Van der Pol");
    return sum_freq();
  }

  TrigSeries<T> assembled_solution() const {
    TrigSeries<T> x(problem.ring());
    for (const auto &s : solutions) x += s;
    return x;
  }

private:
  T sum_freq() const {
    T s = RingOps<T>::zero(problem.ring());
    for (const auto &c : freq_coeffs) s = s + c;
    return s;
  }
};

namespace detail {

// Extends the graded components of x^j (j = 1..top) by order n, assuming all
// lower orders are present.  powers[j-1][m] is the order-m component of x^j.
template <class T>
void extend_graded_powers(std::vector<std::vector<TrigSeries<T>>> &powers,
                          const TrigSeries<T> &x_n, const Ring &ring) {
  powers[0].push_back(x_n);
  const size_t n = powers[0].size() - 1;
  for (size_t j = 1; j < powers.size(); ++j) {
    TrigSeries<T> comp(ring);
    for (size_t i = 0; i <= n; ++i) comp += powers[j - 1][i] * powers[0][n - i];
    powers[j].push_back(std::move(comp));
  }
}

template <class T> void validate_conservative(const Problem<T> &p) {
  if (p.family != FamilyKind::Conservative)
    throw InvalidFamily("expected a conservative family");
  if (p.power < 2)
    throw ConfigError("potential exponent N must be at least 2");
  if (p.max_order < 0) throw OrderOutOfRange("max_order must be non-negative");
  Ring ring = p.ring();
  if (RingOps<T>::ring_of(p.amplitude) != ring || RingOps<T>::ring_of(p.lambda_sq) != ring)
    throw RingMismatch("problem parameters must share one ring");
  T one = RingOps<T>::from_long(1, ring);
  if ((one + p.lambda_sq).sign() <= 0)
    throw NonOscillatory("1 + lambda^2 must be positive");
  if (p.mu.sign() < 0 && !p.amplitude.is_zero()) {
    // The potential loses convexity at x* with 1 + mu x*^(2N-2) = 0; closed
    // orbits require the amplitude to stay inside the turning point.
    T turn = one + p.mu * p.amplitude.pow(2 * p.power - 2);
    if (turn.sign() <= 0)
      throw NonOscillatory("amplitude reaches the non-oscillatory region of the potential");
  }
}

} // namespace detail

// The delta-graded recursion for conservative oscillators
//
//   Omega^2 x'' + (1 + lambda^2) x = delta [ -mu x^(2N-1) + lambda^2 x ],
//   Omega^2 = sum_n alpha_n delta^n,  x = sum_n x_n delta^n,
//
// solved order by order: alpha_n is fixed by cancelling the resonant cos(tau)
// component of the order-n right-hand side, then x_n is the no-fundamental
// particular solution plus the convention's homogeneous amendment.
template <class T> Expansion<T> expand_conservative(const Problem<T> &p) {
  detail::validate_conservative(p);
  const Ring ring = p.ring();
  const T zero = RingOps<T>::zero(ring);
  const T w0 = RingOps<T>::from_long(1, ring) + p.lambda_sq;

  Expansion<T> e;
  e.problem = p;
  e.freq_coeffs.push_back(w0);

  TrigSeries<T> x0(ring);
  if (!p.amplitude.is_zero()) x0.add_cos(1, p.amplitude);
  e.solutions.push_back(x0);

  if (p.amplitude.is_zero()) {
    // Degenerate equilibrium solution: every correction vanishes.
    for (long n = 1; n <= p.max_order; ++n) {
      e.freq_coeffs.push_back(zero);
      e.solutions.push_back(TrigSeries<T>(ring));
    }
    return e;
  }

  const long top = 2 * p.power - 1;
  std::vector<std::vector<TrigSeries<T>>> powers(top);
  detail::extend_graded_powers(powers, x0, ring);

  std::vector<TrigSeries<T>> xdd; // second derivatives of the x_n
  xdd.push_back(x0.differentiate().differentiate());

  for (long n = 1; n <= p.max_order; ++n) {
    // Order-n right-hand side without the unknown alpha_n x_0'' term.
    TrigSeries<T> r = e.solutions[n - 1] * p.lambda_sq;
    r.add_scaled(powers[top - 1][n - 1], -p.mu);
    for (long k = 1; k < n; ++k) r.add_scaled(xdd[n - k], -e.freq_coeffs[k]);

    // -alpha_n x_0'' contributes +alpha_n A cos(tau); solvability fixes it.
    T alpha_n = -(r.cos_coef(1) / p.amplitude);
    r.add_cos(1, alpha_n * p.amplitude);

    TrigSeries<T> x_n = r.solve_linear_oscillator(w0);
    if (p.convention == Convention::AmplitudeAtZero) {
      T a_n = -x_n.value_at_zero();
      if (!RingOps<T>::is_zero(a_n)) x_n.add_cos(1, a_n);
    }

    e.freq_coeffs.push_back(std::move(alpha_n));
    e.solutions.push_back(x_n);
    xdd.push_back(x_n.differentiate().differentiate());
    detail::extend_graded_powers(powers, e.solutions.back(), ring);
  }
  return e;
}

// Van der Pol expansion with deferred amplitudes (implemented separately;
// requires the bigfloat ring because omega_0 = sqrt(1 + lambda^2)).
Expansion<BigFloat> expand_vdp(const Problem<BigFloat> &p);

// Substitutes the computed series back into the delta-graded equation and
// returns the L1 norm of the order-`order` defect.  The graded powers are
// recomputed here from the stored solutions, independently of the caches the
// engines use internally.
template <class T> T residual_check(const Expansion<T> &e, long order) {
  const Problem<T> &p = e.problem;
  const Ring ring = p.ring();
  if (order < 0 || order >= static_cast<long>(e.solutions.size()))
    throw OrderOutOfRange("no solution stored at the requested order");

  TrigSeries<T> defect(ring);
  const T w0 = RingOps<T>::from_long(1, ring) + p.lambda_sq;

  if (p.family == FamilyKind::Conservative) {
    defect = e.solutions[order] * w0;
    for (long k = 0; k <= order; ++k)
      defect += e.solutions[order - k].differentiate().differentiate() * e.freq_coeffs[k];
    if (order >= 1) {
      const long top = 2 * p.power - 1;
      std::vector<std::vector<TrigSeries<T>>> powers(top);
      for (long m = 0; m < order; ++m)
        detail::extend_graded_powers(powers, e.solutions[m], ring);
      defect.add_scaled(powers[top - 1][order - 1], p.mu);
      defect.add_scaled(e.solutions[order - 1], -p.lambda_sq);
    }
    return defect.l1_norm();
  }

  // Van der Pol: Omega^2 x'' + (1 + lambda^2) x = delta [mu Omega (1 - x^2) x' + lambda^2 x]
  std::vector<TrigSeries<T>> xd, xsq, w;
  for (long m = 0; m <= order; ++m) {
    xd.push_back(e.solutions[m].differentiate());
    TrigSeries<T> sq(ring);
    for (long i = 0; i <= m; ++i) sq += e.solutions[i] * e.solutions[m - i];
    xsq.push_back(std::move(sq));
    TrigSeries<T> wm = xd[m];
    for (long i = 0; i <= m; ++i) wm -= xsq[i] * xd[m - i];
    w.push_back(std::move(wm));
  }
  defect = e.solutions[order] * w0;
  for (long k = 0; k <= order; ++k) {
    T om2_k = RingOps<T>::zero(ring);
    for (long i = 0; i <= k; ++i) om2_k.add_mul(e.freq_coeffs[i], e.freq_coeffs[k - i]);
    defect += xd[order - k].differentiate() * om2_k;
  }
  if (order >= 1) {
    for (long i = 0; i < order; ++i)
      defect.add_scaled(w[order - 1 - i], -(p.mu * e.freq_coeffs[i]));
    defect.add_scaled(e.solutions[order - 1], -p.lambda_sq);
  }
  return defect.l1_norm();
}

// cbar[n][m]: coefficient of cos((2n+1) tau) in x_m.  Row sums give the
// assembled approximate Fourier coefficients c_n.
template <class T>
std::vector<std::vector<T>> fourier_corrections(const Expansion<T> &e) {
  if (e.is_vdp()) throw InvalidFamily("Fourier-correction matrix is defined for conservative expansions");
  long max_h = 0;
  for (const auto &s : e.solutions)
    if (s.max_harmonic() > max_h) max_h = s.max_harmonic();
  const long rows = (max_h + 1) / 2;
  std::vector<std::vector<T>> cbar;
  cbar.reserve(rows);
  for (long n = 0; n < rows; ++n) {
    std::vector<T> row;
    row.reserve(e.solutions.size());
    for (const auto &s : e.solutions) row.push_back(s.cos_coef(2 * n + 1));
    cbar.push_back(std::move(row));
  }
  return cbar;
}

template <class T> std::vector<T> fourier_coefficients(const Expansion<T> &e) {
  auto cbar = fourier_corrections(e);
  std::vector<T> c;
  c.reserve(cbar.size());
  for (const auto &row : cbar) {
    T s = RingOps<T>::zero(e.problem.ring());
    for (const auto &v : row) s = s + v;
    c.push_back(std::move(s));
  }
  return c;
}

// kappa_n = -alpha_n (1 + 3 A^2 mu / 4)^(n-1) / (A^2 mu)^n: the parameter-free
// content of the even frequency coefficients of the cubic oscillator expanded
// at the third-order stationary lambda^2 = 3 A^2 mu / 4.
Rational extract_kappa(const Expansion<Rational> &e, long n);

// Expands at two unrelated rational parameter pairs and cross-checks that
// extract_kappa agrees exactly, which is the factorization property the
// kappa table relies on.  Returns (n, kappa_n) for even n = 2..max_order.
std::vector<std::pair<long, Rational>> kappa_table(long max_order);

// beta[n][m] = cbar[n][m] (1 + 3 A^2 mu / 4)^m / (A (A^2 mu)^m), the
// parameter-free content of the Fourier-correction matrix.
Rational beta_coefficient(const Expansion<Rational> &e, long n, long m);

// Ordinary least squares y ~ slope x + intercept.
struct LinearFit {
  double slope = 0;
  double intercept = 0;
  double r_squared = 1;
};
LinearFit fit_line(const std::vector<double> &x, const std::vector<double> &y);

// Fit kappa_n ~ prefactor * exp(-rate n) through the logarithms.
struct DecayFit {
  double prefactor = 0;
  double rate = 0;
  double r_squared = 1;
};
DecayFit fit_kappa_decay(const std::vector<std::pair<long, Rational>> &kappas);

// Ring-erased boundary used by serialization, the CLI and the bindings.
struct ProblemSpec {
  FamilyKind family = FamilyKind::Conservative;
  long power = 2;
  RingScalar mu{Rational(0)};
  RingScalar amplitude{Rational(0)};
  RingScalar lambda_sq{Rational(0)};
  long max_order = 0;
  Convention convention = Convention::AmplitudeAtZero;
};

using AnyExpansion = std::variant<Expansion<Rational>, Expansion<BigFloat>>;

// Dispatches on the family and the common ring of the scalars.
AnyExpansion expand(const ProblemSpec &spec);

template <class T> Problem<T> to_problem(const ProblemSpec &spec);

} // namespace lplde

#endif
