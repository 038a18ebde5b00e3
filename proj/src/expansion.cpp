#include "lplde/expansion.hpp"

#include <cmath>

namespace lplde {

namespace {

// The extraction below is only meaningful for the cubic conservative family
// expanded at the third-order stationary point lambda^2 = 3 A^2 mu / 4.
void require_kappa_form(const Problem<Rational> &p) {
  if (p.family != FamilyKind::Conservative || p.power != 2)
    throw InvalidFamily("kappa extraction requires the cubic conservative family");
  if (p.mu.is_zero() || p.amplitude.is_zero())
    throw ConfigError("kappa extraction requires nonzero mu and amplitude");
  Rational a2mu = p.amplitude * p.amplitude * p.mu;
  if (p.lambda_sq != Rational(3, 4) * a2mu)
    throw ConfigError("kappa extraction requires lambda^2 = 3 A^2 mu / 4");
}

} // namespace

Rational extract_kappa(const Expansion<Rational> &e, long n) {
  require_kappa_form(e.problem);
  if (n < 2 || n % 2 != 0 || n >= static_cast<long>(e.freq_coeffs.size()))
    throw OrderOutOfRange("kappa_n is defined for even n in [2, max_order]");
  const Problem<Rational> &p = e.problem;
  Rational a2mu = p.amplitude * p.amplitude * p.mu;
  Rational base = Rational(1) + Rational(3, 4) * a2mu;
  return -e.freq_coeffs[n] * base.pow(n - 1) / a2mu.pow(n);
}

std::vector<std::pair<long, Rational>> kappa_table(long max_order) {
  if (max_order < 2) throw OrderOutOfRange("kappa table needs max_order >= 2");
  auto expand_at = [&](const Rational &mu, const Rational &amp) {
    Rational lam = Rational(3, 4) * amp * amp * mu;
    return expand_conservative(
        conservative_problem(2, mu, amp, lam, max_order));
  };
  Expansion<Rational> first = expand_at(Rational(1), Rational(1));
  Expansion<Rational> second = expand_at(Rational(3), Rational(1, 2));

  std::vector<std::pair<long, Rational>> table;
  for (long n = 2; n <= max_order; n += 2) {
    Rational k1 = extract_kappa(first, n);
    Rational k2 = extract_kappa(second, n);
    if (k1 != k2)
      throw ParameterDependence("kappa_" + std::to_string(n) +
                                " differs between parameter pairs: " + k1.str() +
                                " vs " + k2.str());
    table.emplace_back(n, k1);
  }
  return table;
}

Rational beta_coefficient(const Expansion<Rational> &e, long n, long m) {
  require_kappa_form(e.problem);
  auto cbar = fourier_corrections(e);
  if (n < 0 || n >= static_cast<long>(cbar.size()) || m < 0 ||
      m >= static_cast<long>(e.solutions.size()))
    throw OrderOutOfRange("beta index outside the correction matrix");
  const Problem<Rational> &p = e.problem;
  Rational a2mu = p.amplitude * p.amplitude * p.mu;
  Rational base = Rational(1) + Rational(3, 4) * a2mu;
  return cbar[n][m] * base.pow(m) / (p.amplitude * a2mu.pow(m));
}

LinearFit fit_line(const std::vector<double> &x, const std::vector<double> &y) {
  if (x.size() != y.size() || x.size() < 2)
    throw InsufficientData("line fit needs at least two points");
  const double n = static_cast<double>(x.size());
  double sx = 0, sy = 0, sxx = 0, sxy = 0, syy = 0;
  for (size_t i = 0; i < x.size(); ++i) {
    sx += x[i];
    sy += y[i];
    sxx += x[i] * x[i];
    sxy += x[i] * y[i];
    syy += y[i] * y[i];
  }
  const double det = n * sxx - sx * sx;
  if (det == 0) throw InsufficientData("degenerate abscissae in line fit");
  LinearFit f;
  f.slope = (n * sxy - sx * sy) / det;
  f.intercept = (sy - f.slope * sx) / n;
  const double ss_tot = syy - sy * sy / n;
  double ss_res = 0;
  for (size_t i = 0; i < x.size(); ++i) {
    const double r = y[i] - (f.slope * x[i] + f.intercept);
    ss_res += r * r;
  }
  f.r_squared = ss_tot > 0 ? 1.0 - ss_res / ss_tot : 1.0;
  return f;
}

DecayFit fit_kappa_decay(const std::vector<std::pair<long, Rational>> &kappas) {
  if (kappas.size() < 5)
    throw InsufficientData("decay fit needs at least five orders");
  std::vector<double> ns, logs;
  ns.reserve(kappas.size());
  logs.reserve(kappas.size());
  for (const auto &[n, k] : kappas) {
    if (k.sign() <= 0)
      throw ConfigError("decay fit requires positive coefficients");
    ns.push_back(static_cast<double>(n));
    // Logarithms via bigfloats: deep-order kappas underflow doubles.
    logs.push_back(BigFloat::from_rational(k, 128).log().to_double());
  }
  LinearFit line = fit_line(ns, logs);
  return DecayFit{std::exp(line.intercept), -line.slope, line.r_squared};
}

template <class T> Problem<T> to_problem(const ProblemSpec &spec) {
  Ring ring = spec.mu.ring();
  if (spec.amplitude.ring() != ring || spec.lambda_sq.ring() != ring)
    throw RingMismatch("problem parameters must share one ring");
  auto as_t = [&](const RingScalar &s) {
    if constexpr (std::is_same_v<T, Rational>) return s.rational();
    else return s.to_bigfloat(ring.precision_bits());
  };
  return Problem<T>{spec.family,        spec.power,     as_t(spec.mu),
                    as_t(spec.amplitude), as_t(spec.lambda_sq),
                    spec.max_order,     spec.convention};
}

template Problem<Rational> to_problem<Rational>(const ProblemSpec &);
template Problem<BigFloat> to_problem<BigFloat>(const ProblemSpec &);

AnyExpansion expand(const ProblemSpec &spec) {
  const bool exact = spec.mu.ring().is_exact();
  if (spec.family == FamilyKind::VanDerPol) {
    if (exact)
      throw RingMismatch("the Van der Pol expansion requires a bigfloat ring");
    return expand_vdp(to_problem<BigFloat>(spec));
  }
  if (exact) return expand_conservative(to_problem<Rational>(spec));
  return expand_conservative(to_problem<BigFloat>(spec));
}

} // namespace lplde
