#include "lplde/pms.hpp"

#include <cmath>
#include <cstddef>

namespace lplde {

namespace {

// Shared evaluation state: every objective evaluation lands in the trace.
struct Objective {
  const ProblemSpec &spec;
  int order;
  long prec;
  std::vector<std::pair<BigFloat, BigFloat>> trace;

  BigFloat operator()(const BigFloat &lambda_sq) {
    BigFloat value(prec);
    if (spec.family == FamilyKind::VanDerPol) {
      Problem<BigFloat> p = vdp_problem(spec.mu.to_bigfloat(prec), lambda_sq, order);
      p.convention = spec.convention;
      value = expand_vdp(p).omega_total_vdp();
    } else {
      Problem<BigFloat> p =
          conservative_problem<BigFloat>(spec.power, spec.mu.to_bigfloat(prec),
                                         spec.amplitude.to_bigfloat(prec), lambda_sq, order);
      p.convention = spec.convention;
      value = expand_conservative(p).omega_sq_total();
    }
    trace.emplace_back(lambda_sq, value);
    return value;
  }

  // Centered finite difference of the objective in lambda^2.
  BigFloat derivative(const BigFloat &lambda_sq) {
    const BigFloat h_rel = lambda_sq.abs() * BigFloat::from_double(1e-6, prec);
    const BigFloat h_abs = BigFloat::from_double(1e-8, prec);
    const BigFloat h = h_rel > h_abs ? h_rel : h_abs;
    return ((*this)(lambda_sq + h) - (*this)(lambda_sq - h)) / (2 * h);
  }
};

long evaluation_precision(const ProblemSpec &spec) {
  for (const RingScalar *s : {&spec.mu, &spec.amplitude, &spec.lambda_sq}) {
    const Ring r = s->ring();
    if (!r.is_exact()) return r.precision_bits();
  }
  return kDefaultPrecisionBits;
}

} // namespace

RingScalar third_order_lambda_sq(FamilyKind family, long n_power, const RingScalar &mu,
                                 const RingScalar &amplitude) {
  if (family != FamilyKind::Conservative)
    throw InvalidFamily("the closed-form optimum exists for the conservative family only");
  long num = 0, den = 1, a_power = 0;
  switch (n_power) {
  case 2:
    num = 3;
    den = 4;
    a_power = 2;
    break;
  case 3:
    num = 211;
    den = 312;
    a_power = 4;
    break;
  case 4:
    num = 10885;
    den = 16896;
    a_power = 6;
    break;
  default:
    throw InvalidFamily("no closed-form optimum for this restoring-force power");
  }
  const Ring ring = mu.ring();
  const Rational frac(num, den);
  RingScalar factor = ring.is_exact()
                          ? RingScalar(frac)
                          : RingScalar(BigFloat::from_rational(frac, ring.precision_bits()));
  RingScalar result = factor * mu;
  for (long i = 0; i < a_power; ++i) result = result * amplitude;
  return result;
}

BigFloat vdp_lambda_fit(const BigFloat &mu) {
  const long prec = mu.precision_bits();
  const BigFloat intercept = BigFloat::from_rational(Rational(212599, 1000000), prec);
  const BigFloat slope = BigFloat::from_rational(Rational(117166, 100000), prec);
  return intercept + slope * mu;
}

PMSResult pms_search(const ProblemSpec &spec, int order, const BigFloat &lo,
                     const BigFloat &hi, const BigFloat &tol, const BigFloat *seed) {
  if (tol.sign() <= 0) throw ConfigError("stationary-point tolerance must be positive");
  if (order < 1) throw ConfigError("stationarity needs at least one expansion order");

  // All arithmetic runs at the evaluation precision regardless of what the
  // caller built the bracket in.
  const long prec = evaluation_precision(spec);
  const BigFloat lo_n = lo.at_precision(prec), hi_n = hi.at_precision(prec);
  const BigFloat tol_n = tol.at_precision(prec);
  if (!(lo_n < hi_n)) throw ConfigError("stationary-point bracket is empty");
  Objective f{spec, order, prec, {}};
  const BigFloat middle = (lo_n + hi_n) / 2;
  const BigFloat seed_val = seed ? seed->at_precision(prec) : middle;

  // Scan the bracket for sign changes of the derivative.
  constexpr int kIntervals = 32;
  std::vector<BigFloat> grid, slope;
  grid.reserve(kIntervals + 1);
  slope.reserve(kIntervals + 1);
  for (int i = 0; i <= kIntervals; ++i) {
    BigFloat x = lo_n + (hi_n - lo_n) * i / kIntervals;
    slope.push_back(f.derivative(x));
    grid.push_back(std::move(x));
  }
  int pick = -1;
  BigFloat pick_distance(prec);
  for (int i = 0; i < kIntervals; ++i) {
    if (slope[i].sign() == 0 || slope[i].sign() == slope[i + 1].sign()) continue;
    const BigFloat dist = ((grid[i] + grid[i + 1]) / 2 - seed_val).abs();
    if (pick < 0 || dist < pick_distance) {
      pick = i;
      pick_distance = dist;
    }
  }
  if (pick < 0) {
    bool flat = true;
    for (const BigFloat &g : slope)
      if (g.sign() != 0) flat = false;
    throw NoSignChange(flat ? "objective is flat across the bracket"
                            : "objective derivative keeps one sign across the bracket");
  }

  // Bisection on the derivative sign.
  BigFloat a = grid[pick], b = grid[pick + 1];
  int sign_a = slope[pick].sign();
  BigFloat opt = (a + b) / 2;
  bool converged = false;
  for (int iter = 0; iter < 200; ++iter) {
    opt = (a + b) / 2;
    const BigFloat scale = 1 + opt.abs();
    if ((b - a) < tol_n * scale) {
      converged = true;
      break;
    }
    const BigFloat g = f.derivative(opt);
    if (g.sign() == 0) {
      converged = true;
      break;
    }
    if (g.sign() == sign_a) a = opt;
    else b = opt;
  }
  if (!converged) throw ToleranceNotReached("stationary-point bisection stalled");

  PMSResult out;
  out.lambda_sq_opt = RingScalar(opt);
  out.order_used = order;
  out.objective = spec.family == FamilyKind::VanDerPol ? PmsObjective::Omega
                                                       : PmsObjective::OmegaSquared;
  out.stationarity_residual = f.derivative(opt).abs();
  out.search_trace = std::move(f.trace);
  return out;
}

namespace {

// Last interior local minimum of the self-sustained frequency over a uniform
// lambda grid, refined by golden-section search.  See pms_optimize's contract
// for why the right-most minimum is the meaningful stationary point.
PMSResult vdp_plateau_minimum(const ProblemSpec &spec, int order, const BigFloat &tol,
                              long prec) {
  if (tol.sign() <= 0) throw ConfigError("stationary-point tolerance must be positive");
  if (order < 1) throw ConfigError("stationarity needs at least one expansion order");
  const BigFloat fit = vdp_lambda_fit(spec.mu.to_bigfloat(prec));
  if (fit.sign() <= 0)
    throw ConfigError("the empirical seed of the optimal parameter is not positive");
  Objective f{spec, order, prec, {}};
  const auto eval = [&](const BigFloat &lam) { return f(lam * lam); };

  constexpr int kIntervals = 96;
  const BigFloat lo = fit / 4, hi = 3 * fit;
  std::vector<BigFloat> lam(kIntervals + 1, BigFloat(prec));
  std::vector<BigFloat> val(kIntervals + 1, BigFloat(prec));
  for (int i = 0; i <= kIntervals; ++i) {
    lam[i] = lo + (hi - lo) * i / kIntervals;
    val[i] = eval(lam[i]);
  }
  int pick = -1;
  for (int i = 1; i < kIntervals; ++i)
    if (val[i - 1] > val[i] && val[i] < val[i + 1]) pick = i;
  if (pick < 0)
    throw NoSignChange("the assembled frequency has no interior minimum across the bracket");

  // Golden-section refinement inside the grid neighbourhood of the minimum.
  const BigFloat inv_phi =
      (BigFloat::from_long(5, prec).sqrt() - 1) / 2; // 1/phi = 0.618...
  BigFloat a = lam[pick - 1], b = lam[pick + 1];
  BigFloat c = b - (b - a) * inv_phi, d = a + (b - a) * inv_phi;
  BigFloat fc = eval(c), fd = eval(d);
  const BigFloat tol_n = tol.at_precision(prec);
  for (int iter = 0; iter < 400 && (b - a) > tol_n * (1 + b.abs()); ++iter) {
    if (fc < fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - (b - a) * inv_phi;
      fc = eval(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + (b - a) * inv_phi;
      fd = eval(d);
    }
  }
  const BigFloat opt = (a + b) / 2;
  const BigFloat opt_sq = opt * opt;

  PMSResult out;
  out.lambda_sq_opt = RingScalar(opt_sq);
  out.order_used = order;
  out.objective = PmsObjective::Omega;
  out.stationarity_residual = f.derivative(opt_sq).abs();
  out.search_trace = std::move(f.trace);
  return out;
}

} // namespace

PMSResult pms_optimize(const ProblemSpec &spec, int order, const BigFloat &tol) {
  const long prec = evaluation_precision(spec);
  if (spec.family == FamilyKind::VanDerPol)
    return vdp_plateau_minimum(spec, order, tol, prec);
  const BigFloat seed =
      third_order_lambda_sq(spec.family, spec.power, spec.mu, spec.amplitude)
          .to_bigfloat(prec);
  BigFloat lo(prec), hi(prec);
  if (seed.sign() > 0) {
    lo = seed / 10;
    hi = 10 * seed;
  } else if (seed.sign() < 0) {
    lo = 10 * seed;
    // The interpolated frequency degenerates at lambda^2 = -1; stay inside.
    const BigFloat floor = BigFloat::from_rational(Rational(-9, 10), prec);
    if (lo < floor) lo = floor;
    hi = seed / 10;
  } else {
    lo = BigFloat::zero(prec);
    hi = BigFloat::from_long(1, prec);
  }
  return pms_search(spec, order, lo, hi, tol, &seed);
}

} // namespace lplde
