#ifndef LPLDE_PMS_HPP
#define LPLDE_PMS_HPP

#include <utility>
#include <vector>

#include "lplde/errors.hpp"
#include "lplde/expansion.hpp"
#include "lplde/ring.hpp"

namespace lplde {

// Quantity whose stationarity in the auxiliary parameter is enforced:
// the squared frequency for conservative families, the frequency itself
// for the self-sustained oscillator.
enum class PmsObjective { OmegaSquared, Omega };

struct PMSResult {
  RingScalar lambda_sq_opt{Rational(0)};
  int order_used = 0;
  PmsObjective objective = PmsObjective::OmegaSquared;
  // Every (lambda^2, objective) evaluation made during the search, in the
  // order it happened (finite-difference probes included).
  std::vector<std::pair<BigFloat, BigFloat>> search_trace;
  // |d(objective)/d(lambda^2)| at the returned point, by centered
  // differences.
  BigFloat stationarity_residual;
};

// Closed-form third-order optima of the auxiliary parameter for the
// conservative families:
//   quartic force (N=2):  lambda^2 = (3/4)    mu A^2
//   sextic  force (N=3):  lambda^2 = (211/312)  mu A^4
//   octic   force (N=4):  lambda^2 = (10885/16896) mu A^6
// Computed in the ring of the inputs.  For mu < 0 the value is negative and
// is returned as-is: only lambda^2 enters the interpolated equation, and the
// tuned expansion remains valid on the softening branch.
RingScalar third_order_lambda_sq(FamilyKind family, long n_power, const RingScalar &mu,
                                 const RingScalar &amplitude);

// Empirical linear growth of the optimal auxiliary parameter for the
// self-sustained oscillator, lambda(mu) = 0.212599 + 1.17166 mu, valid as a
// seed or as a fixed semi-analytical choice.  At mu = 0 this extrapolates
// below the fitted range.
BigFloat vdp_lambda_fit(const BigFloat &mu);

// Stationary-point search for the order-`order` objective over lambda^2 in
// [lo, hi]: the derivative is sampled by centered finite differences with
// step h = max(1e-6 |lambda^2|, 1e-8) on a 32-interval scan, every sign
// change is recorded in the trace, and the one nearest `seed` (default: the
// bracket midpoint) is refined by bisection until the bracket width falls
// below tol * max(1, |lambda^2|).
// Throws NoSignChange when the derivative never changes sign across the
// bracket (e.g. a flat objective at zero coupling), ConfigError for an
// empty bracket or non-positive tol, ToleranceNotReached if bisection
// stalls.
PMSResult pms_search(const ProblemSpec &spec, int order, const BigFloat &lo,
                     const BigFloat &hi, const BigFloat &tol,
                     const BigFloat *seed = nullptr);

// Stationary-point search with automatic bracketing.
//
// Conservative families: pms_search over lambda^2 in [0.1, 10] * (third-order
// optimum), clamped above lambda^2 = -9/10 on the softening branch and
// widened to [0, 1] when the seed vanishes.
//
// Self-sustained oscillator: at a fixed truncation order the assembled
// frequency diverges with oscillations for small lambda, settles onto a
// converged plateau, and rises monotonically past it.  The stationary point
// that tracks the empirical linear fit of the optimum (and keeps improving
// with the order) is the last local minimum of the frequency before that
// monotone rise, so the frequency is sampled on a uniform lambda grid over
// [fit/4, 3 fit] and the right-most interior minimum is refined by
// golden-section search to width tol * (1 + lambda).  Throws NoSignChange
// when no interior minimum exists at this order.
PMSResult pms_optimize(const ProblemSpec &spec, int order, const BigFloat &tol);

} // namespace lplde

#endif
