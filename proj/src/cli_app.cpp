#include "lplde/cli_app.hpp"

#include <atomic>
#include <cctype>
#include <cstdio>
#include <cstdlib>
#include <iostream>
#include <mutex>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include "CLI11.hpp"

#include "lplde/io.hpp"
#include "lplde/oracle.hpp"
#include "lplde/pms.hpp"

namespace lplde {
namespace {

// Flag-level problems (bad values, invalid flag combinations) exit with 2;
// problems the library raises while computing exit with 1.
struct UsageFault {
  std::string msg;
};

// ---------------------------------------------------------------------------
// number parsing

// Exact rational from a CLI token: "p/q", integers, decimals and exponent
// notation are all converted without rounding ("0.99" -> 99/100).
Rational parse_rational(const std::string &text) {
  if (text.find('/') != std::string::npos) {
    try {
      return Rational(text);
    } catch (const Error &) {
      throw UsageFault{"bad fraction '" + text + "'"};
    }
  }
  size_t i = 0;
  bool neg = false;
  if (i < text.size() && (text[i] == '+' || text[i] == '-')) {
    neg = text[i] == '-';
    ++i;
  }
  std::string int_part, frac_part;
  while (i < text.size() && std::isdigit(static_cast<unsigned char>(text[i])))
    int_part += text[i++];
  if (i < text.size() && text[i] == '.') {
    ++i;
    while (i < text.size() && std::isdigit(static_cast<unsigned char>(text[i])))
      frac_part += text[i++];
  }
  long exp10 = 0;
  if (i < text.size() && (text[i] == 'e' || text[i] == 'E')) {
    try {
      size_t used = 0;
      exp10 = std::stol(text.substr(i + 1), &used);
      i += 1 + used;
    } catch (const std::exception &) {
      throw UsageFault{"bad exponent in '" + text + "'"};
    }
  }
  if (i != text.size() || (int_part.empty() && frac_part.empty()))
    throw UsageFault{"bad number '" + text + "'"};
  Rational r(int_part + frac_part);
  long shift = exp10 - static_cast<long>(frac_part.size());
  if (shift > 16384 || shift < -16384)
    throw UsageFault{"exponent out of range in '" + text + "'"};
  const Rational ten(10);
  for (long k = 0; k < shift; ++k) r = r * ten;
  for (long k = 0; k < -shift; ++k) r = r / ten;
  return neg ? -r : r;
}

BigFloat parse_bigfloat(const std::string &text, long prec) {
  try {
    if (text.find('/') != std::string::npos)
      return BigFloat::from_rational(Rational(text), prec);
    return BigFloat::from_string(text, prec);
  } catch (const Error &) {
    throw UsageFault{"bad number '" + text + "'"};
  }
}

// ---------------------------------------------------------------------------
// formatting

// Rounds to `digits` significant decimal digits; plain notation when the
// decimal point lands inside the digits, scientific otherwise.
std::string sig_digits(const BigFloat &x, long digits) {
  if (x.is_zero()) return "0";
  if (!x.is_finite()) return x.str();
  mpfr_exp_t e;
  char *raw = mpfr_get_str(nullptr, &e, 10, static_cast<size_t>(digits), x.raw(),
                           MPFR_RNDN);
  std::string d(raw);
  mpfr_free_str(raw);
  std::string sign;
  if (!d.empty() && d[0] == '-') {
    sign = "-";
    d.erase(0, 1);
  }
  if (e >= 1 && e <= digits) {
    std::string out = d.substr(0, static_cast<size_t>(e));
    if (d.size() > static_cast<size_t>(e)) out += "." + d.substr(static_cast<size_t>(e));
    return sign + out;
  }
  std::string mant = d.substr(0, 1);
  if (d.size() > 1) mant += "." + d.substr(1);
  return sign + mant + "e" + std::to_string(e - 1);
}

std::string fmt_double(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

// ---------------------------------------------------------------------------
// ordered parallel sweeps

// Runs f(0..n-1) across hardware threads; callers index into pre-sized
// result slots, so output order never depends on scheduling.
template <class F> void parallel_for(long n, F f) {
  long workers = static_cast<long>(std::max(1u, std::thread::hardware_concurrency()));
  if (workers > n) workers = n;
  if (workers <= 1) {
    for (long i = 0; i < n; ++i) f(i);
    return;
  }
  std::atomic<long> next{0};
  std::mutex mtx;
  std::exception_ptr first_error;
  std::vector<std::thread> pool;
  pool.reserve(static_cast<size_t>(workers));
  for (long w = 0; w < workers; ++w)
    pool.emplace_back([&] {
      for (;;) {
        const long i = next.fetch_add(1);
        if (i >= n) return;
        try {
          f(i);
        } catch (...) {
          std::lock_guard<std::mutex> guard(mtx);
          if (!first_error) first_error = std::current_exception();
          return;
        }
      }
    });
  for (auto &t : pool) t.join();
  if (first_error) std::rethrow_exception(first_error);
}

// ---------------------------------------------------------------------------
// configuration

struct RunConfig {
  std::string family = "duffing";
  std::string mu = "1";
  std::string amplitude = "1";
  std::vector<std::string> mu_list;  // error-curve sweep
  std::vector<std::string> amp_list; // error-curve sweep
  long order = 3;
  long min_order = 1;
  long n_max = 8;
  long points = 200;
  std::string lambda_mode; // resolved per family when empty
  std::string lambda_sq;
  std::string lambda_min, lambda_max;
  std::string format;
  std::string out;
  long precision_bits = kDefaultPrecisionBits;
  std::string convention = "amplitude-at-zero";
  std::string oracle_tol;
  std::string pms_tol = "1e-6";
};

struct FamilyInfo {
  FamilyKind kind = FamilyKind::Conservative;
  long power = 2;
};

FamilyInfo family_info(const std::string &name) {
  if (name == "duffing") return {FamilyKind::Conservative, 2};
  if (name == "sextic") return {FamilyKind::Conservative, 3};
  if (name == "octic") return {FamilyKind::Conservative, 4};
  if (name == "vdp") return {FamilyKind::VanDerPol, 2};
  throw UsageFault{"unknown family '" + name + "'"};
}

Convention parse_convention(const std::string &name) {
  if (name == "amplitude-at-zero") return Convention::AmplitudeAtZero;
  if (name == "no-fundamental-corrections") return Convention::NoFundamentalCorrections;
  throw UsageFault{"unknown convention '" + name + "'"};
}

std::string resolve_lambda_mode(const RunConfig &c, const FamilyInfo &fam) {
  std::string mode = c.lambda_mode;
  if (mode.empty())
    mode = fam.kind == FamilyKind::VanDerPol ? "vdp-fit" : "third-order";
  if (mode == "third-order" && fam.kind != FamilyKind::Conservative)
    throw UsageFault{"--lambda-mode third-order applies to conservative families only"};
  if (mode == "vdp-fit" && fam.kind != FamilyKind::VanDerPol)
    throw UsageFault{"--lambda-mode vdp-fit applies to the vdp family only"};
  if (mode == "fixed" && c.lambda_sq.empty())
    throw UsageFault{"--lambda-mode fixed requires --lambda-sq"};
  return mode;
}

// Builds the problem and resolves lambda^2 according to the mode.  Exact
// rational modes keep conservative problems in the exact ring; pms and all
// Van der Pol modes work in bigfloats at the configured precision.
struct ResolvedProblem {
  ProblemSpec spec;
  std::string mode;
  std::optional<PMSResult> pms;
};

ResolvedProblem resolve_problem(const RunConfig &c) {
  const FamilyInfo fam = family_info(c.family);
  const std::string mode = resolve_lambda_mode(c, fam);
  const long prec = c.precision_bits;

  ProblemSpec spec;
  spec.family = fam.kind;
  spec.power = fam.power;
  spec.max_order = c.order;
  spec.convention = parse_convention(c.convention);

  ResolvedProblem r{spec, mode, std::nullopt};
  ProblemSpec &s = r.spec;

  if (fam.kind == FamilyKind::Conservative && mode != "pms") {
    s.mu = RingScalar(parse_rational(c.mu));
    s.amplitude = RingScalar(parse_rational(c.amplitude));
    if (mode == "fixed")
      s.lambda_sq = RingScalar(parse_rational(c.lambda_sq));
    else
      s.lambda_sq = third_order_lambda_sq(fam.kind, fam.power, s.mu, s.amplitude);
    return r;
  }

  s.mu = RingScalar(parse_bigfloat(c.mu, prec));
  if (fam.kind == FamilyKind::VanDerPol)
    s.amplitude = RingScalar(BigFloat::zero(prec));
  else
    s.amplitude = RingScalar(parse_bigfloat(c.amplitude, prec));
  s.lambda_sq = RingScalar(BigFloat::zero(prec));

  if (mode == "fixed") {
    s.lambda_sq = RingScalar(parse_bigfloat(c.lambda_sq, prec));
  } else if (mode == "vdp-fit") {
    const BigFloat fit = vdp_lambda_fit(s.mu.bigfloat());
    s.lambda_sq = RingScalar(fit * fit);
  } else { // pms
    const PMSResult res = pms_optimize(s, static_cast<int>(c.order),
                                       parse_bigfloat(c.pms_tol, prec));
    s.lambda_sq = res.lambda_sq_opt;
    r.pms = res;
  }
  return r;
}

// ---------------------------------------------------------------------------
// shared expansion views

BigFloat omega_sq_bf(const AnyExpansion &e, long prec) {
  return std::visit(
      [&](const auto &ee) {
        auto v = ee.omega_sq_total();
        return RingOps<std::decay_t<decltype(v)>>::to_bigfloat(v, prec);
      },
      e);
}

std::string omega_sq_tagged(const AnyExpansion &e) {
  return std::visit(
      [](const auto &ee) {
        auto v = ee.omega_sq_total();
        return RingOps<std::decay_t<decltype(v)>>::to_scalar(v).tagged_str();
      },
      e);
}

std::vector<std::string> fourier_tagged(const AnyExpansion &e) {
  return std::visit(
      [](const auto &ee) {
        using T = std::decay_t<decltype(ee.freq_coeffs[0])>;
        std::vector<std::string> out;
        for (const auto &c : fourier_coefficients(ee))
          out.push_back(RingOps<T>::to_scalar(c).tagged_str());
        return out;
      },
      e);
}

void emit(const RunConfig &c, const Json &doc) {
  write_text(c.out, doc.dump(2) + "\n");
}

void emit_csv(const RunConfig &c, const std::vector<std::string> &header,
              const std::vector<std::vector<std::string>> &rows) {
  write_text(c.out, csv_table(header, rows));
}

Json pms_to_json(const PMSResult &r) {
  Json j;
  j["lambda_sq"] = r.lambda_sq_opt.tagged_str();
  j["order_used"] = r.order_used;
  j["stationarity_residual"] = r.stationarity_residual.str();
  j["evaluations"] = r.search_trace.size();
  return j;
}

// ---------------------------------------------------------------------------
// subcommands

void run_solve(const RunConfig &c) {
  ResolvedProblem rp = resolve_problem(c);
  const long prec = c.precision_bits;
  const AnyExpansion e = expand(rp.spec);
  const bool vdp = rp.spec.family == FamilyKind::VanDerPol;

  const BigFloat om2 = omega_sq_bf(e, prec);
  if (om2.sign() <= 0)
    throw NonOscillatory("assembled squared frequency is not positive");
  const BigFloat om = om2.sqrt();
  const BigFloat period = 2 * BigFloat::pi(prec) / om;

  const Json ej = expansion_to_json(e);
  const char *series_key = vdp ? "omega_series" : "omega_sq_series";

  if (c.format == "csv") {
    std::vector<std::vector<std::string>> rows;
    const Json &series = ej[series_key];
    for (size_t n = 0; n < series.size(); ++n)
      rows.push_back({std::to_string(n), series[n].get<std::string>()});
    emit_csv(c, {"n", vdp ? "omega_coeff" : "omega_sq_coeff"}, rows);
    return;
  }

  Json doc;
  doc["problem"] = ej["problem"];
  doc["lambda_mode"] = rp.mode;
  doc["lambda_sq"] = rp.spec.lambda_sq.tagged_str();
  doc[series_key] = ej[series_key];
  doc["omega_sq"] = omega_sq_tagged(e);
  doc["omega"] = RingScalar(om).tagged_str();
  doc["period"] = RingScalar(period).tagged_str();
  if (vdp)
    doc["amplitudes"] = ej["amplitudes"];
  else
    doc["fourier_cos"] = fourier_tagged(e);
  doc["solutions"] = ej["solutions"];
  if (rp.pms) doc["pms"] = pms_to_json(*rp.pms);
  emit(c, doc);
}

void run_table1(const RunConfig &c) {
  const auto rows = kappa_table(c.order);
  if (c.format == "json") {
    Json arr = Json::array();
    for (const auto &[n, k] : rows)
      arr.push_back(Json{{"n", n}, {"kappa", k.str()}});
    emit(c, Json{{"rows", arr}});
    return;
  }
  std::vector<std::vector<std::string>> cells;
  cells.reserve(rows.size());
  for (const auto &[n, k] : rows) cells.push_back({std::to_string(n), k.str()});
  emit_csv(c, {"n", "kappa"}, cells);
}

void run_table2(const RunConfig &c) {
  const long prec = c.precision_bits;
  const BigFloat oracle_tol =
      parse_bigfloat(c.oracle_tol.empty() ? "1e-10" : c.oracle_tol, prec);
  const BigFloat pms_tol = parse_bigfloat(c.pms_tol, prec);

  struct Row {
    BigFloat t_approx, t_exact, lambda_sq;
  };
  std::vector<Row> rows(10, Row{BigFloat(prec), BigFloat(prec), BigFloat(prec)});

  parallel_for(10, [&](long i) {
    const BigFloat mu = BigFloat::from_long(i + 1, prec);
    const OracleResult oracle = vdp_limit_cycle(mu, oracle_tol);

    ProblemSpec spec;
    spec.family = FamilyKind::VanDerPol;
    spec.mu = RingScalar(mu);
    spec.amplitude = RingScalar(BigFloat::zero(prec));
    spec.lambda_sq = RingScalar(BigFloat::zero(prec));
    spec.max_order = c.order;
    const PMSResult pms = pms_optimize(spec, static_cast<int>(c.order), pms_tol);
    spec.lambda_sq = pms.lambda_sq_opt;

    const Expansion<BigFloat> e = expand_vdp(to_problem<BigFloat>(spec));
    const BigFloat om = e.omega_total_vdp();
    if (om.sign() <= 0) throw NonOscillatory("assembled frequency is not positive");
    rows[i] = Row{2 * BigFloat::pi(prec) / om, oracle.period,
                  pms.lambda_sq_opt.to_bigfloat(prec)};
  });

  auto delta_pct = [](const Row &r) {
    return ((r.t_approx - r.t_exact) / r.t_exact).abs() * 100;
  };

  if (c.format == "json") {
    Json arr = Json::array();
    for (long i = 0; i < 10; ++i) {
      const Row &r = rows[i];
      arr.push_back(Json{{"mu", i + 1},
                         {"T_approx", sig_digits(r.t_approx, 9)},
                         {"T_exact", sig_digits(r.t_exact, 9)},
                         {"delta_pct", sig_digits(delta_pct(r), 6)},
                         {"T_approx_full", r.t_approx.str()},
                         {"T_exact_full", r.t_exact.str()},
                         {"lambda_sq", r.lambda_sq.str()}});
    }
    emit(c, Json{{"order", c.order}, {"rows", arr}});
    return;
  }
  std::vector<std::vector<std::string>> cells;
  for (long i = 0; i < 10; ++i) {
    const Row &r = rows[i];
    cells.push_back({std::to_string(i + 1), sig_digits(r.t_approx, 9),
                     sig_digits(r.t_exact, 9), sig_digits(delta_pct(r), 6),
                     r.t_approx.str(), r.t_exact.str(), r.lambda_sq.str()});
  }
  emit_csv(c,
           {"mu", "T_approx", "T_exact", "delta_pct", "T_approx_full",
            "T_exact_full", "lambda_sq"},
           cells);
}

void run_error_curve(const RunConfig &c) {
  const FamilyInfo fam = family_info(c.family);
  if (fam.kind != FamilyKind::Conservative)
    throw UsageFault{"error-curve applies to conservative families only"};
  const std::string mode = resolve_lambda_mode(c, fam);
  if (mode != "third-order" && mode != "fixed")
    throw UsageFault{"error-curve supports --lambda-mode third-order or fixed"};
  if (c.min_order < 1 || c.min_order > c.order)
    throw UsageFault{"--min-order must lie in [1, --order]"};

  const std::vector<std::string> mus = c.mu_list.empty()
                                           ? std::vector<std::string>{c.mu}
                                           : c.mu_list;
  const std::vector<std::string> amps = c.amp_list.empty()
                                            ? std::vector<std::string>{c.amplitude}
                                            : c.amp_list;
  const long prec = c.precision_bits;

  struct Curve {
    std::string mu, amp;
    std::vector<BigFloat> delta; // per order, min_order..order
  };
  std::vector<Curve> curves(mus.size() * amps.size());

  parallel_for(static_cast<long>(curves.size()), [&](long idx) {
    const std::string &mu_text = mus[static_cast<size_t>(idx) / amps.size()];
    const std::string &amp_text = amps[static_cast<size_t>(idx) % amps.size()];

    const Rational mu = parse_rational(mu_text);
    const Rational amp = parse_rational(amp_text);
    const RingScalar mu_s{mu}, amp_s{amp};
    const RingScalar lam2 = mode == "fixed"
                                ? RingScalar(parse_rational(c.lambda_sq))
                                : third_order_lambda_sq(fam.kind, fam.power, mu_s, amp_s);

    const auto problem = conservative_problem<Rational>(
        fam.power, mu, amp, lam2.rational(), c.order, parse_convention(c.convention));
    const Expansion<Rational> e = expand_conservative(problem);

    const OracleResult oracle = exact_period_conservative(
        fam.power, BigFloat::from_rational(mu, prec),
        BigFloat::from_rational(amp, prec));

    Curve curve{mu_text, amp_text, {}};
    Rational partial(0);
    for (long n = 0; n <= c.order; ++n) {
      partial = partial + e.freq_coeffs[static_cast<size_t>(n)];
      if (n < c.min_order) continue;
      curve.delta.push_back(
          error_metric(BigFloat::from_rational(partial, prec), oracle.omega_sq_exact));
    }
    curves[static_cast<size_t>(idx)] = std::move(curve);
  });

  const BigFloat ln10 = BigFloat::from_long(10, prec).log();
  std::vector<std::vector<std::string>> cells;
  Json arr = Json::array();
  for (const Curve &curve : curves) {
    for (size_t j = 0; j < curve.delta.size(); ++j) {
      const long order = c.min_order + static_cast<long>(j);
      const BigFloat &d = curve.delta[j];
      const std::string log10_str =
          d.is_zero() ? "-inf" : sig_digits(d.log() / ln10, 12);
      if (c.format == "json")
        arr.push_back(Json{{"mu", curve.mu},
                           {"A", curve.amp},
                           {"order", order},
                           {"delta_pct", d.str()},
                           {"log10_delta_pct", log10_str}});
      else
        cells.push_back({curve.mu, curve.amp, std::to_string(order), d.str(),
                         log10_str});
    }
  }
  if (c.format == "json")
    emit(c, Json{{"rows", arr}});
  else
    emit_csv(c, {"mu", "A", "order", "delta_pct", "log10_delta_pct"}, cells);
}

void run_fourier_compare(const RunConfig &c) {
  const FamilyInfo fam = family_info(c.family);
  if (fam.kind != FamilyKind::Conservative)
    throw UsageFault{"fourier-compare applies to conservative families only"};
  const long prec = c.precision_bits;

  ResolvedProblem rp = resolve_problem(c);
  const AnyExpansion e = expand(rp.spec);

  const BigFloat mu = rp.spec.mu.to_bigfloat(prec);
  const BigFloat amp = rp.spec.amplitude.to_bigfloat(prec);
  const BigFloat tol = c.oracle_tol.empty()
                           ? default_oracle_tolerance(prec)
                           : parse_bigfloat(c.oracle_tol, prec);
  const OracleResult oracle =
      conservative_fourier_exact(fam.power, mu, amp, c.n_max, tol);

  const std::vector<std::string> approx = fourier_tagged(e);

  std::vector<std::vector<std::string>> cells;
  Json arr = Json::array();
  for (long n = 0; n <= c.n_max; ++n) {
    const std::string c_approx =
        n < static_cast<long>(approx.size()) ? approx[static_cast<size_t>(n)] : "0";
    const BigFloat &c_exact = oracle.fourier_cos[static_cast<size_t>(n)];
    const BigFloat approx_bf =
        RingScalar::parse(c_approx).to_bigfloat(prec);
    const std::string ratio =
        c_exact.is_zero() ? "nan" : sig_digits(approx_bf / c_exact, 17);
    if (c.format == "json")
      arr.push_back(Json{{"n", n},
                         {"c_approx", c_approx},
                         {"c_exact", c_exact.str()},
                         {"ratio", ratio}});
    else
      cells.push_back({std::to_string(n), c_approx, c_exact.str(), ratio});
  }
  if (c.format == "json")
    emit(c, Json{{"lambda_sq", rp.spec.lambda_sq.tagged_str()}, {"rows", arr}});
  else
    emit_csv(c, {"n", "c_approx", "c_exact", "ratio"}, cells);
}

void run_energy_scan(const RunConfig &c) {
  const FamilyInfo fam = family_info(c.family);
  if (fam.kind != FamilyKind::Conservative)
    throw UsageFault{"energy-scan applies to conservative families only"};
  if (c.points < 2) throw UsageFault{"--points must be at least 2"};
  const long prec = c.precision_bits;

  const BigFloat mu = parse_bigfloat(c.mu, prec);
  const BigFloat amp = parse_bigfloat(c.amplitude, prec);
  const RingScalar lam2_star = third_order_lambda_sq(
      fam.kind, fam.power, RingScalar(mu), RingScalar(amp));
  const BigFloat lam_star_sq = lam2_star.to_bigfloat(prec);
  if (lam_star_sq.sign() < 0 && c.lambda_max.empty())
    throw UsageFault{"negative third-order optimum; pass --lambda-min/--lambda-max"};
  const BigFloat lam_star = lam_star_sq.sign() < 0 ? BigFloat::zero(prec)
                                                   : lam_star_sq.sqrt();

  const BigFloat lo = c.lambda_min.empty() ? BigFloat::zero(prec)
                                           : parse_bigfloat(c.lambda_min, prec);
  const BigFloat hi = c.lambda_max.empty() ? 3 * lam_star
                                           : parse_bigfloat(c.lambda_max, prec);
  if (!(lo < hi)) throw UsageFault{"--lambda-min must be below --lambda-max"};

  // All energy is potential at the turning point, so this is the exact
  // orbit energy every grid point is compared against.
  const BigFloat v_at_a =
      amp * amp / 2 + mu * amp.pow(2 * fam.power) / (2 * fam.power);

  struct Point {
    BigFloat lambda, energy;
  };
  std::vector<Point> pts(static_cast<size_t>(c.points),
                         Point{BigFloat(prec), BigFloat(prec)});
  const Convention conv = parse_convention(c.convention);

  parallel_for(c.points, [&](long i) {
    const BigFloat lam = lo + (hi - lo) * i / (c.points - 1);
    const auto problem = conservative_problem<BigFloat>(fam.power, mu, amp,
                                                        lam * lam, c.order, conv);
    const BigFloat energy = crossing_energy(expand_conservative(problem), prec);
    pts[static_cast<size_t>(i)] = Point{lam, energy};
  });

  if (c.format == "json") {
    Json arr = Json::array();
    for (const Point &p : pts)
      arr.push_back(Json{{"lambda", p.lambda.str()},
                         {"energy", p.energy.str()},
                         {"defect", (p.energy - v_at_a).abs().str()}});
    emit(c, Json{{"exact_energy", v_at_a.str()},
                 {"lambda_pms", lam_star.str()},
                 {"rows", arr}});
    return;
  }
  std::vector<std::vector<std::string>> cells;
  cells.reserve(pts.size());
  for (const Point &p : pts)
    cells.push_back(
        {p.lambda.str(), p.energy.str(), (p.energy - v_at_a).abs().str()});
  emit_csv(c, {"lambda", "energy", "defect"}, cells);
}

void run_kappa_fit(const RunConfig &c) {
  const auto kappas = kappa_table(c.order);
  const DecayFit fit = fit_kappa_decay(kappas);
  if (c.format == "json") {
    emit(c, Json{{"prefactor", fmt_double(fit.prefactor)},
                 {"rate", fmt_double(fit.rate)},
                 {"r_squared", fmt_double(fit.r_squared)},
                 {"n_min", 2},
                 {"n_max", c.order}});
    return;
  }
  emit_csv(c, {"prefactor", "rate", "r_squared", "n_min", "n_max"},
           {{fmt_double(fit.prefactor), fmt_double(fit.rate),
             fmt_double(fit.r_squared), "2", std::to_string(c.order)}});
}

// ---------------------------------------------------------------------------
// wiring

long default_precision_bits() {
  const char *env = std::getenv("LPLDE_PRECISION_BITS");
  if (!env || !*env) return kDefaultPrecisionBits;
  try {
    size_t used = 0;
    const long bits = std::stol(env, &used);
    if (used != std::string(env).size() || bits < 64)
      throw std::invalid_argument("range");
    return bits;
  } catch (const std::exception &) {
    throw UsageFault{std::string("bad LPLDE_PRECISION_BITS value '") + env + "'"};
  }
}

void add_family_options(CLI::App *cmd, RunConfig &c) {
  cmd->add_option("--family", c.family, "oscillator family")
      ->check(CLI::IsMember({"duffing", "sextic", "octic", "vdp"}))
      ->capture_default_str();
  cmd->add_option("--mu", c.mu, "coupling strength (fraction or decimal)")
      ->capture_default_str();
  cmd->add_option("--A", c.amplitude, "oscillation amplitude")->capture_default_str();
}

void add_lambda_options(CLI::App *cmd, RunConfig &c) {
  cmd->add_option("--lambda-mode", c.lambda_mode,
                  "fixed | third-order | pms | vdp-fit (default: third-order, "
                  "or vdp-fit for the vdp family)")
      ->check(CLI::IsMember({"fixed", "third-order", "pms", "vdp-fit"}));
  cmd->add_option("--lambda-sq", c.lambda_sq, "lambda^2 for --lambda-mode fixed");
  cmd->add_option("--pms-tol", c.pms_tol, "relative tolerance of the pms search")
      ->capture_default_str();
}

void add_output_options(CLI::App *cmd, RunConfig &c, const char *default_format) {
  cmd->add_option("--format", c.format, "output format")
      ->check(CLI::IsMember({"json", "csv"}))
      ->default_str(default_format);
  cmd->add_option("--out", c.out, "output path (default: stdout)");
  cmd->add_option("--precision-bits", c.precision_bits,
                  "bigfloat working precision (env LPLDE_PRECISION_BITS)")
      ->check(CLI::Range(64l, 1l << 20))
      ->capture_default_str();
  cmd->add_option("--convention", c.convention,
                  "homogeneous-amendment rule of the corrections")
      ->check(CLI::IsMember({"amplitude-at-zero", "no-fundamental-corrections"}))
      ->capture_default_str();
}

} // namespace

int run_cli(int argc, char **argv) {
  try {
    RunConfig c;
    c.precision_bits = default_precision_bits();

    CLI::App app{
        "High-order frequency and Fourier approximations of periodic orbits\n"
        "of anharmonic and self-sustained oscillators, with built-in numerical\n"
        "oracles for validation."};
    app.require_subcommand(1);

    CLI::App *solve = app.add_subcommand(
        "solve", "expand one problem and emit the frequency series, Fourier "
                 "coefficients and per-order solutions");
    add_family_options(solve, c);
    solve->add_option("--order", c.order, "expansion order")
        ->check(CLI::Range(0l, 4096l))
        ->default_str("3");
    add_lambda_options(solve, c);
    add_output_options(solve, c, "json");

    CLI::App *table1 = app.add_subcommand(
        "table1", "structural coefficients kappa_n of the quartic frequency "
                  "series, as exact fractions");
    table1->add_option("--order", c.order, "largest (even) n")
        ->check(CLI::Range(2l, 4096l))
        ->default_str("20");
    add_output_options(table1, c, "csv");

    CLI::App *table2 = app.add_subcommand(
        "table2", "approximate vs numerically exact self-sustained periods "
                  "for mu = 1..10");
    table2->add_option("--order", c.order, "expansion order")
        ->check(CLI::Range(1l, 4096l))
        ->default_str("44");
    table2->add_option("--oracle-tol", c.oracle_tol,
                       "limit-cycle section agreement tolerance (default 1e-10)");
    table2->add_option("--pms-tol", c.pms_tol, "relative tolerance of the pms search")
        ->capture_default_str();
    add_output_options(table2, c, "csv");

    CLI::App *curve = app.add_subcommand(
        "error-curve", "percent frequency error against the oracle, per order");
    curve->add_option("--family", c.family, "oscillator family")
        ->check(CLI::IsMember({"duffing", "sextic", "octic"}))
        ->capture_default_str();
    curve->add_option("--mu", c.mu_list, "coupling sweep values (repeatable)")
        ->take_all();
    curve->add_option("--A", c.amp_list, "amplitude sweep values (repeatable)")
        ->take_all();
    curve->add_option("--order", c.order, "largest order")
        ->check(CLI::Range(1l, 4096l))
        ->default_str("30");
    curve->add_option("--min-order", c.min_order, "smallest order")
        ->check(CLI::Range(1l, 4096l))
        ->capture_default_str();
    add_lambda_options(curve, c);
    add_output_options(curve, c, "csv");

    CLI::App *fourier = app.add_subcommand(
        "fourier-compare",
        "assembled Fourier coefficients against the oracle's, with ratios");
    add_family_options(fourier, c);
    fourier->add_option("--order", c.order, "expansion order")
        ->check(CLI::Range(1l, 4096l))
        ->default_str("20");
    fourier->add_option("--n-max", c.n_max, "largest odd-harmonic index")
        ->check(CLI::Range(0l, 512l))
        ->capture_default_str();
    fourier->add_option("--oracle-tol", c.oracle_tol,
                        "integrator tolerance of the sampling oracle");
    add_lambda_options(fourier, c);
    add_output_options(fourier, c, "csv");

    CLI::App *energy = app.add_subcommand(
        "energy-scan", "energy carried at the x = 0 crossing across a lambda "
                       "grid, with the conservation defect");
    add_family_options(energy, c);
    energy->add_option("--order", c.order, "expansion order")
        ->check(CLI::Range(0l, 4096l))
        ->default_str("3");
    energy->add_option("--points", c.points, "grid size")
        ->check(CLI::Range(2l, 100000l))
        ->capture_default_str();
    energy->add_option("--lambda-min", c.lambda_min, "grid start (default 0)");
    energy->add_option("--lambda-max", c.lambda_max,
                       "grid end (default 3x the third-order optimum)");
    add_output_options(energy, c, "csv");

    CLI::App *kfit = app.add_subcommand(
        "kappa-fit", "exponential-decay fit of the structural coefficients");
    kfit->add_option("--order", c.order, "largest (even) n in the fit")
        ->check(CLI::Range(4l, 4096l))
        ->default_str("50");
    add_output_options(kfit, c, "csv");

    try {
      app.parse(argc, argv);
    } catch (const CLI::CallForHelp &e) {
      return app.exit(e);
    } catch (const CLI::CallForAllHelp &e) {
      return app.exit(e);
    } catch (const CLI::ParseError &e) {
      app.exit(e);
      return 2;
    }

    // Per-subcommand defaults for the shared --order/--format slots.
    auto finish = [&](CLI::App *cmd, long def_order, const char *def_format) {
      if (cmd->count("--order") == 0) c.order = def_order;
      if (c.format.empty()) c.format = def_format;
    };
    if (solve->parsed()) {
      finish(solve, 3, "json");
      run_solve(c);
    } else if (table1->parsed()) {
      finish(table1, 20, "csv");
      run_table1(c);
    } else if (table2->parsed()) {
      finish(table2, 44, "csv");
      run_table2(c);
    } else if (curve->parsed()) {
      finish(curve, 30, "csv");
      run_error_curve(c);
    } else if (fourier->parsed()) {
      finish(fourier, 20, "csv");
      run_fourier_compare(c);
    } else if (energy->parsed()) {
      finish(energy, 3, "csv");
      run_energy_scan(c);
    } else if (kfit->parsed()) {
      finish(kfit, 50, "csv");
      run_kappa_fit(c);
    }
    return 0;
  } catch (const UsageFault &u) {
    std::cerr << "usage error: " << u.msg << "\n";
    return 2;
  } catch (const Error &e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception &e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}

} // namespace lplde
