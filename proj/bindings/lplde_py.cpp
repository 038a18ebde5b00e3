// Python bindings for the lplde library.
//
// The binding surface is deliberately small and numeric: exact results cross
// the boundary as "p/q" strings (convert with fractions.Fraction), working
// precision stays a C++ concern, and floating-point results come back as
// doubles.  Anything heavier (full series objects, JSON round-trips) is the
// job of the C++ CLI.

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "lplde/expansion.hpp"
#include "lplde/oracle.hpp"
#include "lplde/pms.hpp"

namespace py = pybind11;
using namespace lplde;

namespace {

constexpr long kPyPrecisionBits = 256;

BigFloat bf(double x, long prec) { return BigFloat::from_double(x, prec); }

long family_power(const std::string &family) {
  if (family == "duffing") return 2;
  if (family == "sextic") return 3;
  if (family == "octic") return 4;
  throw ConfigError("unknown conservative family: " + family +
                    " (expected duffing, sextic or octic)");
}

Problem<BigFloat> make_conservative(const std::string &family, double mu, double amplitude,
                                    std::optional<double> lambda_sq, long order, long prec) {
  const long power = family_power(family);
  BigFloat lam2 = BigFloat::zero(prec);
  if (lambda_sq) {
    lam2 = bf(*lambda_sq, prec);
  } else {
    const RingScalar l2 = third_order_lambda_sq(FamilyKind::Conservative, power,
                                                RingScalar(bf(mu, prec)),
                                                RingScalar(bf(amplitude, prec)));
    lam2 = l2.to_bigfloat(prec);
  }
  return conservative_problem<BigFloat>(power, bf(mu, prec), bf(amplitude, prec), lam2, order);
}

Problem<BigFloat> make_vdp(double mu, std::optional<double> lambda_sq, long order, long prec) {
  BigFloat lam2 = BigFloat::zero(prec);
  if (lambda_sq) {
    lam2 = bf(*lambda_sq, prec);
  } else {
    const BigFloat fit = vdp_lambda_fit(bf(mu, prec));
    lam2 = fit * fit;
  }
  return vdp_problem(bf(mu, prec), lam2, order);
}

std::map<long, std::string> py_kappa_table(long max_order) {
  std::map<long, std::string> out;
  for (const auto &[n, k] : kappa_table(max_order)) out[n] = k.str();
  return out;
}

std::string py_third_order_lambda_sq(const std::string &family, const std::string &mu,
                                     const std::string &amplitude) {
  const long power = family_power(family);
  const RingScalar l2 = third_order_lambda_sq(FamilyKind::Conservative, power,
                                              RingScalar(Rational(mu)), RingScalar(Rational(amplitude)));
  return l2.rational().str();
}

double py_conservative_omega_sq(const std::string &family, double mu, double amplitude,
                                long order, std::optional<double> lambda_sq, long prec) {
  const auto p = make_conservative(family, mu, amplitude, lambda_sq, order, prec);
  return expand_conservative(p).omega_sq_total().to_double();
}

double py_conservative_period(const std::string &family, double mu, double amplitude,
                              long order, std::optional<double> lambda_sq, long prec) {
  const auto p = make_conservative(family, mu, amplitude, lambda_sq, order, prec);
  const BigFloat om2 = expand_conservative(p).omega_sq_total();
  if (om2.sign() <= 0) throw NonOscillatory("assembled squared frequency is not positive");
  return (2 * BigFloat::pi(prec) / om2.sqrt()).to_double();
}

std::vector<double> py_conservative_fourier(const std::string &family, double mu,
                                            double amplitude, long order,
                                            std::optional<double> lambda_sq, long prec) {
  const auto p = make_conservative(family, mu, amplitude, lambda_sq, order, prec);
  const auto e = expand_conservative(p);
  std::vector<double> out;
  for (const BigFloat &c : fourier_coefficients(e)) out.push_back(c.to_double());
  return out;
}

double py_vdp_period(double mu, long order, std::optional<double> lambda_sq, long prec) {
  const auto e = expand_vdp(make_vdp(mu, lambda_sq, order, prec));
  const BigFloat om = e.omega_total_vdp();
  if (om.sign() <= 0) throw NonOscillatory("assembled frequency is not positive");
  return (2 * BigFloat::pi(prec) / om).to_double();
}

double py_exact_conservative_period(const std::string &family, double mu, double amplitude,
                                    long prec) {
  const long power = family_power(family);
  return exact_period_conservative(power, bf(mu, prec), bf(amplitude, prec)).period.to_double();
}

double py_exact_vdp_period(double mu, double tol) {
  return vdp_limit_cycle(BigFloat::from_double(mu, 128), BigFloat::from_double(tol, 128)).period.to_double();
}

double py_pms_lambda_sq(const std::string &family, double mu, double amplitude, long order,
                        double tol, long prec) {
  ProblemSpec spec;
  if (family == "vdp") {
    spec.family = FamilyKind::VanDerPol;
    spec.power = 2;
  } else {
    spec.family = FamilyKind::Conservative;
    spec.power = family_power(family);
  }
  spec.mu = RingScalar(bf(mu, prec));
  spec.amplitude = RingScalar(bf(amplitude, prec));
  spec.lambda_sq = RingScalar(BigFloat::zero(prec));
  const PMSResult r = pms_optimize(spec, static_cast<int>(order), BigFloat::from_double(tol, prec));
  return r.lambda_sq_opt.to_bigfloat(prec).to_double();
}

} // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "High-order frequency and Fourier approximations of periodic orbits "
            "of anharmonic and self-sustained oscillators.";

  py::register_exception<Error>(m, "Error");

  m.def("kappa_table", &py_kappa_table, py::arg("max_order"),
        "Structural coefficients kappa_n of the quartic frequency series for even n up to "
        "max_order, as exact 'p/q' strings keyed by n.");

  m.def("third_order_lambda_sq", &py_third_order_lambda_sq, py::arg("family"), py::arg("mu"),
        py::arg("amplitude"),
        "Closed-form third-order optimum of the auxiliary parameter lambda^2 for a "
        "conservative family ('duffing', 'sextic', 'octic'); exact rational in, "
        "'p/q' string out.");

  m.def("conservative_omega_sq", &py_conservative_omega_sq, py::arg("family"), py::arg("mu"),
        py::arg("amplitude"), py::arg("order"), py::arg("lambda_sq") = std::nullopt,
        py::arg("precision_bits") = kPyPrecisionBits,
        "Assembled squared frequency of a conservative oscillator at the given truncation "
        "order.  lambda_sq defaults to the closed-form third-order optimum.");

  m.def("conservative_period", &py_conservative_period, py::arg("family"), py::arg("mu"),
        py::arg("amplitude"), py::arg("order"), py::arg("lambda_sq") = std::nullopt,
        py::arg("precision_bits") = kPyPrecisionBits,
        "Approximate period 2*pi/Omega of a conservative oscillator.");

  m.def("conservative_fourier", &py_conservative_fourier, py::arg("family"), py::arg("mu"),
        py::arg("amplitude"), py::arg("order"), py::arg("lambda_sq") = std::nullopt,
        py::arg("precision_bits") = kPyPrecisionBits,
        "Assembled cosine Fourier coefficients c_n of the approximate solution, n = 0, 1, ...");

  m.def("vdp_period", &py_vdp_period, py::arg("mu"), py::arg("order"),
        py::arg("lambda_sq") = std::nullopt, py::arg("precision_bits") = kPyPrecisionBits,
        "Approximate limit-cycle period of the self-sustained oscillator.  lambda_sq "
        "defaults to the square of the empirical linear fit of the optimal parameter.");

  m.def("exact_conservative_period", &py_exact_conservative_period, py::arg("family"),
        py::arg("mu"), py::arg("amplitude"), py::arg("precision_bits") = kPyPrecisionBits,
        "Numerically exact period from the quadrature oracle.");

  m.def("exact_vdp_period", &py_exact_vdp_period, py::arg("mu"), py::arg("tol") = 1e-10,
        "Numerically exact limit-cycle period from the integration oracle.");

  m.def("pms_lambda_sq", &py_pms_lambda_sq, py::arg("family"), py::arg("mu"),
        py::arg("amplitude"), py::arg("order"), py::arg("tol") = 1e-8,
        py::arg("precision_bits") = kPyPrecisionBits,
        "Numerically optimal lambda^2 (stationary point of the assembled frequency) at the "
        "given truncation order.  family is 'duffing', 'sextic', 'octic' or 'vdp'.");
}
