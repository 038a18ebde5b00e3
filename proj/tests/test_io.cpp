#include <cstdio>
#include <fstream>
#include <sstream>

#include "doctest.h"
#include "lplde/io.hpp"

using namespace lplde;

namespace {

constexpr long kPrec = 128;

TrigSeries<Rational> sample_rational_series() {
  TrigSeries<Rational> s(Ring::exact_rational());
  s.add_cos(1, Rational(3, 128));
  s.add_cos(3, Rational(-51, 131072));
  s.add_sin(2, Rational(7, 5));
  return s;
}

} // namespace

TEST_SUITE_BEGIN("io");

TEST_CASE("ring tags round-trip") {
  CHECK(ring_tag(Ring::exact_rational()) == "exact");
  CHECK(ring_tag(Ring::bigfloat(256)) == "bigfloat:256");
  CHECK(parse_ring_tag("exact") == Ring::exact_rational());
  CHECK(parse_ring_tag("bigfloat:128") == Ring::bigfloat(128));
  CHECK_THROWS_AS(parse_ring_tag("float64"), ConfigError);
  CHECK_THROWS_AS(parse_ring_tag("bigfloat:banana"), ConfigError);
}

TEST_CASE("scalars serialize to tagged strings and back") {
  const RingScalar q{Rational(-51, 131072)};
  CHECK(scalar_to_json(q) == Json("-51/131072"));
  CHECK(scalar_from_json(scalar_to_json(q)) == q);

  const RingScalar f{BigFloat::from_double(1.5, kPrec)};
  const RingScalar back = scalar_from_json(scalar_to_json(f));
  CHECK(back == f);
  CHECK(back.ring() == Ring::bigfloat(kPrec));

  CHECK_THROWS_AS(scalar_from_json(Json(42)), ConfigError);
}

TEST_CASE("rational series round-trips exactly") {
  const TrigSeries<Rational> s = sample_rational_series();
  const Json j = series_to_json(s);
  CHECK(j["ring"] == "exact");
  CHECK(j["cos"]["1"] == "3/128");
  CHECK(j["sin"]["2"] == "7/5");

  const AnyTrigSeries back = series_from_json(j);
  REQUIRE(std::holds_alternative<TrigSeries<Rational>>(back));
  const auto &r = std::get<TrigSeries<Rational>>(back);
  CHECK(r.cos_coef(1) == Rational(3, 128));
  CHECK(r.cos_coef(3) == Rational(-51, 131072));
  CHECK(r.sin_coef(2) == Rational(7, 5));
  CHECK(r.cos_coef(0).is_zero());
}

TEST_CASE("bigfloat series round-trips at recorded precision") {
  TrigSeries<BigFloat> s(Ring::bigfloat(kPrec));
  s.add_cos(0, BigFloat::from_double(0.125, kPrec));
  s.add_sin(5, BigFloat::pi(kPrec));
  const AnyTrigSeries back = series_from_json(series_to_json(s));
  REQUIRE(std::holds_alternative<TrigSeries<BigFloat>>(back));
  const auto &f = std::get<TrigSeries<BigFloat>>(back);
  CHECK(f.ring() == Ring::bigfloat(kPrec));
  CHECK(f.cos_coef(0) == BigFloat::from_double(0.125, kPrec));
  CHECK(f.sin_coef(5) == BigFloat::pi(kPrec));
}

TEST_CASE("malformed series documents are rejected") {
  Json j = series_to_json(sample_rational_series());
  Json missing = j;
  missing.erase("sin");
  CHECK_THROWS_AS(series_from_json(missing), ConfigError);

  Json bad_key = j;
  bad_key["cos"] = Json::object({{"one", "1/2"}});
  CHECK_THROWS_AS(series_from_json(bad_key), ConfigError);

  Json mixed = j;
  mixed["cos"]["1"] = "1.5e0@128"; // float coefficient inside an exact series
  CHECK_THROWS_AS(series_from_json(mixed), RingMismatch);
}

TEST_CASE("problem specs round-trip") {
  ProblemSpec spec;
  spec.family = FamilyKind::Conservative;
  spec.power = 3;
  spec.mu = RingScalar(Rational(2));
  spec.amplitude = RingScalar(Rational(4, 5));
  spec.lambda_sq = RingScalar(Rational(211, 312));
  spec.max_order = 7;
  spec.convention = Convention::NoFundamentalCorrections;

  const ProblemSpec back = problem_from_json(problem_to_json(spec));
  CHECK(back.family == spec.family);
  CHECK(back.power == spec.power);
  CHECK(back.mu == spec.mu);
  CHECK(back.amplitude == spec.amplitude);
  CHECK(back.lambda_sq == spec.lambda_sq);
  CHECK(back.max_order == spec.max_order);
  CHECK(back.convention == spec.convention);

  Json j = problem_to_json(spec);
  j["family"] = "pendulum";
  CHECK_THROWS_AS(problem_from_json(j), ConfigError);
}

TEST_CASE("conservative expansion round-trips exactly") {
  ProblemSpec spec;
  spec.family = FamilyKind::Conservative;
  spec.power = 2;
  spec.mu = RingScalar(Rational(1));
  spec.amplitude = RingScalar(Rational(1));
  spec.lambda_sq = RingScalar(Rational(3, 4));
  spec.max_order = 4;

  const AnyExpansion e = expand(spec);
  const Json j = expansion_to_json(e);
  CHECK(j.contains("omega_sq_series"));
  CHECK(!j.contains("omega_series"));

  const AnyExpansion back = expansion_from_json(j);
  REQUIRE(std::holds_alternative<Expansion<Rational>>(back));
  const auto &orig = std::get<Expansion<Rational>>(e);
  const auto &copy = std::get<Expansion<Rational>>(back);
  REQUIRE(copy.freq_coeffs.size() == orig.freq_coeffs.size());
  for (size_t i = 0; i < orig.freq_coeffs.size(); ++i)
    CHECK(copy.freq_coeffs[i] == orig.freq_coeffs[i]);
  REQUIRE(copy.solutions.size() == orig.solutions.size());
  for (size_t i = 0; i < orig.solutions.size(); ++i) {
    CHECK((copy.solutions[i] - orig.solutions[i]).is_zero());
  }
  CHECK(copy.omega_sq_total() == orig.omega_sq_total());
}

TEST_CASE("self-sustained expansion round-trips with its amplitudes") {
  ProblemSpec spec;
  spec.family = FamilyKind::VanDerPol;
  spec.mu = RingScalar(BigFloat::from_long(1, kPrec));
  spec.amplitude = RingScalar(BigFloat::zero(kPrec));
  spec.lambda_sq = RingScalar(BigFloat::from_double(1.9, kPrec));
  spec.max_order = 6;

  const AnyExpansion e = expand(spec);
  const Json j = expansion_to_json(e);
  CHECK(j.contains("omega_series"));
  CHECK(j.contains("amplitudes"));

  const AnyExpansion back = expansion_from_json(j);
  REQUIRE(std::holds_alternative<Expansion<BigFloat>>(back));
  const auto &orig = std::get<Expansion<BigFloat>>(e);
  const auto &copy = std::get<Expansion<BigFloat>>(back);
  CHECK(copy.omega_total_vdp() == orig.omega_total_vdp());
  REQUIRE(copy.vdp_amplitudes.size() == orig.vdp_amplitudes.size());
  for (size_t i = 0; i < orig.vdp_amplitudes.size(); ++i)
    CHECK(copy.vdp_amplitudes[i] == orig.vdp_amplitudes[i]);
  REQUIRE(copy.solutions.size() == orig.solutions.size());
  for (size_t i = 0; i < orig.solutions.size(); ++i)
    CHECK((copy.solutions[i] - orig.solutions[i]).is_zero());
}

TEST_CASE("expansion documents are deterministic") {
  ProblemSpec spec;
  spec.family = FamilyKind::Conservative;
  spec.mu = RingScalar(Rational(1, 10));
  spec.amplitude = RingScalar(Rational(1));
  spec.lambda_sq = RingScalar(Rational(0));
  spec.max_order = 3;
  const std::string a = expansion_to_json(expand(spec)).dump(2);
  const std::string b = expansion_to_json(expand(spec)).dump(2);
  CHECK(a == b);
}

TEST_CASE("csv tables join plain tokens") {
  const std::string text =
      csv_table({"n", "kappa"}, {{"2", "3/128"}, {"4", "-51/131072"}});
  CHECK(text == "n,kappa\n2,3/128\n4,-51/131072\n");
  CHECK_THROWS_AS(csv_table({"a", "b"}, {{"1"}}), ConfigError);
}

TEST_CASE("trajectory csv uses full-precision decimal strings") {
  Trajectory traj;
  traj.push(OdeState{BigFloat::zero(kPrec), BigFloat::from_long(1, kPrec),
                     BigFloat::zero(kPrec)});
  traj.push(OdeState{BigFloat::from_double(0.5, kPrec),
                     BigFloat::from_double(0.875, kPrec),
                     BigFloat::from_double(-0.25, kPrec)});
  const std::string text = trajectory_csv(traj);
  std::istringstream in(text);
  std::string line;
  REQUIRE(std::getline(in, line));
  CHECK(line == "t,x,v");
  REQUIRE(std::getline(in, line));
  CHECK(line == "0,1e0,0");
  REQUIRE(std::getline(in, line));
  CHECK(line == "5e-1,8.75e-1,-2.5e-1");
}

TEST_CASE("write_text reaches the filesystem") {
  const std::string path = "io_test_artifact.csv";
  write_text(path, "a,b\n1,2\n");
  std::ifstream in(path);
  REQUIRE(in.good());
  std::stringstream buf;
  buf << in.rdbuf();
  CHECK(buf.str() == "a,b\n1,2\n");
  in.close();
  std::remove(path.c_str());
  CHECK_THROWS_AS(write_text("no/such/dir/out.csv", "x"), ConfigError);
}

TEST_SUITE_END();
