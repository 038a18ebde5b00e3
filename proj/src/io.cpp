#include "lplde/io.hpp"

#include <fstream>
#include <iostream>
#include <utility>

namespace lplde {

namespace {

const Json &field(const Json &j, const char *key) {
  auto it = j.find(key);
  if (it == j.end())
    throw ConfigError(std::string("missing field '") + key + "'");
  return *it;
}

std::string string_field(const Json &j, const char *key) {
  const Json &v = field(j, key);
  if (!v.is_string())
    throw ConfigError(std::string("field '") + key + "' must be a string");
  return v.get<std::string>();
}

long long_field(const Json &j, const char *key) {
  const Json &v = field(j, key);
  if (!v.is_number_integer())
    throw ConfigError(std::string("field '") + key + "' must be an integer");
  return v.get<long>();
}

template <class T>
Json terms_to_json(const std::map<long, T> &terms) {
  Json out = Json::object();
  for (const auto &[k, c] : terms)
    out[std::to_string(k)] = RingOps<T>::to_scalar(c).tagged_str();
  return out;
}

template <class T>
Json series_to_json_impl(const TrigSeries<T> &s) {
  Json out;
  out["ring"] = ring_tag(s.ring());
  out["cos"] = terms_to_json(s.cos_terms());
  out["sin"] = terms_to_json(s.sin_terms());
  return out;
}

template <class T>
TrigSeries<T> series_from_json_impl(const Json &j, const Ring &ring) {
  TrigSeries<T> s(ring);
  auto load = [&](const char *key, bool is_cos) {
    const Json &part = field(j, key);
    if (!part.is_object())
      throw ConfigError(std::string("field '") + key + "' must be an object");
    for (auto it = part.begin(); it != part.end(); ++it) {
      long k = 0;
      try {
        k = std::stol(it.key());
      } catch (const std::exception &) {
        throw ConfigError("bad harmonic key '" + it.key() + "'");
      }
      RingScalar c = scalar_from_json(it.value());
      if (c.ring() != ring)
        throw RingMismatch("series coefficient ring differs from the series ring");
      T coef = [&] {
        if constexpr (std::is_same_v<T, Rational>)
          return c.rational();
        else
          return c.bigfloat();
      }();
      if (is_cos)
        s.add_cos(k, coef);
      else
        s.add_sin(k, coef);
    }
  };
  load("cos", true);
  load("sin", false);
  return s;
}

template <class T>
std::vector<std::string> scalars_to_strings(const std::vector<T> &v) {
  std::vector<std::string> out;
  out.reserve(v.size());
  for (const auto &x : v) out.push_back(RingOps<T>::to_scalar(x).tagged_str());
  return out;
}

template <class T>
std::vector<T> scalars_from_json(const Json &j, const char *key, const Ring &ring) {
  const Json &arr = field(j, key);
  if (!arr.is_array())
    throw ConfigError(std::string("field '") + key + "' must be an array");
  std::vector<T> out;
  out.reserve(arr.size());
  for (const auto &item : arr) {
    RingScalar c = scalar_from_json(item);
    if (c.ring() != ring)
      throw RingMismatch("coefficient ring differs from the problem ring");
    if constexpr (std::is_same_v<T, Rational>)
      out.push_back(c.rational());
    else
      out.push_back(c.bigfloat());
  }
  return out;
}

template <class T>
Json expansion_to_json_impl(const Expansion<T> &e) {
  ProblemSpec spec;
  spec.family = e.problem.family;
  spec.power = e.problem.power;
  spec.mu = RingOps<T>::to_scalar(e.problem.mu);
  spec.amplitude = RingOps<T>::to_scalar(e.problem.amplitude);
  spec.lambda_sq = RingOps<T>::to_scalar(e.problem.lambda_sq);
  spec.max_order = e.problem.max_order;
  spec.convention = e.problem.convention;

  Json out;
  out["problem"] = problem_to_json(spec);
  out[e.is_vdp() ? "omega_series" : "omega_sq_series"] =
      scalars_to_strings(e.freq_coeffs);
  if (e.is_vdp()) out["amplitudes"] = scalars_to_strings(e.vdp_amplitudes);
  Json sols = Json::array();
  for (const auto &s : e.solutions) sols.push_back(series_to_json(s));
  out["solutions"] = std::move(sols);
  return out;
}

template <class T>
Expansion<T> expansion_from_json_impl(const Json &j, const ProblemSpec &spec) {
  Expansion<T> e;
  e.problem = to_problem<T>(spec);
  const Ring ring = e.problem.ring();
  const char *freq_key =
      spec.family == FamilyKind::VanDerPol ? "omega_series" : "omega_sq_series";
  e.freq_coeffs = scalars_from_json<T>(j, freq_key, ring);
  if (spec.family == FamilyKind::VanDerPol)
    e.vdp_amplitudes = scalars_from_json<T>(j, "amplitudes", ring);
  const Json &sols = field(j, "solutions");
  if (!sols.is_array())
    throw ConfigError("field 'solutions' must be an array");
  for (const auto &item : sols) {
    AnyTrigSeries s = series_from_json(item);
    if (!std::holds_alternative<TrigSeries<T>>(s))
      throw RingMismatch("solution series ring differs from the problem ring");
    e.solutions.push_back(std::get<TrigSeries<T>>(std::move(s)));
  }
  return e;
}

} // namespace

std::string ring_tag(const Ring &ring) {
  if (ring.is_exact()) return "exact";
  return "bigfloat:" + std::to_string(ring.precision_bits());
}

Ring parse_ring_tag(const std::string &tag) {
  if (tag == "exact") return Ring::exact_rational();
  const std::string prefix = "bigfloat:";
  if (tag.rfind(prefix, 0) == 0) {
    long bits = 0;
    try {
      bits = std::stol(tag.substr(prefix.size()));
    } catch (const std::exception &) {
      throw ConfigError("bad ring tag '" + tag + "'");
    }
    return Ring::bigfloat(bits);
  }
  throw ConfigError("bad ring tag '" + tag + "'");
}

Json scalar_to_json(const RingScalar &s) { return Json(s.tagged_str()); }

RingScalar scalar_from_json(const Json &j) {
  if (!j.is_string()) throw ConfigError("scalar must be a tagged string");
  return RingScalar::parse(j.get<std::string>());
}

Json series_to_json(const TrigSeries<Rational> &s) { return series_to_json_impl(s); }
Json series_to_json(const TrigSeries<BigFloat> &s) { return series_to_json_impl(s); }

AnyTrigSeries series_from_json(const Json &j) {
  const Ring ring = parse_ring_tag(string_field(j, "ring"));
  if (ring.is_exact()) return series_from_json_impl<Rational>(j, ring);
  return series_from_json_impl<BigFloat>(j, ring);
}

Json problem_to_json(const ProblemSpec &spec) {
  Json out;
  out["family"] =
      spec.family == FamilyKind::VanDerPol ? "van-der-pol" : "conservative";
  out["power"] = spec.power;
  out["mu"] = scalar_to_json(spec.mu);
  out["amplitude"] = scalar_to_json(spec.amplitude);
  out["lambda_sq"] = scalar_to_json(spec.lambda_sq);
  out["max_order"] = spec.max_order;
  out["convention"] = spec.convention == Convention::AmplitudeAtZero
                          ? "amplitude-at-zero"
                          : "no-fundamental-corrections";
  return out;
}

ProblemSpec problem_from_json(const Json &j) {
  ProblemSpec spec;
  const std::string family = string_field(j, "family");
  if (family == "van-der-pol")
    spec.family = FamilyKind::VanDerPol;
  else if (family == "conservative")
    spec.family = FamilyKind::Conservative;
  else
    throw ConfigError("unknown family '" + family + "'");
  spec.power = long_field(j, "power");
  spec.mu = scalar_from_json(field(j, "mu"));
  spec.amplitude = scalar_from_json(field(j, "amplitude"));
  spec.lambda_sq = scalar_from_json(field(j, "lambda_sq"));
  spec.max_order = long_field(j, "max_order");
  const std::string conv = string_field(j, "convention");
  if (conv == "amplitude-at-zero")
    spec.convention = Convention::AmplitudeAtZero;
  else if (conv == "no-fundamental-corrections")
    spec.convention = Convention::NoFundamentalCorrections;
  else
    throw ConfigError("unknown convention '" + conv + "'");
  return spec;
}

Json expansion_to_json(const AnyExpansion &e) {
  return std::visit([](const auto &ee) { return expansion_to_json_impl(ee); }, e);
}

AnyExpansion expansion_from_json(const Json &j) {
  const ProblemSpec spec = problem_from_json(field(j, "problem"));
  if (spec.mu.ring().is_exact()) {
    if (spec.family == FamilyKind::VanDerPol)
      throw RingMismatch("the Van der Pol expansion requires a bigfloat ring");
    return expansion_from_json_impl<Rational>(j, spec);
  }
  return expansion_from_json_impl<BigFloat>(j, spec);
}

std::string csv_table(const std::vector<std::string> &header,
                      const std::vector<std::vector<std::string>> &rows) {
  std::string out;
  auto append_row = [&](const std::vector<std::string> &cells) {
    if (cells.size() != header.size())
      throw ConfigError("csv row width differs from the header");
    for (size_t i = 0; i < cells.size(); ++i) {
      if (i) out += ',';
      out += cells[i];
    }
    out += '\n';
  };
  for (size_t i = 0; i < header.size(); ++i) {
    if (i) out += ',';
    out += header[i];
  }
  out += '\n';
  for (const auto &row : rows) append_row(row);
  return out;
}

std::string trajectory_csv(const Trajectory &traj) {
  std::vector<std::vector<std::string>> rows;
  rows.reserve(traj.size());
  for (size_t i = 0; i < traj.size(); ++i)
    rows.push_back({traj.t[i].str(), traj.x[i].str(), traj.v[i].str()});
  return csv_table({"t", "x", "v"}, rows);
}

void write_text(const std::string &path, const std::string &content) {
  if (path.empty() || path == "-") {
    std::cout << content;
    std::cout.flush();
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ConfigError("cannot open output file '" + path + "'");
  out << content;
  if (!out) throw ConfigError("failed writing output file '" + path + "'");
}

} // namespace lplde
