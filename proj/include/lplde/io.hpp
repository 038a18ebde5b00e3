#ifndef LPLDE_IO_HPP
#define LPLDE_IO_HPP

#include <string>
#include <variant>
#include <vector>

#include "json.hpp"

#include "lplde/expansion.hpp"
#include "lplde/ode.hpp"

namespace lplde {

// JSON documents use nlohmann's order-preserving variant so that emitted
// artifacts are bit-identical across runs for a fixed input.
using Json = nlohmann::ordered_json;

using AnyTrigSeries = std::variant<TrigSeries<Rational>, TrigSeries<BigFloat>>;

// Ring tags: "exact" for the rational field, "bigfloat:<bits>" otherwise.
std::string ring_tag(const Ring &ring);
Ring parse_ring_tag(const std::string &tag);

// Scalars serialize to their tagged strings ("p/q", "<decimal>@<bits>") so
// exact values survive byte-identically and floats round-trip at their
// recorded precision.
Json scalar_to_json(const RingScalar &s);
RingScalar scalar_from_json(const Json &j);

// {"ring": ..., "cos": {"<k>": scalar}, "sin": {...}} with the harmonics as
// decimal keys in ascending order.
Json series_to_json(const TrigSeries<Rational> &s);
Json series_to_json(const TrigSeries<BigFloat> &s);
AnyTrigSeries series_from_json(const Json &j);

Json problem_to_json(const ProblemSpec &spec);
ProblemSpec problem_from_json(const Json &j);

// Expansion results keep the family-specific series name: conservative
// results store the squared-frequency corrections under "omega_sq_series",
// Van der Pol results the frequency corrections under "omega_series" plus
// the deferred fundamental amplitudes under "amplitudes".
Json expansion_to_json(const AnyExpansion &e);
AnyExpansion expansion_from_json(const Json &j);

// CSV: cells joined by ',', rows by '\n', trailing newline included.  Cells
// are plain tokens (decimal strings, fractions, tags) — no quoting layer.
std::string csv_table(const std::vector<std::string> &header,
                      const std::vector<std::vector<std::string>> &rows);

// "t,x,v" rows of an integrator trajectory at full working precision.
std::string trajectory_csv(const Trajectory &traj);

// Writes to the path, or to stdout when the path is empty or "-".
void write_text(const std::string &path, const std::string &content);

} // namespace lplde

#endif
