#pragma once

// JSON formats: state descriptors, conversion plans, simulation reports.
//
//   state:  {"schmidt_sq": ["108/144", 0.25, ...], "label": "psi1"}
//        or {"amplitudes": [[[re, im], ...], ...]}        (row = index on A)
//
// Rationals are written as strings ("p/q") so they survive any JSON reader.

#include <json.hpp>

#include <optional>
#include <string>
#include <vector>

#include "locc/conversion.hpp"
#include "locc/simulator.hpp"

namespace locc {

using json = nlohmann::ordered_json;

struct StateFile {
  std::string label;
  /// Parsed from "schmidt_sq". Strings are parsed exactly; JSON numbers are
  /// read as their shortest decimal (0.8 -> 4/5) for `exact` and as doubles
  /// for `floating`.
  std::optional<std::vector<Rational>> exact;
  std::optional<std::vector<double>> floating;
  std::optional<Eigen::MatrixXcd> amplitudes;

  bool has_amplitudes() const { return amplitudes.has_value(); }
};

StateFile parse_state_file(const json& doc);
StateFile load_state_file(const std::string& path);

/// Schmidt vector in the requested mode. Amplitude payloads are decomposed
/// numerically and are only available in floating mode.
template <class T>
SchmidtVector<T> schmidt_of(const StateFile& file, const NumericOptions& opts = {});

BipartiteState bipartite_of(const StateFile& file, const NumericOptions& opts = {});

json scalar_json(double x);
json scalar_json(const Rational& x);

template <class T>
T scalar_from_json(const json& j);

template <class T>
json vector_json(const std::vector<T>& v) {
  json out = json::array();
  for (const T& x : v) out.push_back(scalar_json(x));
  return out;
}

template <class T>
json to_json(const ConversionPlan<T>& plan);

/// Accepts the output of to_json. The plan is rebuilt from its source and
/// target and every stored field must agree with the rebuilt one; a mismatch
/// throws InvalidInput naming the field.
template <class T>
ConversionPlan<T> plan_from_json(const json& doc, const NumericOptions& opts = {});

json to_json(const SimulationReport& report);

}  // namespace locc
