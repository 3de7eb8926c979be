#include "locc/io.hpp"

#include <fstream>
#include <sstream>

namespace locc {

StateFile parse_state_file(const json& doc) {
  if (!doc.is_object()) throw InvalidInput("state descriptor must be a JSON object");
  const bool has_sq = doc.contains("schmidt_sq");
  const bool has_amp = doc.contains("amplitudes");
  if (has_sq == has_amp) {
    throw InvalidInput("state descriptor needs exactly one of \"schmidt_sq\" or \"amplitudes\"");
  }
  StateFile file;
  if (doc.contains("label")) {
    if (!doc["label"].is_string()) throw InvalidInput("\"label\" must be a string");
    file.label = doc["label"].get<std::string>();
  }
  if (has_sq) {
    const json& sq = doc["schmidt_sq"];
    if (!sq.is_array() || sq.empty()) throw InvalidInput("\"schmidt_sq\" must be a non-empty array");
    std::vector<Rational> exact;
    std::vector<double> floating;
    for (const json& entry : sq) {
      if (entry.is_string()) {
        exact.push_back(parse_rational(entry.get<std::string>()));
        floating.push_back(exact.back().get_d());
      } else if (entry.is_number()) {
        floating.push_back(entry.get<double>());
        exact.push_back(rational_from_shortest_decimal(floating.back()));
      } else {
        throw InvalidInput("\"schmidt_sq\" entries must be numbers or rational strings");
      }
    }
    file.exact = std::move(exact);
    file.floating = std::move(floating);
    return file;
  }
  const json& rows = doc["amplitudes"];
  if (!rows.is_array() || rows.empty() || !rows[0].is_array() || rows[0].empty()) {
    throw InvalidInput("\"amplitudes\" must be a non-empty matrix of [re, im] pairs");
  }
  const auto n_a = static_cast<Eigen::Index>(rows.size());
  const auto n_b = static_cast<Eigen::Index>(rows[0].size());
  Eigen::MatrixXcd amps(n_a, n_b);
  for (Eigen::Index i = 0; i < n_a; ++i) {
    const json& row = rows[static_cast<std::size_t>(i)];
    if (!row.is_array() || static_cast<Eigen::Index>(row.size()) != n_b) {
      throw InvalidInput("\"amplitudes\" rows must all have the same length");
    }
    for (Eigen::Index j = 0; j < n_b; ++j) {
      const json& z = row[static_cast<std::size_t>(j)];
      if (z.is_number()) {
        amps(i, j) = z.get<double>();
      } else if (z.is_array() && z.size() == 2 && z[0].is_number() && z[1].is_number()) {
        amps(i, j) = {z[0].get<double>(), z[1].get<double>()};
      } else {
        throw InvalidInput("amplitude entries must be [re, im] pairs");
      }
    }
  }
  file.amplitudes = std::move(amps);
  return file;
}

StateFile load_state_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InvalidInput("cannot open state file '" + path + "'");
  json doc;
  try {
    in >> doc;
  } catch (const json::exception& e) {
    throw InvalidInput("'" + path + "' is not valid JSON: " + e.what());
  }
  StateFile file = parse_state_file(doc);
  if (file.label.empty()) file.label = path;
  return file;
}

template <>
SchmidtVector<Rational> schmidt_of<Rational>(const StateFile& file, const NumericOptions& opts) {
  if (!file.exact) throw InvalidInput("amplitude descriptors are only supported in float mode");
  return SchmidtVector<Rational>(*file.exact, opts);
}

template <>
SchmidtVector<double> schmidt_of<double>(const StateFile& file, const NumericOptions& opts) {
  if (file.floating) return SchmidtVector<double>(*file.floating, opts);
  return schmidt_decompose(BipartiteState(*file.amplitudes, opts.tolerance), opts);
}

BipartiteState bipartite_of(const StateFile& file, const NumericOptions& opts) {
  if (file.amplitudes) return BipartiteState(*file.amplitudes, opts.tolerance);
  return state_from_schmidt(schmidt_of<double>(file, opts));
}

json scalar_json(double x) { return round_significant(x, 12); }
json scalar_json(const Rational& x) { return to_string(x); }

template <>
double scalar_from_json<double>(const json& j) {
  if (j.is_number()) return j.get<double>();
  if (j.is_string()) return parse_rational(j.get<std::string>()).get_d();
  throw InvalidInput("expected a number");
}

template <>
Rational scalar_from_json<Rational>(const json& j) {
  if (j.is_string()) return parse_rational(j.get<std::string>());
  if (j.is_number()) return rational_from_shortest_decimal(j.get<double>());
  throw InvalidInput("expected a rational string or number");
}

template <class T>
json to_json(const ConversionPlan<T>& plan) {
  json out;
  out["mode"] = std::is_same_v<T, Rational> ? "rational" : "float";
  out["source"] = vector_json(plan.source.probs());
  out["target"] = vector_json(plan.target.probs());
  out["probability"] = scalar_json(plan.probability);
  out["feasible"] = plan.feasible();
  if (plan.feasible()) {
    out["breakpoints"] = {{"boundaries", plan.breakpoints->boundaries},
                          {"ratios", vector_json(plan.breakpoints->ratios)}};
    out["intermediate"] = vector_json(plan.intermediate->probs());
    out["success_sq"] = vector_json(plan.filter->success_sq);
    out["failure_sq"] = vector_json(plan.filter->failure_sq);
  }
  return out;
}

namespace {

template <class T>
std::vector<T> read_vector(const json& doc, const char* key) {
  if (!doc.contains(key) || !doc[key].is_array()) {
    throw InvalidInput(std::string("plan is missing array \"") + key + "\"");
  }
  std::vector<T> out;
  for (const json& x : doc[key]) out.push_back(scalar_from_json<T>(x));
  return out;
}

template <class T>
void expect_same(const std::vector<T>& stored, const std::vector<T>& rebuilt, const char* field, double eps) {
  bool same = stored.size() == rebuilt.size();
  for (std::size_t i = 0; same && i < stored.size(); ++i) {
    // Float plans are serialized with 12 significant digits.
    same = approx_equal(stored[i], rebuilt[i], std::max(eps, 1e-11));
  }
  if (!same) throw InvalidInput(std::string("plan field \"") + field + "\" does not match its source and target");
}

}  // namespace

template <class T>
ConversionPlan<T> plan_from_json(const json& doc, const NumericOptions& opts) {
  if (!doc.is_object()) throw InvalidInput("plan must be a JSON object");
  NumericOptions loose = opts;
  if constexpr (std::is_same_v<T, double>) loose.tolerance = std::max(opts.tolerance, 1e-10);
  SchmidtVector<T> source(read_vector<T>(doc, "source"), loose);
  SchmidtVector<T> target(read_vector<T>(doc, "target"), loose);
  ConversionPlan<T> plan = build_plan(source, target, opts);
  if (!doc.contains("probability")) throw InvalidInput("plan is missing \"probability\"");
  expect_same(std::vector<T>{scalar_from_json<T>(doc["probability"])}, std::vector<T>{plan.probability},
              "probability", opts.tolerance);
  if (plan.feasible()) {
    if (!doc.contains("breakpoints")) throw InvalidInput("plan is missing \"breakpoints\"");
    const json& bp = doc["breakpoints"];
    if (!bp.contains("boundaries") ||
        bp["boundaries"].get<std::vector<std::size_t>>() != plan.breakpoints->boundaries) {
      throw InvalidInput("plan field \"breakpoints.boundaries\" does not match its source and target");
    }
    expect_same(read_vector<T>(bp, "ratios"), plan.breakpoints->ratios, "breakpoints.ratios", opts.tolerance);
    expect_same(read_vector<T>(doc, "intermediate"), plan.intermediate->probs(), "intermediate", opts.tolerance);
    expect_same(read_vector<T>(doc, "success_sq"), plan.filter->success_sq, "success_sq", opts.tolerance);
    expect_same(read_vector<T>(doc, "failure_sq"), plan.filter->failure_sq, "failure_sq", opts.tolerance);
  }
  return plan;
}

template json to_json(const ConversionPlan<double>&);
template json to_json(const ConversionPlan<Rational>&);
template ConversionPlan<double> plan_from_json(const json&, const NumericOptions&);
template ConversionPlan<Rational> plan_from_json(const json&, const NumericOptions&);

json to_json(const SimulationReport& report) {
  json out;
  out["trials"] = report.trials;
  out["successes"] = report.successes;
  out["empirical"] = scalar_json(report.empirical);
  out["std_error"] = scalar_json(report.std_error);
  out["predicted"] = report.predicted ? scalar_json(*report.predicted) : json(nullptr);
  out["seed"] = report.seed;
  json audit = json::array();
  for (const auto& a : report.audit) audit.push_back({{"step", a.step}, {"k", a.k}, {"avg_E", scalar_json(a.avg_E)}});
  out["audit"] = std::move(audit);
  return out;
}

}  // namespace locc
