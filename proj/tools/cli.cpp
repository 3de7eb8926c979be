#include "locc/cli.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <iomanip>
#include <iostream>
#include <sstream>

#include "locc/io.hpp"
#include "locc/monotones.hpp"
#include "locc/ordering.hpp"
#include "locc/simulator.hpp"

namespace locc::cli {

namespace {

struct GlobalFlags {
  std::string mode = "rational";
  double tolerance = 1e-9;
  bool trim_zeros = false;
  bool json_output = false;
  std::string out_path;

  NumericOptions numeric() const { return {tolerance, trim_zeros}; }
};

struct SimulateFlags {
  std::string source;
  std::string target;
  std::string plan;
  std::uint64_t trials = 100000;
  std::uint64_t seed = 0;
  unsigned threads = 1;
  bool exhaustive = false;
  std::size_t branch_cap = 100000;
  bool no_fallback = false;
};

std::string format_scalar(const Rational& x) { return to_string(x); }
std::string format_scalar(double x) { return to_string(x); }
std::string format_scalar(const std::string& x) { return x; }

template <class T>
std::string format_list(const std::vector<T>& v) {
  std::string s;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i) s += ", ";
    s += format_scalar(v[i]);
  }
  return s;
}

/// "6/13 ≈ 0.461538461538 (exact)" in rational mode, the decimal otherwise.
template <class T>
std::string describe_probability(const T& p) {
  if constexpr (std::is_same_v<T, Rational>) {
    if (p.get_den() == 1) return to_string(p) + " (exact)";
    return to_string(p) + " ≈ " + to_string(p.get_d()) + " (exact)";
  } else {
    return to_string(p);
  }
}

bool any_amplitudes(const std::vector<StateFile>& files) {
  for (const auto& f : files) {
    if (f.has_amplitudes()) return true;
  }
  return false;
}

/// Amplitude descriptors can only be handled numerically.
bool use_rational(const GlobalFlags& g, const std::vector<StateFile>& files, std::ostream& err) {
  if (g.mode != "rational") return false;
  if (any_amplitudes(files)) {
    err << "note: amplitude input is decomposed numerically; using float mode\n";
    return false;
  }
  return true;
}

template <class T>
int cmd_prob(const GlobalFlags& g, const StateFile& src, const StateFile& tgt, std::ostream& out) {
  const NumericOptions opts = g.numeric();
  const SchmidtVector<T> alpha = schmidt_of<T>(src, opts);
  const SchmidtVector<T> beta = schmidt_of<T>(tgt, opts);
  const TailRatioMinimum<T> best = minimize_tail_ratio(alpha, beta, opts);
  const auto src_profile = monotone_profile(alpha);
  const auto tgt_profile = monotone_profile(beta);
  const std::size_t src_rank = alpha.rank(opts.tolerance);
  const std::size_t tgt_rank = beta.rank(opts.tolerance);
  if (g.json_output) {
    json doc{{"mode", std::is_same_v<T, Rational> ? "rational" : "float"},
             {"probability", scalar_json(best.value)},
             {"decimal", round_significant(to_double(best.value))},
             {"minimizer", best.minimizer == 0 ? json(nullptr) : json(best.minimizer)},
             {"source_rank", src_rank},
             {"target_rank", tgt_rank},
             {"source_profile", vector_json(src_profile)},
             {"target_profile", vector_json(tgt_profile)}};
    out << doc.dump(2) << "\n";
    return kOk;
  }
  out << "P(" << src.label << " -> " << tgt.label << ") = ";
  if (best.minimizer == 0) {
    out << "0, target has more nonzero Schmidt coefficients (" << tgt_rank << " > " << src_rank << ")\n";
  } else {
    out << describe_probability(best.value) << ", minimizer l=" << best.minimizer << "\n";
  }
  out << "E_k(" << src.label << ") = (" << format_list(src_profile) << ")\n";
  out << "E_k(" << tgt.label << ") = (" << format_list(tgt_profile) << ")\n";
  return kOk;
}

template <class T>
int cmd_plan(const GlobalFlags& g, const StateFile& src, const StateFile& tgt, std::ostream& out) {
  const NumericOptions opts = g.numeric();
  const ConversionPlan<T> plan = build_plan(schmidt_of<T>(src, opts), schmidt_of<T>(tgt, opts), opts);
  out << to_json(plan).dump(2) << "\n";
  return kOk;
}

template <class T>
int run_simulation(const GlobalFlags& g, const SimulateFlags& f, const ConversionPlan<T>& plan, std::ostream& out,
                   std::ostream& err) {
  if (!plan.feasible()) {
    err << "error: conversion has success probability 0 (target has more nonzero Schmidt coefficients "
           "than source); nothing to simulate\n";
    return kInfeasible;
  }
  const NumericOptions opts = g.numeric();
  const LoccProtocol protocol = build_full_protocol(plan, opts);
  if (f.exhaustive) {
    ExhaustiveOptions eo;
    eo.branch_cap = f.branch_cap;
    try {
      json doc;
      doc["mode"] = "exhaustive";
      doc["predicted"] = scalar_json(plan.probability);
      json audit = json::array();
      bool audit_ok = true;
      if constexpr (std::is_same_v<T, Rational>) {
        const ExactExhaustiveRun run = exhaustive_run_exact(protocol, plan.source, eo);
        doc["arithmetic"] = "rational";
        doc["branches"] = run.branches.size();
        doc["success_probability"] = scalar_json(run.success_probability);
        doc["matches_prediction"] = run.success_probability == plan.probability;
        for (std::size_t k = 1; k <= plan.source.size(); ++k) {
          const auto a = monotone_audit(run.layers, k, opts.tolerance);
          audit_ok = audit_ok && a.non_increasing;
          for (std::size_t l = 0; l < a.averages.size(); ++l) {
            audit.push_back({{"step", l}, {"k", k}, {"avg_E", scalar_json(a.averages[l])}});
          }
        }
      } else {
        const ExhaustiveRun run = exhaustive_run(protocol, state_from_schmidt(plan.source), eo);
        doc["arithmetic"] = "float";
        doc["branches"] = run.branches.size();
        doc["success_probability"] = scalar_json(run.success_probability);
        doc["matches_prediction"] = approx_equal(run.success_probability, plan.probability, opts.tolerance);
        for (std::size_t k = 1; k <= plan.source.size(); ++k) {
          const auto a = monotone_audit(run.layers, k, opts.tolerance);
          audit_ok = audit_ok && a.non_increasing;
          for (std::size_t l = 0; l < a.averages.size(); ++l) {
            audit.push_back({{"step", l}, {"k", k}, {"avg_E", scalar_json(a.averages[l])}});
          }
        }
      }
      doc["audit_non_increasing"] = audit_ok;
      doc["audit"] = std::move(audit);
      out << doc.dump(2) << "\n";
      return kOk;
    } catch (const BranchCapExceeded& e) {
      if (f.no_fallback) {
        err << "error: " << e.what() << "; rerun without --exhaustive or raise --branch-cap\n";
        return kInfeasible;
      }
      err << "warning: " << e.what() << "; falling back to Monte-Carlo\n";
    }
  }
  MonteCarloOptions mo;
  mo.trials = f.trials;
  mo.seed = f.seed;
  mo.threads = f.threads;
  const SimulationReport report = monte_carlo_run(protocol, state_from_schmidt(plan.source), mo);
  json doc = to_json(report);
  doc["mode"] = "monte_carlo";
  doc["predicted"] = scalar_json(plan.probability);
  doc["within_3_sigma"] =
      std::abs(report.empirical - to_double(plan.probability)) <= 3.0 * report.std_error + opts.tolerance;
  out << doc.dump(2) << "\n";
  return kOk;
}

template <class T>
int cmd_simulate(const GlobalFlags& g, const SimulateFlags& f, const std::vector<StateFile>& files,
                 const json* plan_doc, std::ostream& out, std::ostream& err) {
  const NumericOptions opts = g.numeric();
  if (plan_doc != nullptr) return run_simulation(g, f, plan_from_json<T>(*plan_doc, opts), out, err);
  const ConversionPlan<T> plan = build_plan(schmidt_of<T>(files[0], opts), schmidt_of<T>(files[1], opts), opts);
  return run_simulation(g, f, plan, out, err);
}

template <class T>
int cmd_monotones(const GlobalFlags& g, const std::vector<StateFile>& files, std::ostream& out) {
  const NumericOptions opts = g.numeric();
  json doc = json::array();
  for (const auto& file : files) {
    const SchmidtVector<T> sv = schmidt_of<T>(file, opts);
    const auto profile = monotone_profile(sv);
    const double entropy = entropy_of_entanglement(sv);
    if (g.json_output) {
      doc.push_back({{"label", file.label},
                     {"schmidt_sq", vector_json(sv.probs())},
                     {"E", vector_json(profile)},
                     {"entropy_ebits", round_significant(entropy)}});
    } else {
      out << file.label << "\n";
      out << "  schmidt_sq = (" << format_list(sv.probs()) << ")\n";
      for (std::size_t k = 0; k < profile.size(); ++k) {
        out << "  E_" << (k + 1) << " = " << format_scalar(profile[k]) << "\n";
      }
      out << "  entropy = " << to_string(entropy) << " ebits\n";
    }
  }
  if (g.json_output) out << doc.dump(2) << "\n";
  return kOk;
}

template <class T>
int cmd_compare(const GlobalFlags& g, const StateFile& a, const StateFile& b, std::ostream& out) {
  const NumericOptions opts = g.numeric();
  const auto result = compare(schmidt_of<T>(a, opts), schmidt_of<T>(b, opts), opts);
  if (g.json_output) {
    out << json{{"p_forward", scalar_json(result.p_forward)},
                {"p_backward", scalar_json(result.p_backward)},
                {"verdict", to_string(result.verdict)}}
               .dump(2)
        << "\n";
    return kOk;
  }
  out << "P(" << a.label << " -> " << b.label << ") = " << describe_probability(result.p_forward) << "\n";
  out << "P(" << b.label << " -> " << a.label << ") = " << describe_probability(result.p_backward) << "\n";
  out << "verdict: " << to_string(result.verdict) << "\n";
  return kOk;
}

template <class T>
int cmd_tensor(const GlobalFlags& g, const StateFile& src, const StateFile* tgt, std::size_t copies,
               std::ostream& out) {
  const NumericOptions opts = g.numeric();
  const SchmidtVector<T> alpha = schmidt_of<T>(src, opts);
  const SchmidtVector<T> power = tensor_power(alpha, copies);
  json doc{{"copies", copies}, {"schmidt_sq", vector_json(power.probs())}};
  if (tgt != nullptr) {
    const SchmidtVector<T> beta = schmidt_of<T>(*tgt, opts);
    const T single = optimal_probability(alpha, beta, opts);
    T single_pow = 1;
    for (std::size_t c = 0; c < copies; ++c) single_pow *= single;
    const T multi = tensor_conversion_probability(alpha, beta, copies, opts);
    doc["single_copy_probability"] = scalar_json(single);
    doc["single_copy_probability_power"] = scalar_json(single_pow);
    doc["tensor_probability"] = scalar_json(multi);
    doc["strict_excess"] = definitely_less(single_pow, multi, opts.tolerance);
  }
  if (g.json_output) {
    out << doc.dump(2) << "\n";
    return kOk;
  }
  out << src.label << "^(x" << copies << ") = (" << format_list(power.probs()) << ")\n";
  if (tgt != nullptr) {
    out << "P(single copy) = " << describe_probability(scalar_from_json<T>(doc["single_copy_probability"])) << "\n";
    out << "P(single copy)^" << copies << " = "
        << describe_probability(scalar_from_json<T>(doc["single_copy_probability_power"])) << "\n";
    out << "P(" << copies << " copies) = " << describe_probability(scalar_from_json<T>(doc["tensor_probability"]))
        << (doc["strict_excess"].get<bool>() ? "  (strictly larger)" : "") << "\n";
  }
  return kOk;
}

SchmidtVector<Rational> exact(std::initializer_list<const char*> entries) {
  std::vector<Rational> v;
  for (const char* e : entries) v.push_back(parse_rational(e));
  return SchmidtVector<Rational>(std::move(v));
}

int demo_three_state_cycle(const GlobalFlags& g, std::ostream& out) {
  const std::vector<SchmidtVector<Rational>> states{
      exact({"108/144", "12/144", "12/144", "12/144"}),
      exact({"66/144", "66/144", "6/144", "6/144"}),
      exact({"47/144", "47/144", "47/144", "3/144"}),
  };
  const std::vector<std::string> names{"psi1", "psi2", "psi3"};
  json pairs = json::array();
  for (std::size_t i = 0; i < states.size(); ++i) {
    const std::size_t j = (i + 1) % states.size();
    const auto r = compare(states[i], states[j]);
    pairs.push_back({{"from", names[i]},
                     {"to", names[j]},
                     {"p_forward", scalar_json(r.p_forward)},
                     {"p_backward", scalar_json(r.p_backward)},
                     {"verdict", to_string(r.verdict)}});
  }
  const auto cycle = find_cycle(states);
  json cycle_names = json::array();
  if (cycle) {
    for (std::size_t i : *cycle) cycle_names.push_back(names[i]);
  }
  json doc{{"demo", "paper-cycle"}, {"pairs", pairs}, {"cycle", cycle ? cycle_names : json(nullptr)}};
  if (g.json_output) {
    out << doc.dump(2) << "\n";
    return kOk;
  }
  out << "psi1 = (108, 12, 12, 12)/144\npsi2 = (66, 66, 6, 6)/144\npsi3 = (47, 47, 47, 3)/144\n\n";
  out << std::left << std::setw(20) << "pair" << std::setw(12) << "P(a -> b)" << std::setw(12) << "P(b -> a)"
      << "relation\n";
  for (const auto& p : pairs) {
    const std::string a = p["from"];
    const std::string b = p["to"];
    const std::string rel = p["verdict"] == "second_greater"  ? a + " < " + b
                            : p["verdict"] == "first_greater" ? a + " > " + b
                                                              : "incomparable";
    out << std::setw(20) << (a + ", " + b) << std::setw(12) << p["p_forward"].get<std::string>() << std::setw(12)
        << p["p_backward"].get<std::string>() << rel << "\n";
  }
  out << "\n";
  if (cycle) {
    out << "cycle: ";
    for (std::size_t i = 0; i < cycle->size(); ++i) out << (i ? " < " : "") << names[(*cycle)[i]];
    out << "\n";
  } else {
    out << "no cycle\n";
  }
  return kOk;
}

int demo_nonadditivity(const GlobalFlags& g, std::ostream& out) {
  const std::vector<std::pair<SchmidtVector<Rational>, SchmidtVector<Rational>>> pairs{
      {exact({"1/2", "1/4", "1/4"}), exact({"2/5", "2/5", "1/5"})},
      {exact({"4/5", "1/5"}), exact({"1/2", "1/2"})},
  };
  const auto found = nonadditivity_search(pairs);
  json rows = json::array();
  for (std::size_t i = 0; i < pairs.size(); ++i) {
    const Rational single = optimal_probability(pairs[i].first, pairs[i].second);
    const Rational two = tensor_conversion_probability(pairs[i].first, pairs[i].second, 2);
    const bool reported = std::any_of(found.begin(), found.end(), [&](const auto& f) { return f.index == i; });
    rows.push_back({{"source", vector_json(pairs[i].first.probs())},
                    {"target", vector_json(pairs[i].second.probs())},
                    {"single", scalar_json(single)},
                    {"single_squared", scalar_json(Rational(single * single))},
                    {"two_copy", scalar_json(two)},
                    {"strict_excess", reported}});
  }
  json doc{{"demo", "non-additivity"}, {"pairs", rows}};
  if (g.json_output) {
    out << doc.dump(2) << "\n";
    return kOk;
  }
  for (const auto& r : rows) {
    out << "(" << format_list(r["source"].get<std::vector<std::string>>()) << ") -> ("
        << format_list(r["target"].get<std::vector<std::string>>()) << ")\n";
    out << "  P = " << r["single"].get<std::string>() << ", P^2 = " << r["single_squared"].get<std::string>()
        << ", P(two copies) = " << r["two_copy"].get<std::string>()
        << (r["strict_excess"].get<bool>() ? "  two copies do strictly better" : "  no gain") << "\n";
  }
  return kOk;
}

int demo_lo_popescu(const GlobalFlags& g, std::ostream& out) {
  const SchmidtVector<Rational> bell = exact({"1/2", "1/2"});
  json rows = json::array();
  bool all_ok = true;
  for (int i = 1; i <= 10; ++i) {
    Rational smallest(i, 20);
    smallest.canonicalize();
    const SchmidtVector<Rational> alpha(std::vector<Rational>{Rational(1 - smallest), smallest});
    const Rational p = optimal_probability(alpha, bell);
    const Rational expected = 2 * smallest < 1 ? Rational(2 * smallest) : Rational(1);
    all_ok = all_ok && p == expected;
    rows.push_back({{"alpha_min", scalar_json(smallest)},
                    {"probability", scalar_json(p)},
                    {"two_alpha_min", scalar_json(expected)},
                    {"match", p == expected}});
  }
  json doc{{"demo", "lo-popescu"}, {"target", "bell"}, {"rows", rows}, {"all_match", all_ok}};
  if (g.json_output) {
    out << doc.dump(2) << "\n";
    return all_ok ? kOk : kInvalidInput;
  }
  out << "target: (1/2, 1/2)\n";
  out << std::left << std::setw(12) << "alpha_min" << std::setw(12) << "P" << std::setw(12) << "min(1,2a)"
      << "match\n";
  for (const auto& r : rows) {
    out << std::setw(12) << r["alpha_min"].get<std::string>() << std::setw(12) << r["probability"].get<std::string>()
        << std::setw(12) << r["two_alpha_min"].get<std::string>() << (r["match"].get<bool>() ? "yes" : "NO") << "\n";
  }
  return all_ok ? kOk : kInvalidInput;
}

int demo_multi_copy(const GlobalFlags& g, std::ostream& out) {
  const std::vector<std::pair<SchmidtVector<Rational>, SchmidtVector<Rational>>> cases{
      {exact({"4/5", "1/5"}), exact({"1/2", "1/2"})},
      {exact({"1/4", "1/4", "1/4", "1/4"}), exact({"1/2", "1/2"})},
  };
  json rows = json::array();
  for (const auto& [alpha, beta] : cases) {
    const auto bound = multi_copy_bound(alpha, beta);
    rows.push_back({{"source", vector_json(alpha.probs())},
                    {"target", vector_json(beta.probs())},
                    {"n_source", bound.source_rank},
                    {"n_target", bound.target_rank},
                    {"p_single", scalar_json(optimal_probability(alpha, beta))},
                    {"p_two_copies", scalar_json(optimal_probability(alpha, tensor_power(beta, 2)))},
                    {"regime", to_string(bound.regime)},
                    {"m_max", scalar_json(bound.m_max)}});
  }
  json doc{{"demo", "multi-copy"}, {"cases", rows}};
  if (g.json_output) {
    out << doc.dump(2) << "\n";
    return kOk;
  }
  for (const auto& r : rows) {
    out << "(" << format_list(r["source"].get<std::vector<std::string>>()) << ") -> ("
        << format_list(r["target"].get<std::vector<std::string>>()) << ")\n";
    out << "  n_source = " << r["n_source"] << ", n_target = " << r["n_target"] << ", n_target^2 = "
        << r["n_target"].get<std::size_t>() * r["n_target"].get<std::size_t>() << "\n";
    out << "  P(source -> target) = " << r["p_single"].get<std::string>() << "\n";
    out << "  P(source -> target x target) = " << r["p_two_copies"].get<std::string>() << "\n";
    out << "  regime: " << r["regime"].get<std::string>() << ", m_max "
        << (r["regime"] == "single_copy_optimal" ? "= " : ">= ") << r["m_max"].get<std::string>() << "\n";
  }
  return kOk;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Optimal LOCC conversion of bipartite pure states", "locc"};
  app.require_subcommand(1);
  app.fallthrough();
  GlobalFlags g;
  app.add_option("--mode", g.mode, "Numeric mode")->check(CLI::IsMember({"rational", "float"}));
  app.add_option("--tolerance", g.tolerance, "Float comparison tolerance")->check(CLI::PositiveNumber);
  app.add_flag("--trim-zeros", g.trim_zeros, "Drop Schmidt coefficients at or below the tolerance");
  app.add_flag("--json", g.json_output, "Machine-readable output for table-style commands");
  app.add_option("--out", g.out_path, "Write results to this file instead of stdout");

  std::string prob_src, prob_tgt;
  auto* prob = app.add_subcommand("prob", "Optimal conversion probability");
  prob->add_option("source", prob_src)->required();
  prob->add_option("target", prob_tgt)->required();

  std::string plan_src, plan_tgt;
  auto* plan = app.add_subcommand("plan", "Optimal conversion plan as JSON");
  plan->add_option("source", plan_src)->required();
  plan->add_option("target", plan_tgt)->required();

  SimulateFlags sim;
  auto* simulate = app.add_subcommand("simulate", "Run the optimal protocol");
  simulate->add_option("source", sim.source);
  simulate->add_option("target", sim.target);
  simulate->add_option("--plan", sim.plan, "Plan JSON written by `locc plan`");
  simulate->add_option("--trials", sim.trials, "Monte-Carlo trials")->check(CLI::PositiveNumber);
  simulate->add_option("--seed", sim.seed, "Monte-Carlo seed");
  simulate->add_option("--threads", sim.threads, "Worker threads (0 = all cores)");
  simulate->add_flag("--exhaustive", sim.exhaustive, "Enumerate every branch instead of sampling");
  simulate->add_option("--branch-cap", sim.branch_cap, "Branch limit for --exhaustive");
  simulate->add_flag("--no-fallback", sim.no_fallback, "Fail instead of sampling when the cap is exceeded");

  std::vector<std::string> mono_files;
  auto* monotones = app.add_subcommand("monotones", "E_k profile and entropy of entanglement");
  monotones->add_option("states", mono_files)->required();

  std::string cmp_a, cmp_b;
  auto* cmp = app.add_subcommand("compare", "Directed conversion probabilities both ways");
  cmp->add_option("first", cmp_a)->required();
  cmp->add_option("second", cmp_b)->required();

  std::string tensor_src, tensor_tgt;
  std::size_t copies = 2;
  auto* tensor = app.add_subcommand("tensor", "Tensor powers and multi-copy conversion");
  tensor->add_option("state", tensor_src)->required();
  tensor->add_option("--copies", copies, "Number of copies")->check(CLI::PositiveNumber);
  tensor->add_option("--target", tensor_tgt, "Compare P(copies) with P(single)^copies for this target");

  std::string demo_name;
  auto* demo = app.add_subcommand("demo", "Reproducible demonstrations");
  demo->add_option("name", demo_name)
      ->required()
      ->check(CLI::IsMember({"paper-cycle", "non-additivity", "lo-popescu", "multi-copy"}));

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kOk : kInvalidInput;
  }

  std::ofstream file_out;
  if (!g.out_path.empty()) {
    file_out.open(g.out_path);
    if (!file_out) {
      err << "error: cannot open '" << g.out_path << "' for writing\n";
      return kInvalidInput;
    }
  }
  std::ostream& sink = g.out_path.empty() ? out : file_out;

  try {
    if (*prob) {
      const std::vector<StateFile> files{load_state_file(prob_src), load_state_file(prob_tgt)};
      return use_rational(g, files, err) ? cmd_prob<Rational>(g, files[0], files[1], sink)
                                         : cmd_prob<double>(g, files[0], files[1], sink);
    }
    if (*plan) {
      const std::vector<StateFile> files{load_state_file(plan_src), load_state_file(plan_tgt)};
      return use_rational(g, files, err) ? cmd_plan<Rational>(g, files[0], files[1], sink)
                                         : cmd_plan<double>(g, files[0], files[1], sink);
    }
    if (*simulate) {
      if (!sim.plan.empty()) {
        std::ifstream in(sim.plan);
        if (!in) throw InvalidInput("cannot open plan file '" + sim.plan + "'");
        json doc;
        try {
          in >> doc;
        } catch (const json::exception& e) {
          throw InvalidInput("'" + sim.plan + "' is not valid JSON: " + e.what());
        }
        const bool rational = g.mode == "rational";
        return rational ? cmd_simulate<Rational>(g, sim, {}, &doc, sink, err)
                        : cmd_simulate<double>(g, sim, {}, &doc, sink, err);
      }
      if (sim.source.empty() || sim.target.empty()) {
        throw InvalidInput("simulate needs SOURCE and TARGET state files, or --plan");
      }
      const std::vector<StateFile> files{load_state_file(sim.source), load_state_file(sim.target)};
      return use_rational(g, files, err) ? cmd_simulate<Rational>(g, sim, files, nullptr, sink, err)
                                         : cmd_simulate<double>(g, sim, files, nullptr, sink, err);
    }
    if (*monotones) {
      std::vector<StateFile> files;
      for (const auto& path : mono_files) files.push_back(load_state_file(path));
      return use_rational(g, files, err) ? cmd_monotones<Rational>(g, files, sink)
                                         : cmd_monotones<double>(g, files, sink);
    }
    if (*cmp) {
      const std::vector<StateFile> files{load_state_file(cmp_a), load_state_file(cmp_b)};
      return use_rational(g, files, err) ? cmd_compare<Rational>(g, files[0], files[1], sink)
                                         : cmd_compare<double>(g, files[0], files[1], sink);
    }
    if (*tensor) {
      std::vector<StateFile> files{load_state_file(tensor_src)};
      if (!tensor_tgt.empty()) files.push_back(load_state_file(tensor_tgt));
      const StateFile* target = files.size() > 1 ? &files[1] : nullptr;
      return use_rational(g, files, err) ? cmd_tensor<Rational>(g, files[0], target, copies, sink)
                                         : cmd_tensor<double>(g, files[0], target, copies, sink);
    }
    if (*demo) {
      if (demo_name == "paper-cycle") return demo_three_state_cycle(g, sink);
      if (demo_name == "non-additivity") return demo_nonadditivity(g, sink);
      if (demo_name == "lo-popescu") return demo_lo_popescu(g, sink);
      return demo_multi_copy(g, sink);
    }
  } catch (const InvalidInput& e) {
    err << "error: invalid input: " << e.what() << "\n";
    return kInvalidInput;
  } catch (const Infeasible& e) {
    err << "error: infeasible: " << e.what() << "\n";
    return kInfeasible;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kInvalidInput;
  }
  return kInvalidInput;
}

}  // namespace locc::cli
