#include <pybind11/complex.h>
#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <sstream>

#include "locc/cli.hpp"
#include "locc/io.hpp"
#include "locc/monotones.hpp"
#include "locc/ordering.hpp"
#include "locc/protocol.hpp"
#include "locc/simulator.hpp"

namespace py = pybind11;
using namespace locc;

namespace {

// Exact entries cross the boundary as "p/q" strings; the Python layer turns
// them into fractions.Fraction.
using Strings = std::vector<std::string>;

SchmidtVector<Rational> exact_sv(const Strings& entries) {
  std::vector<Rational> v;
  v.reserve(entries.size());
  for (const auto& e : entries) v.push_back(parse_rational(e));
  return SchmidtVector<Rational>(std::move(v));
}

SchmidtVector<double> float_sv(const std::vector<double>& entries, double tolerance) {
  NumericOptions opts;
  opts.tolerance = tolerance;
  return SchmidtVector<double>(entries, opts);
}

Strings strings(const std::vector<Rational>& v) {
  Strings out;
  for (const auto& x : v) out.push_back(to_string(x));
  return out;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Optimal LOCC conversion of bipartite pure states";

  py::register_exception<InvalidInput>(m, "InvalidInput", PyExc_ValueError);
  py::register_exception<Infeasible>(m, "Infeasible", PyExc_RuntimeError);

  m.def("probability_exact", [](const Strings& a, const Strings& b) {
    return to_string(optimal_probability(exact_sv(a), exact_sv(b)));
  });
  m.def("probability_float", [](const std::vector<double>& a, const std::vector<double>& b, double tol) {
    NumericOptions opts;
    opts.tolerance = tol;
    return optimal_probability(float_sv(a, tol), float_sv(b, tol), opts);
  });

  m.def("plan_exact", [](const Strings& a, const Strings& b) {
    return to_json(build_plan(exact_sv(a), exact_sv(b))).dump();
  });
  m.def("plan_float", [](const std::vector<double>& a, const std::vector<double>& b, double tol) {
    NumericOptions opts;
    opts.tolerance = tol;
    return to_json(build_plan(float_sv(a, tol), float_sv(b, tol), opts)).dump();
  });

  m.def("profile_exact", [](const Strings& a) { return strings(monotone_profile(exact_sv(a))); });
  m.def("profile_float", [](const std::vector<double>& a, double tol) { return monotone_profile(float_sv(a, tol)); });
  m.def("entropy", [](const std::vector<double>& a, double tol) { return entropy_of_entanglement(float_sv(a, tol)); });

  m.def("compare_exact", [](const Strings& a, const Strings& b) {
    auto r = compare(exact_sv(a), exact_sv(b));
    return py::make_tuple(to_string(r.p_forward), to_string(r.p_backward), to_string(r.verdict));
  });
  m.def("compare_float", [](const std::vector<double>& a, const std::vector<double>& b, double tol) {
    NumericOptions opts;
    opts.tolerance = tol;
    auto r = compare(float_sv(a, tol), float_sv(b, tol), opts);
    return py::make_tuple(r.p_forward, r.p_backward, to_string(r.verdict));
  });
  m.def("find_cycle_exact", [](const std::vector<Strings>& states) {
    std::vector<SchmidtVector<Rational>> svs;
    for (const auto& s : states) svs.push_back(exact_sv(s));
    return find_cycle(svs);
  });

  m.def("tensor_power_exact", [](const Strings& a, std::size_t copies) {
    return strings(tensor_power(exact_sv(a), copies).probs());
  });
  m.def("tensor_probability_exact", [](const Strings& a, const Strings& b, std::size_t copies) {
    return to_string(tensor_conversion_probability(exact_sv(a), exact_sv(b), copies));
  });
  m.def("tensor_probability_float",
        [](const std::vector<double>& a, const std::vector<double>& b, std::size_t copies, double tol) {
          NumericOptions opts;
          opts.tolerance = tol;
          return tensor_conversion_probability(float_sv(a, tol), float_sv(b, tol), copies, opts);
        });

  m.def("schmidt_coefficients", [](const Eigen::MatrixXcd& amplitudes) {
    return schmidt_decompose(BipartiteState(amplitudes)).probs();
  });

  m.def(
      "simulate_exhaustive_exact",
      [](const Strings& a, const Strings& b) {
        auto plan = build_plan(exact_sv(a), exact_sv(b));
        return to_string(exhaustive_run_exact(build_full_protocol(plan), plan.source).success_probability);
      },
      "Exact success probability of the optimal protocol, enumerating every branch.");
  m.def(
      "simulate_monte_carlo",
      [](const std::vector<double>& a, const std::vector<double>& b, std::uint64_t trials, std::uint64_t seed,
         unsigned threads, double tol) {
        NumericOptions nopts;
        nopts.tolerance = tol;
        auto plan = build_plan(float_sv(a, tol), float_sv(b, tol), nopts);
        MonteCarloOptions opts;
        opts.trials = trials;
        opts.seed = seed;
        opts.threads = threads;
        py::gil_scoped_release release;
        return to_json(monte_carlo_run(build_full_protocol(plan, nopts), state_from_schmidt(plan.source), opts))
            .dump();
      },
      "Sampled run of the optimal protocol; returns the report as JSON.");

  m.def("run_cli", [](const std::vector<std::string>& args) {
    std::ostringstream out, err;
    const int code = cli::run(args, out, err);
    return py::make_tuple(code, out.str(), err.str());
  });
}
