#include "locc/protocol.hpp"

#include <algorithm>
#include <stdexcept>
#include <string>

namespace locc {

bool holds(const OutcomeCondition& condition, const History& history) {
  return std::find(history.begin(), history.end(), condition) != history.end();
}

std::size_t LoccProtocol::measurement_count() const {
  return static_cast<std::size_t>(std::count_if(steps.begin(), steps.end(), [](const LoccStep& s) {
    return std::holds_alternative<LocalMeasurement>(s);
  }));
}

bool is_success(const LoccProtocol& protocol, const History& history) {
  return std::all_of(protocol.success_when.begin(), protocol.success_when.end(),
                     [&](const OutcomeCondition& c) { return holds(c, history); });
}

namespace {

void check_condition(const LoccProtocol& protocol, const OutcomeCondition& c, std::size_t before) {
  if (c.step >= before) {
    throw InvalidInput("condition refers to step " + std::to_string(c.step) + ", which has not run yet");
  }
  const auto* m = std::get_if<LocalMeasurement>(&protocol.steps[c.step]);
  if (m == nullptr) throw InvalidInput("condition refers to step " + std::to_string(c.step) + ", not a measurement");
  if (c.outcome >= m->operators.size()) {
    throw InvalidInput("condition refers to outcome " + std::to_string(c.outcome) + " of a measurement with " +
                       std::to_string(m->operators.size()) + " outcomes");
  }
}

}  // namespace

void validate(const LoccProtocol& protocol, double tolerance) {
  const auto n = static_cast<Eigen::Index>(protocol.dimension);
  if (n < 1) throw InvalidInput("protocol dimension must be positive");
  const Eigen::MatrixXcd identity = Eigen::MatrixXcd::Identity(n, n);
  for (std::size_t s = 0; s < protocol.steps.size(); ++s) {
    const std::string where = "step " + std::to_string(s) + ": ";
    if (const auto* m = std::get_if<LocalMeasurement>(&protocol.steps[s])) {
      if (m->operators.empty()) throw InvalidInput(where + "measurement has no operators");
      Eigen::MatrixXcd total = Eigen::MatrixXcd::Zero(n, n);
      for (const auto& k : m->operators) {
        if (k.rows() != n || k.cols() != n) throw InvalidInput(where + "measurement operator has wrong shape");
        total += k.adjoint() * k;
      }
      if ((total - identity).cwiseAbs().maxCoeff() > tolerance) {
        throw InvalidInput(where + "measurement operators violate completeness");
      }
      if (m->exact_squared_diagonals) {
        if (m->exact_squared_diagonals->size() != m->operators.size()) {
          throw InvalidInput(where + "exact diagonals do not match operator count");
        }
        for (std::size_t i = 0; i < protocol.dimension; ++i) {
          Rational total_sq = 0;
          for (const auto& d : *m->exact_squared_diagonals) {
            if (d.size() != protocol.dimension) throw InvalidInput(where + "exact diagonal has wrong length");
            total_sq += d[i];
          }
          if (total_sq != 1) throw InvalidInput(where + "exact diagonals violate completeness");
        }
      }
    } else if (const auto* u = std::get_if<LocalUnitary>(&protocol.steps[s])) {
      if (u->matrix.rows() != n || u->matrix.cols() != n) throw InvalidInput(where + "unitary has wrong shape");
      if ((u->matrix.adjoint() * u->matrix - identity).cwiseAbs().maxCoeff() > tolerance) {
        throw InvalidInput(where + "matrix is not unitary");
      }
      if (u->condition) check_condition(protocol, *u->condition, s);
    } else {
      const auto& a = std::get<Announce>(protocol.steps[s]);
      if (a.of_step >= s || !std::holds_alternative<LocalMeasurement>(protocol.steps[a.of_step])) {
        throw InvalidInput(where + "announcement must follow the measurement it reports");
      }
    }
  }
  for (const auto& c : protocol.success_when) check_condition(protocol, c, protocol.steps.size());
}

template <class T>
LocalMeasurement diagonal_measurement(Party party, const std::vector<std::vector<T>>& squared_diagonals) {
  LocalMeasurement m;
  m.party = party;
  std::vector<std::vector<Rational>> exact;
  for (const auto& diag : squared_diagonals) {
    Eigen::VectorXcd d(static_cast<Eigen::Index>(diag.size()));
    std::vector<Rational> exact_diag;
    for (std::size_t i = 0; i < diag.size(); ++i) {
      d[static_cast<Eigen::Index>(i)] = std::sqrt(std::max(0.0, to_double(diag[i])));
      if constexpr (std::is_same_v<T, Rational>) exact_diag.push_back(diag[i]);
    }
    m.operators.emplace_back(d.asDiagonal());
    exact.push_back(std::move(exact_diag));
  }
  if constexpr (std::is_same_v<T, Rational>) m.exact_squared_diagonals = std::move(exact);
  return m;
}

template LocalMeasurement diagonal_measurement(Party, const std::vector<std::vector<double>>&);
template LocalMeasurement diagonal_measurement(Party, const std::vector<std::vector<Rational>>&);

LocalUnitary permutation_unitary(Party party, std::vector<std::size_t> permutation,
                                 std::optional<OutcomeCondition> condition) {
  const auto n = static_cast<Eigen::Index>(permutation.size());
  Eigen::MatrixXcd p = Eigen::MatrixXcd::Zero(n, n);
  std::vector<bool> seen(permutation.size(), false);
  for (std::size_t i = 0; i < permutation.size(); ++i) {
    if (permutation[i] >= permutation.size() || seen[permutation[i]]) {
      throw InvalidInput("not a permutation");
    }
    seen[permutation[i]] = true;
    p(static_cast<Eigen::Index>(permutation[i]), static_cast<Eigen::Index>(i)) = 1.0;
  }
  return LocalUnitary{party, std::move(p), condition, std::move(permutation)};
}

template <class T>
std::vector<TTransform<T>> t_transform_chain(const SchmidtVector<T>& alpha_in, const SchmidtVector<T>& gamma_in,
                                             const NumericOptions& opts) {
  const double eps = opts.tolerance;
  if (!majorizes(alpha_in, gamma_in, eps)) {
    throw Infeasible("source is not majorized by the intermediate vector; no deterministic protocol exists");
  }
  auto [alpha, gamma] = pad_to_common(alpha_in, gamma_in);
  const std::size_t n = alpha.size();
  std::vector<T> x = alpha.probs();
  std::vector<T> y = gamma.probs();
  std::vector<TTransform<T>> chain;
  // Every step matches at least one more coordinate exactly; the bound is
  // generous for the float path, where matches are only up to rounding.
  for (std::size_t iter = 0; iter < 2 * n; ++iter) {
    std::optional<std::size_t> j;
    for (std::size_t i = n; i-- > 0;) {
      if (definitely_less(x[i], y[i], eps)) {
        j = i;
        break;
      }
    }
    if (!j) return chain;
    std::optional<std::size_t> k;
    for (std::size_t i = *j + 1; i < n; ++i) {
      if (definitely_less(y[i], x[i], eps)) {
        k = i;
        break;
      }
    }
    if (!k) break;
    const T gap_j = y[*j] - x[*j];
    const T gap_k = x[*k] - y[*k];
    const T delta = gap_j < gap_k ? gap_j : gap_k;
    const T t = T(1) - delta / (y[*j] - y[*k]);
    y[*j] -= delta;
    y[*k] += delta;
    chain.push_back({*j, *k, t});
  }
  if constexpr (std::is_same_v<T, Rational>) {
    throw std::logic_error("T-transform chain did not terminate");
  }
  return chain;
}

template <class T>
LoccProtocol deterministic_protocol(const SchmidtVector<T>& alpha_in, const SchmidtVector<T>& gamma_in,
                                    const NumericOptions& opts) {
  const std::vector<TTransform<T>> chain = t_transform_chain(alpha_in, gamma_in, opts);
  auto [alpha, gamma] = pad_to_common(alpha_in, gamma_in);
  const std::size_t n = alpha.size();

  // Replay the chain to recover every intermediate vector v_0 = gamma, ...
  std::vector<std::vector<T>> vectors{gamma.probs()};
  for (const auto& step : chain) {
    std::vector<T> next = vectors.back();
    const T& yj = vectors.back()[step.j];
    const T& yk = vectors.back()[step.k];
    next[step.j] = step.t * yj + (T(1) - step.t) * yk;
    next[step.k] = step.t * yk + (T(1) - step.t) * yj;
    vectors.push_back(std::move(next));
  }

  LoccProtocol protocol;
  protocol.dimension = n;
  for (std::size_t c = chain.size(); c-- > 0;) {
    const auto& [j, k, t] = chain[c];
    const std::vector<T>& from = vectors[c + 1];
    const std::vector<T>& to = vectors[c];
    std::vector<T> swapped = to;
    std::swap(swapped[j], swapped[k]);
    std::vector<T> keep_sq(n);
    std::vector<T> swap_sq(n);
    for (std::size_t i = 0; i < n; ++i) {
      if (from[i] == T(0)) {
        keep_sq[i] = 1;
        swap_sq[i] = 0;
      } else {
        keep_sq[i] = t * to[i] / from[i];
        swap_sq[i] = (T(1) - t) * swapped[i] / from[i];
      }
    }
    const std::size_t at = protocol.steps.size();
    protocol.steps.emplace_back(diagonal_measurement<T>(Party::A, {keep_sq, swap_sq}));
    protocol.steps.emplace_back(Announce{at});
    std::vector<std::size_t> perm(n);
    for (std::size_t i = 0; i < n; ++i) perm[i] = i;
    std::swap(perm[j], perm[k]);
    protocol.steps.emplace_back(permutation_unitary(Party::A, perm, OutcomeCondition{at, 1}));
    protocol.steps.emplace_back(permutation_unitary(Party::B, perm, OutcomeCondition{at, 1}));
  }
  protocol.predicted_success = 1.0;
  validate(protocol);
  return protocol;
}

template <class T>
LoccProtocol build_full_protocol(const ConversionPlan<T>& plan, const NumericOptions& opts) {
  if (!plan.feasible()) {
    throw Infeasible("conversion has success probability 0; target has more nonzero Schmidt coefficients");
  }
  LoccProtocol protocol = deterministic_protocol(plan.source, *plan.intermediate, opts);
  const std::size_t at = protocol.steps.size();
  protocol.steps.emplace_back(
      diagonal_measurement<T>(Party::A, {plan.filter->success_sq, plan.filter->failure_sq}));
  protocol.steps.emplace_back(Announce{at});
  protocol.success_when = {OutcomeCondition{at, 0}};
  protocol.predicted_success = to_double(plan.probability);
  validate(protocol);
  return protocol;
}

#define LOCC_INSTANTIATE_PROTOCOL(T)                                                                          \
  template std::vector<TTransform<T>> t_transform_chain(const SchmidtVector<T>&, const SchmidtVector<T>&,  \
                                                        const NumericOptions&);                            \
  template LoccProtocol deterministic_protocol(const SchmidtVector<T>&, const SchmidtVector<T>&,           \
                                               const NumericOptions&);                                     \
  template LoccProtocol build_full_protocol(const ConversionPlan<T>&, const NumericOptions&);

LOCC_INSTANTIATE_PROTOCOL(double)
LOCC_INSTANTIATE_PROTOCOL(Rational)

#undef LOCC_INSTANTIATE_PROTOCOL

}  // namespace locc
