#include "locc/conversion.hpp"

#include <algorithm>
#include <stdexcept>
#include <string>

namespace locc {

namespace {

template <class T>
void require_nonempty(const SchmidtVector<T>& alpha, const SchmidtVector<T>& beta) {
  if (alpha.size() == 0 || beta.size() == 0) throw InvalidInput("empty Schmidt vector");
}

template <class T>
T clamp_unit(T x) {
  if (x < T(0)) return T(0);
  if (x > T(1)) return T(1);
  return x;
}

}  // namespace

template <class T>
TailRatioMinimum<T> minimize_tail_ratio(const SchmidtVector<T>& alpha_in, const SchmidtVector<T>& beta_in,
                                        const NumericOptions& opts) {
  require_nonempty(alpha_in, beta_in);
  const double eps = opts.tolerance;
  auto [alpha, beta] = pad_to_common(alpha_in, beta_in);
  if (alpha.rank(eps) < beta.rank(eps)) return {T(0), 0};

  const std::size_t n = alpha.size();
  std::vector<T> ratio(n);
  std::vector<bool> constrained(n, false);
  T tail_a = 0;
  T tail_b = 0;
  for (std::size_t i = n; i-- > 0;) {
    tail_a += alpha[i];
    tail_b += beta[i];
    if (!is_zero(tail_b, eps)) {
      ratio[i] = tail_a / tail_b;
      constrained[i] = true;
    }
  }
  // l = 1 always has both tails equal to the full sum.
  T best = ratio[0];
  for (std::size_t i = 1; i < n; ++i) {
    if (constrained[i] && ratio[i] < best) best = ratio[i];
  }
  std::size_t minimizer = 0;
  for (std::size_t i = 0; i < n; ++i) {
    if (constrained[i] && !definitely_less(best, ratio[i], eps)) {
      minimizer = i + 1;
      break;
    }
  }
  return {clamp_unit(best), minimizer};
}

template <class T>
T optimal_probability(const SchmidtVector<T>& alpha, const SchmidtVector<T>& beta, const NumericOptions& opts) {
  return minimize_tail_ratio(alpha, beta, opts).value;
}

template <class T>
Breakpoints<T> breakpoints(const SchmidtVector<T>& alpha_in, const SchmidtVector<T>& beta_in,
                           const NumericOptions& opts) {
  require_nonempty(alpha_in, beta_in);
  const double eps = opts.tolerance;
  auto [alpha, beta] = pad_to_common(alpha_in, beta_in);
  const std::size_t n = alpha.size();
  const std::size_t support = beta.rank(eps);
  if (alpha.rank(eps) < support) {
    throw Infeasible("target has more nonzero Schmidt coefficients than source; no conversion plan exists");
  }

  Breakpoints<T> bp;
  bp.boundaries.push_back(n + 1);
  std::size_t end = n;  // segment is [l, end], 1-based
  while (end >= 1) {
    // Candidates are l in [1, min(end, support)]; beta is positive there.
    const std::size_t top = std::min(end, support);
    T sum_a = 0;
    T sum_b = 0;
    for (std::size_t i = top + 1; i <= end; ++i) sum_a += alpha[i - 1];
    std::vector<T> ratio(top + 1);
    for (std::size_t l = top; l >= 1; --l) {
      sum_a += alpha[l - 1];
      sum_b += beta[l - 1];
      ratio[l] = sum_a / sum_b;
    }
    T best = ratio[1];
    for (std::size_t l = 2; l <= top; ++l) {
      if (ratio[l] < best) best = ratio[l];
    }
    std::size_t chosen = 1;
    for (std::size_t l = 1; l <= top; ++l) {
      if (!definitely_less(best, ratio[l], eps)) {
        chosen = l;
        break;
      }
    }
    bp.boundaries.push_back(chosen);
    bp.ratios.push_back(ratio[chosen]);
    end = chosen - 1;
  }
  return bp;
}

template <class T>
SchmidtVector<T> intermediate_state(const Breakpoints<T>& bp, const SchmidtVector<T>& beta,
                                    const NumericOptions& opts, bool allow_resort) {
  if (bp.boundaries.size() < 2 || bp.ratios.size() + 1 != bp.boundaries.size()) {
    throw InvalidInput("malformed breakpoints");
  }
  if (bp.boundaries.front() != beta.size() + 1 || bp.boundaries.back() != 1) {
    throw InvalidInput("breakpoints do not match target length " + std::to_string(beta.size()));
  }
  std::vector<T> gamma(beta.size());
  for (std::size_t j = 0; j < bp.ratios.size(); ++j) {
    const std::size_t hi = bp.boundaries[j];
    const std::size_t lo = bp.boundaries[j + 1];
    if (lo >= hi) throw InvalidInput("breakpoint boundaries must strictly decrease");
    for (std::size_t i = lo; i < hi; ++i) gamma[i - 1] = bp.ratios[j] * beta[i - 1];
  }
  for (std::size_t i = 0; i + 1 < gamma.size(); ++i) {
    if (definitely_less(gamma[i], gamma[i + 1], opts.tolerance) && !allow_resort) {
      throw std::logic_error("intermediate vector is not non-increasing at index " + std::to_string(i + 1) +
                             " (" + to_string(gamma[i]) + " < " + to_string(gamma[i + 1]) + ")");
    }
  }
  NumericOptions keep_zeros = opts;
  keep_zeros.trim_zeros = false;
  return SchmidtVector<T>(std::move(gamma), keep_zeros);
}

template <class T>
Eigen::MatrixXd FilterOperators<T>::success() const {
  Eigen::VectorXd d(static_cast<Eigen::Index>(success_sq.size()));
  for (std::size_t i = 0; i < success_sq.size(); ++i) {
    d[static_cast<Eigen::Index>(i)] = std::sqrt(std::max(0.0, to_double(success_sq[i])));
  }
  return d.asDiagonal();
}

template <class T>
Eigen::MatrixXd FilterOperators<T>::failure() const {
  Eigen::VectorXd d(static_cast<Eigen::Index>(failure_sq.size()));
  for (std::size_t i = 0; i < failure_sq.size(); ++i) {
    d[static_cast<Eigen::Index>(i)] = std::sqrt(std::max(0.0, to_double(failure_sq[i])));
  }
  return d.asDiagonal();
}

template <class T>
FilterOperators<T> measurement_operators(const Breakpoints<T>& bp) {
  if (bp.boundaries.size() < 2 || bp.ratios.size() + 1 != bp.boundaries.size()) {
    throw InvalidInput("malformed breakpoints");
  }
  const std::size_t n = bp.boundaries.front() - 1;
  FilterOperators<T> ops{std::vector<T>(n), std::vector<T>(n)};
  const T& r1 = bp.ratios.front();
  for (std::size_t j = 0; j < bp.ratios.size(); ++j) {
    const T level = r1 / bp.ratios[j];
    for (std::size_t i = bp.boundaries[j + 1]; i < bp.boundaries[j]; ++i) {
      ops.success_sq[i - 1] = level;
      ops.failure_sq[i - 1] = clamp_unit(T(T(1) - level));
    }
  }
  return ops;
}

template <class T>
ConversionPlan<T> build_plan(const SchmidtVector<T>& alpha_in, const SchmidtVector<T>& beta_in,
                             const NumericOptions& opts) {
  require_nonempty(alpha_in, beta_in);
  const double eps = opts.tolerance;
  auto [alpha, beta] = pad_to_common(alpha_in, beta_in);
  if (alpha.rank(eps) < beta.rank(eps)) {
    return ConversionPlan<T>{alpha, beta, T(0), std::nullopt, std::nullopt, std::nullopt};
  }
  Breakpoints<T> bp = breakpoints(alpha, beta, opts);
  SchmidtVector<T> gamma = intermediate_state(bp, beta, opts);
  FilterOperators<T> filter = measurement_operators(bp);
  const T r1 = bp.ratios.front();

  if (!majorizes(alpha, gamma, eps)) {
    throw std::logic_error("intermediate vector does not majorize the source");
  }
  for (std::size_t i = 0; i < beta.size(); ++i) {
    const T filtered = gamma[i] * filter.success_sq[i];
    const T expected = r1 * beta[i];
    if (!approx_equal(filtered, expected, eps)) {
      throw std::logic_error("filter identity fails at index " + std::to_string(i + 1));
    }
  }
  return ConversionPlan<T>{alpha, beta, r1, std::move(bp), std::move(gamma), std::move(filter)};
}

template <class T>
MultiCopyBound<T> multi_copy_bound(const SchmidtVector<T>& alpha, const SchmidtVector<T>& beta,
                                   const NumericOptions& opts) {
  const std::size_t source_rank = alpha.rank(opts.tolerance);
  const std::size_t target_rank = beta.rank(opts.tolerance);
  const CopyRegime regime = source_rank < target_rank * target_rank ? CopyRegime::single_copy_optimal
                                                                    : CopyRegime::multi_copy_possible;
  return {optimal_probability(alpha, beta, opts), regime, source_rank, target_rank};
}

template <class T>
T tensor_conversion_probability(const SchmidtVector<T>& alpha, const SchmidtVector<T>& beta, std::size_t copies,
                                const NumericOptions& opts) {
  if (copies == 0) throw InvalidInput("copies must be at least 1");
  if (copies == 1) return optimal_probability(alpha, beta, opts);
  return optimal_probability(tensor_power(alpha, copies), tensor_power(beta, copies), opts);
}

const char* to_string(CopyRegime regime) {
  switch (regime) {
    case CopyRegime::single_copy_optimal:
      return "single_copy_optimal";
    case CopyRegime::multi_copy_possible:
      return "multi_copy_possible";
  }
  return "unknown";
}

#define LOCC_INSTANTIATE_CONVERSION(T)                                                                       \
  template TailRatioMinimum<T> minimize_tail_ratio(const SchmidtVector<T>&, const SchmidtVector<T>&,       \
                                                   const NumericOptions&);                                 \
  template T optimal_probability(const SchmidtVector<T>&, const SchmidtVector<T>&, const NumericOptions&); \
  template Breakpoints<T> breakpoints(const SchmidtVector<T>&, const SchmidtVector<T>&,                    \
                                     const NumericOptions&);                                               \
  template SchmidtVector<T> intermediate_state(const Breakpoints<T>&, const SchmidtVector<T>&,             \
                                               const NumericOptions&, bool);                               \
  template struct FilterOperators<T>;                                                                      \
  template FilterOperators<T> measurement_operators(const Breakpoints<T>&);                                \
  template ConversionPlan<T> build_plan(const SchmidtVector<T>&, const SchmidtVector<T>&,                  \
                                        const NumericOptions&);                                            \
  template MultiCopyBound<T> multi_copy_bound(const SchmidtVector<T>&, const SchmidtVector<T>&,            \
                                              const NumericOptions&);                                      \
  template T tensor_conversion_probability(const SchmidtVector<T>&, const SchmidtVector<T>&, std::size_t,  \
                                           const NumericOptions&);

LOCC_INSTANTIATE_CONVERSION(double)
LOCC_INSTANTIATE_CONVERSION(Rational)

#undef LOCC_INSTANTIATE_CONVERSION

}  // namespace locc
