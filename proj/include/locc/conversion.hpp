#pragma once

// Optimal single-copy conversion between bipartite pure states.
//
// The success probability of the best LOCC strategy taking Schmidt vector
// alpha to beta is
//
//   P(alpha -> beta) = min_l  sum_{i>=l} alpha_i / sum_{i>=l} beta_i,
//
// and it is attained by a two-stage protocol: a deterministic conversion to
// an intermediate vector gamma (which majorizes alpha), followed by a
// two-outcome diagonal filter {M, N} on one party. The intermediate vector is
// built segment by segment from a decreasing chain of boundaries
// l_0 = n+1 > l_1 > ... > l_k = 1 and increasing ratio levels r_1 < ... < r_k,
// with gamma_i = r_j beta_i on [l_j, l_{j-1}-1] and M = sqrt(r_1/r_j) there.

#include <Eigen/Dense>

#include <cstddef>
#include <optional>
#include <vector>

#include "locc/schmidt.hpp"

namespace locc {

template <class T>
struct TailRatioMinimum {
  T value;
  /// Smallest 1-based l attaining the minimum; 0 when the source has fewer
  /// nonzero coefficients than the target.
  std::size_t minimizer = 0;
};

/// Closed-form minimization over tail ratios. Terms whose target tail is zero
/// impose no constraint and are skipped.
template <class T>
TailRatioMinimum<T> minimize_tail_ratio(const SchmidtVector<T>& alpha, const SchmidtVector<T>& beta,
                                        const NumericOptions& opts = {});

/// Maximal LOCC success probability, clamped to [0, 1].
template <class T>
T optimal_probability(const SchmidtVector<T>& alpha, const SchmidtVector<T>& beta,
                      const NumericOptions& opts = {});

template <class T>
struct Breakpoints {
  std::vector<std::size_t> boundaries;  // l_0 = n+1 > ... > l_k = 1, 1-based
  std::vector<T> ratios;                // r_1 < ... < r_k

  std::size_t segments() const { return ratios.size(); }
};

/// Throws Infeasible when beta has more nonzero coefficients than alpha.
template <class T>
Breakpoints<T> breakpoints(const SchmidtVector<T>& alpha, const SchmidtVector<T>& beta,
                           const NumericOptions& opts = {});

/// gamma_i = r_j beta_i on each segment. gamma is non-increasing for every
/// valid breakpoint chain; if a chain ever produced an unsorted gamma this
/// throws std::logic_error unless `allow_resort` is set.
template <class T>
SchmidtVector<T> intermediate_state(const Breakpoints<T>& bp, const SchmidtVector<T>& beta,
                                    const NumericOptions& opts = {}, bool allow_resort = false);

/// Diagonal two-outcome filter. Stored as squared diagonals, which are exact
/// in rational mode (M_ii^2 = r_1 / r_j, N_ii^2 = 1 - M_ii^2).
template <class T>
struct FilterOperators {
  std::vector<T> success_sq;
  std::vector<T> failure_sq;

  Eigen::MatrixXd success() const;
  Eigen::MatrixXd failure() const;
};

template <class T>
FilterOperators<T> measurement_operators(const Breakpoints<T>& bp);

template <class T>
struct ConversionPlan {
  SchmidtVector<T> source;  // alpha, padded to the common length
  SchmidtVector<T> target;  // beta, padded to the common length
  T probability;
  std::optional<Breakpoints<T>> breakpoints;
  std::optional<SchmidtVector<T>> intermediate;
  std::optional<FilterOperators<T>> filter;

  /// False for the degenerate probability-zero plan, which carries no
  /// breakpoints, intermediate state, or operators.
  bool feasible() const { return breakpoints.has_value(); }
};

/// Assembles the full plan and checks it: alpha must be majorized by gamma,
/// and gamma_i M_ii^2 must equal r_1 beta_i for every i. A violated check is a
/// bug and throws std::logic_error.
template <class T>
ConversionPlan<T> build_plan(const SchmidtVector<T>& alpha, const SchmidtVector<T>& beta,
                             const NumericOptions& opts = {});

enum class CopyRegime { single_copy_optimal, multi_copy_possible };

template <class T>
struct MultiCopyBound {
  /// Expected number of target copies. Exact in the single-copy regime; a
  /// lower bound otherwise.
  T m_max;
  CopyRegime regime;
  std::size_t source_rank;
  std::size_t target_rank;
};

/// When rank(alpha) < rank(beta)^2, no LOCC strategy yields two or more copies
/// of beta, so the best expected copy count is the single-copy probability.
template <class T>
MultiCopyBound<T> multi_copy_bound(const SchmidtVector<T>& alpha, const SchmidtVector<T>& beta,
                                   const NumericOptions& opts = {});

/// optimal_probability(alpha^{(x)N}, beta^{(x)N}).
template <class T>
T tensor_conversion_probability(const SchmidtVector<T>& alpha, const SchmidtVector<T>& beta,
                                std::size_t copies, const NumericOptions& opts = {});

const char* to_string(CopyRegime regime);

}  // namespace locc
