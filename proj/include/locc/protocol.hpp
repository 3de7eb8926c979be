#pragma once

// LOCC protocols as plain data: a flat list of local measurements, local
// unitaries (optionally conditioned on an earlier outcome), and classical
// announcements. All operators act on the computational basis of C^n for the
// named party.

#include <Eigen/Dense>

#include <cstddef>
#include <optional>
#include <variant>
#include <vector>

#include "locc/conversion.hpp"

namespace locc {

enum class Party { A, B };

/// Holds when the measurement at protocol step `step` produced `outcome`.
struct OutcomeCondition {
  std::size_t step = 0;
  std::size_t outcome = 0;

  friend bool operator==(const OutcomeCondition&, const OutcomeCondition&) = default;
};

using History = std::vector<OutcomeCondition>;

bool holds(const OutcomeCondition& condition, const History& history);

struct LocalMeasurement {
  Party party = Party::A;
  std::vector<Eigen::MatrixXcd> operators;
  /// Squared diagonals of the operators when they are diagonal with rational
  /// squares; enables exact bookkeeping in `exhaustive_run_exact`.
  std::optional<std::vector<std::vector<Rational>>> exact_squared_diagonals;
};

struct LocalUnitary {
  Party party = Party::A;
  Eigen::MatrixXcd matrix;
  std::optional<OutcomeCondition> condition;
  /// Set when `matrix` maps |i> to |permutation[i]>.
  std::optional<std::vector<std::size_t>> permutation;
};

/// Broadcast of the outcome of an earlier measurement step. Has no effect on
/// the state; recorded so the protocol reads as the sequence the parties run.
struct Announce {
  std::size_t of_step = 0;
};

using LoccStep = std::variant<LocalMeasurement, LocalUnitary, Announce>;

struct LoccProtocol {
  std::size_t dimension = 1;
  std::vector<LoccStep> steps;
  /// All must hold for a branch to count as a success. Empty means every
  /// branch succeeds.
  std::vector<OutcomeCondition> success_when;
  /// Success probability promised by the plan the protocol was built from.
  std::optional<double> predicted_success;

  std::size_t measurement_count() const;
};

bool is_success(const LoccProtocol& protocol, const History& history);

/// Checks operator shapes, completeness (sum K^dag K = I) and unitarity, and
/// that conditions refer to earlier measurement steps. Throws InvalidInput.
void validate(const LoccProtocol& protocol, double tolerance = 1e-9);

/// Diagonal measurement from squared diagonals, one vector per outcome.
template <class T>
LocalMeasurement diagonal_measurement(Party party, const std::vector<std::vector<T>>& squared_diagonals);

/// Permutation unitary |i> -> |permutation[i]>.
LocalUnitary permutation_unitary(Party party, std::vector<std::size_t> permutation,
                                 std::optional<OutcomeCondition> condition = std::nullopt);

/// One elementary mixing step y' = t y + (1 - t) P_{jk} y of two levels
/// (0-based j < k).
template <class T>
struct TTransform {
  std::size_t j = 0;
  std::size_t k = 0;
  T t;
};

/// Chain of at most n-1 T-transforms carrying `gamma` down to `alpha`
/// (alpha = T_m ... T_1 gamma), each keeping the vector sorted. Requires alpha
/// to be majorized by gamma; throws Infeasible otherwise.
template <class T>
std::vector<TTransform<T>> t_transform_chain(const SchmidtVector<T>& alpha, const SchmidtVector<T>& gamma,
                                             const NumericOptions& opts = {});

/// Deterministic conversion alpha -> gamma. Each T-transform of the chain is
/// undone by a two-outcome measurement on A whose outcomes leave either gamma
/// or gamma with levels j, k exchanged; the second outcome is announced and
/// both parties swap j and k back.
template <class T>
LoccProtocol deterministic_protocol(const SchmidtVector<T>& alpha, const SchmidtVector<T>& gamma,
                                    const NumericOptions& opts = {});

/// Deterministic stage to the plan's intermediate vector followed by the
/// two-outcome filter {M, N} on A. Success is the M outcome.
template <class T>
LoccProtocol build_full_protocol(const ConversionPlan<T>& plan, const NumericOptions& opts = {});

}  // namespace locc
