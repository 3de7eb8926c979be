#pragma once

#include <cstddef>
#include <cstdint>
#include <stdexcept>
#include <vector>

#include "locc/protocol.hpp"

namespace locc {

class BranchCapExceeded : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct MeasurementOutcome {
  std::size_t index = 0;
  double probability = 0.0;
  /// Empty when the outcome has (numerically) zero probability.
  std::optional<BipartiteState> post_state;
};

/// Applies a local measurement: outcome m occurs with probability
/// ||(K_m (x) I) psi||^2 (roles swapped for party B). Throws InvalidInput when
/// the operators violate completeness.
std::vector<MeasurementOutcome> apply_measurement(const BipartiteState& state, Party party,
                                                  const std::vector<Eigen::MatrixXcd>& operators,
                                                  double tolerance = 1e-9);

struct ExhaustiveOptions {
  std::size_t branch_cap = 100000;
  /// Outcomes with probability below this are dropped (float path only; the
  /// exact path drops outcomes that are exactly zero).
  double prune_below = 1e-12;
};

/// Probability-weighted Schmidt vectors of the live branches after one step.
template <class T>
struct AuditEntry {
  T weight;
  SchmidtVector<T> schmidt;
};

template <class T>
using AuditLayer = std::vector<AuditEntry<T>>;

struct Branch {
  History history;
  double probability = 0.0;
  BipartiteState state;
  bool success = false;
};

/// Layer 0 is the initial state; layer s+1 is the state after step s.
struct ExhaustiveRun {
  std::vector<Branch> branches;
  std::vector<AuditLayer<double>> layers;
  double success_probability = 0.0;
};

/// Enumerates every outcome branch at amplitude level.
ExhaustiveRun exhaustive_run(const LoccProtocol& protocol, const BipartiteState& initial,
                             const ExhaustiveOptions& opts = {});

/// Exact branch for states whose amplitude matrix has one nonzero entry per
/// row and column (Schmidt form up to local permutations). `weights[i]` is the
/// squared amplitude at (rows[i], cols[i]).
struct ExactBranch {
  History history;
  Rational probability;
  std::vector<std::size_t> rows;
  std::vector<std::size_t> cols;
  std::vector<Rational> weights;
  bool success = false;

  SchmidtVector<Rational> schmidt() const;
};

struct ExactExhaustiveRun {
  std::vector<ExactBranch> branches;
  std::vector<AuditLayer<Rational>> layers;
  Rational success_probability;
};

/// Exact enumeration in rational arithmetic, starting from the Schmidt-form
/// state of `initial`. Every measurement must carry exact squared diagonals
/// and every unitary must be a permutation; throws InvalidInput otherwise.
ExactExhaustiveRun exhaustive_run_exact(const LoccProtocol& protocol, const SchmidtVector<Rational>& initial,
                                        const ExhaustiveOptions& opts = {});

template <class T>
struct MonotoneAudit {
  std::size_t k = 1;
  std::vector<T> averages;  // one per layer
  bool non_increasing = true;
  double max_increase = 0.0;
};

/// Per-layer probability-weighted average of E_k. E_k of a branch with fewer
/// than k Schmidt levels counts as zero.
template <class T>
MonotoneAudit<T> monotone_audit(const std::vector<AuditLayer<T>>& layers, std::size_t k,
                                double tolerance = 1e-9);

struct MonteCarloOptions {
  std::uint64_t trials = 100000;
  std::uint64_t seed = 0;
  unsigned threads = 1;
  /// Trials are reduced in fixed blocks of this size, in block order, so the
  /// report does not depend on the thread count.
  std::size_t block_size = 4096;
  double prune_below = 1e-12;
};

struct SampledAudit {
  std::size_t step = 0;  // layer index, 0 = initial state
  std::size_t k = 1;
  double avg_E = 0.0;
};

struct SimulationReport {
  std::uint64_t trials = 0;
  std::uint64_t successes = 0;
  double empirical = 0.0;
  double std_error = 0.0;
  std::optional<double> predicted;
  std::uint64_t seed = 0;
  std::vector<SampledAudit> audit;
};

/// Samples `trials` independent runs. The random stream of trial i depends
/// only on (seed, i).
SimulationReport monte_carlo_run(const LoccProtocol& protocol, const BipartiteState& initial,
                                 const MonteCarloOptions& opts);

/// Counter-based generator: a SplitMix64 stream keyed by (seed, trial).
class TrialRng {
 public:
  TrialRng(std::uint64_t seed, std::uint64_t trial);

  std::uint64_t next();
  /// Uniform in [0, 1).
  double uniform();

 private:
  std::uint64_t state_;
};

}  // namespace locc
