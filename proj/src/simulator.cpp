#include "locc/simulator.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <string>
#include <thread>

#include "locc/monotones.hpp"

namespace locc {

namespace {

constexpr double kPruneDefault = 1e-12;

Eigen::MatrixXcd apply_local(const Eigen::MatrixXcd& op, Party party, const Eigen::MatrixXcd& amps) {
  // (X (x) Y) sum_ij a_ij |i j> has amplitude matrix X a Y^T.
  if (party == Party::A) return op * amps;
  return amps * op.transpose();
}

void check_party_dimension(const Eigen::MatrixXcd& op, Party party, const Eigen::MatrixXcd& amps) {
  const Eigen::Index n = party == Party::A ? amps.rows() : amps.cols();
  if (op.rows() != n || op.cols() != n) {
    throw InvalidInput("local operator dimension does not match the state");
  }
}

std::uint64_t splitmix64(std::uint64_t& x) {
  std::uint64_t z = (x += 0x9E3779B97F4A7C15ULL);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

}  // namespace

std::vector<MeasurementOutcome> apply_measurement(const BipartiteState& state, Party party,
                                                  const std::vector<Eigen::MatrixXcd>& operators,
                                                  double tolerance) {
  if (operators.empty()) throw InvalidInput("measurement has no operators");
  const Eigen::Index n = party == Party::A ? state.dim_a() : state.dim_b();
  Eigen::MatrixXcd total = Eigen::MatrixXcd::Zero(n, n);
  for (const auto& k : operators) {
    check_party_dimension(k, party, state.amplitudes());
    total += k.adjoint() * k;
  }
  if ((total - Eigen::MatrixXcd::Identity(n, n)).cwiseAbs().maxCoeff() > tolerance) {
    throw InvalidInput("measurement operators violate completeness");
  }
  std::vector<MeasurementOutcome> out;
  for (std::size_t m = 0; m < operators.size(); ++m) {
    Eigen::MatrixXcd next = apply_local(operators[m], party, state.amplitudes());
    const double p = next.squaredNorm();
    MeasurementOutcome outcome{m, p, std::nullopt};
    if (p >= kPruneDefault) outcome.post_state.emplace(next / std::sqrt(p));
    out.push_back(std::move(outcome));
  }
  return out;
}

ExhaustiveRun exhaustive_run(const LoccProtocol& protocol, const BipartiteState& initial,
                             const ExhaustiveOptions& opts) {
  validate(protocol);
  struct Live {
    History history;
    double probability;
    Eigen::MatrixXcd amps;
    SchmidtVector<double> schmidt;
  };
  std::vector<Live> live{{{}, 1.0, initial.amplitudes(), schmidt_decompose(initial)}};
  ExhaustiveRun run;
  auto snapshot = [&] {
    AuditLayer<double> layer;
    for (const auto& b : live) layer.push_back({b.probability, b.schmidt});
    run.layers.push_back(std::move(layer));
  };
  snapshot();

  for (std::size_t s = 0; s < protocol.steps.size(); ++s) {
    const LoccStep& step = protocol.steps[s];
    if (const auto* m = std::get_if<LocalMeasurement>(&step)) {
      std::vector<Live> next;
      for (const auto& b : live) {
        for (std::size_t o = 0; o < m->operators.size(); ++o) {
          check_party_dimension(m->operators[o], m->party, b.amps);
          Eigen::MatrixXcd amps = apply_local(m->operators[o], m->party, b.amps);
          const double q = amps.squaredNorm();
          if (q < opts.prune_below) continue;
          amps /= std::sqrt(q);
          History h = b.history;
          h.push_back({s, o});
          BipartiteState post(amps);
          next.push_back({std::move(h), b.probability * q, std::move(amps), schmidt_decompose(post)});
          if (next.size() > opts.branch_cap) {
            throw BranchCapExceeded("exhaustive enumeration exceeds the branch cap of " +
                                    std::to_string(opts.branch_cap));
          }
        }
      }
      live = std::move(next);
    } else if (const auto* u = std::get_if<LocalUnitary>(&step)) {
      for (auto& b : live) {
        if (u->condition && !holds(*u->condition, b.history)) continue;
        check_party_dimension(u->matrix, u->party, b.amps);
        b.amps = apply_local(u->matrix, u->party, b.amps);
      }
    }
    snapshot();
  }

  for (auto& b : live) {
    const bool success = is_success(protocol, b.history);
    if (success) run.success_probability += b.probability;
    run.branches.push_back({std::move(b.history), b.probability, BipartiteState(std::move(b.amps)), success});
  }
  return run;
}

SchmidtVector<Rational> ExactBranch::schmidt() const { return SchmidtVector<Rational>(weights); }

ExactExhaustiveRun exhaustive_run_exact(const LoccProtocol& protocol, const SchmidtVector<Rational>& initial,
                                        const ExhaustiveOptions& opts) {
  validate(protocol);
  const std::size_t n = protocol.dimension;
  if (initial.size() > n) throw InvalidInput("initial Schmidt vector is longer than the protocol dimension");
  ExactBranch root;
  root.probability = 1;
  root.weights = initial.padded(n).probs();
  for (std::size_t i = 0; i < n; ++i) {
    root.rows.push_back(i);
    root.cols.push_back(i);
  }
  std::vector<ExactBranch> live{root};
  ExactExhaustiveRun run;
  run.success_probability = 0;
  auto snapshot = [&] {
    AuditLayer<Rational> layer;
    for (const auto& b : live) layer.push_back({b.probability, b.schmidt()});
    run.layers.push_back(std::move(layer));
  };
  snapshot();

  for (std::size_t s = 0; s < protocol.steps.size(); ++s) {
    const LoccStep& step = protocol.steps[s];
    if (const auto* m = std::get_if<LocalMeasurement>(&step)) {
      if (!m->exact_squared_diagonals) {
        throw InvalidInput("step " + std::to_string(s) + " has no exact diagonal representation");
      }
      std::vector<ExactBranch> next;
      for (const auto& b : live) {
        for (std::size_t o = 0; o < m->operators.size(); ++o) {
          const std::vector<Rational>& diag = (*m->exact_squared_diagonals)[o];
          ExactBranch child = b;
          Rational q = 0;
          for (std::size_t i = 0; i < n; ++i) {
            const std::size_t level = m->party == Party::A ? b.rows[i] : b.cols[i];
            child.weights[i] *= diag[level];
            q += child.weights[i];
          }
          if (sgn(q) == 0) continue;
          for (Rational& w : child.weights) w /= q;
          child.probability *= q;
          child.history.push_back({s, o});
          next.push_back(std::move(child));
          if (next.size() > opts.branch_cap) {
            throw BranchCapExceeded("exhaustive enumeration exceeds the branch cap of " +
                                    std::to_string(opts.branch_cap));
          }
        }
      }
      live = std::move(next);
    } else if (const auto* u = std::get_if<LocalUnitary>(&step)) {
      if (!u->permutation) {
        throw InvalidInput("step " + std::to_string(s) + " is not a permutation; exact run needs one");
      }
      for (auto& b : live) {
        if (u->condition && !holds(*u->condition, b.history)) continue;
        auto& idx = u->party == Party::A ? b.rows : b.cols;
        for (auto& i : idx) i = (*u->permutation)[i];
      }
    }
    snapshot();
  }

  for (auto& b : live) {
    b.success = is_success(protocol, b.history);
    if (b.success) run.success_probability += b.probability;
    run.branches.push_back(std::move(b));
  }
  return run;
}

template <class T>
MonotoneAudit<T> monotone_audit(const std::vector<AuditLayer<T>>& layers, std::size_t k, double tolerance) {
  if (k < 1) throw InvalidInput("monotone index must be at least 1");
  MonotoneAudit<T> audit;
  audit.k = k;
  for (const auto& layer : layers) {
    T avg = 0;
    for (const auto& entry : layer) {
      if (k <= entry.schmidt.size()) avg += entry.weight * monotone_E(entry.schmidt, k);
    }
    audit.averages.push_back(avg);
  }
  for (std::size_t l = 1; l < audit.averages.size(); ++l) {
    const double increase = to_double(audit.averages[l]) - to_double(audit.averages[l - 1]);
    audit.max_increase = std::max(audit.max_increase, increase);
    if (definitely_less(audit.averages[l - 1], audit.averages[l], tolerance)) audit.non_increasing = false;
  }
  return audit;
}

template MonotoneAudit<double> monotone_audit(const std::vector<AuditLayer<double>>&, std::size_t, double);
template MonotoneAudit<Rational> monotone_audit(const std::vector<AuditLayer<Rational>>&, std::size_t, double);

TrialRng::TrialRng(std::uint64_t seed, std::uint64_t trial) {
  std::uint64_t key = trial;
  std::uint64_t mixed = splitmix64(key);
  state_ = seed ^ mixed;
  splitmix64(state_);
}

std::uint64_t TrialRng::next() { return splitmix64(state_); }

double TrialRng::uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

namespace {

struct BlockTally {
  std::uint64_t successes = 0;
  std::vector<double> sums;  // layer-major, k-minor
};

}  // namespace

SimulationReport monte_carlo_run(const LoccProtocol& protocol, const BipartiteState& initial,
                                 const MonteCarloOptions& opts) {
  if (opts.trials < 1) throw InvalidInput("trials must be at least 1");
  if (opts.block_size < 1) throw InvalidInput("block size must be at least 1");
  validate(protocol);
  const std::size_t layers = protocol.steps.size() + 1;
  const std::size_t levels = static_cast<std::size_t>(std::min(initial.dim_a(), initial.dim_b()));
  const std::vector<double> initial_profile = monotone_profile(schmidt_decompose(initial));

  auto run_trial = [&](std::uint64_t trial, BlockTally& tally) {
    TrialRng rng(opts.seed, trial);
    Eigen::MatrixXcd amps = initial.amplitudes();
    History history;
    std::vector<double> profile = initial_profile;
    for (std::size_t k = 0; k < levels; ++k) tally.sums[k] += profile[k];
    for (std::size_t s = 0; s < protocol.steps.size(); ++s) {
      const LoccStep& step = protocol.steps[s];
      bool changed = false;
      if (const auto* m = std::get_if<LocalMeasurement>(&step)) {
        std::vector<Eigen::MatrixXcd> outcomes;
        std::vector<double> probs;
        for (const auto& op : m->operators) {
          outcomes.push_back(apply_local(op, m->party, amps));
          probs.push_back(outcomes.back().squaredNorm());
        }
        double total = 0.0;
        for (double& p : probs) {
          if (p < opts.prune_below) p = 0.0;
          total += p;
        }
        const double u = rng.uniform() * total;
        std::size_t pick = probs.size() - 1;
        double acc = 0.0;
        for (std::size_t o = 0; o < probs.size(); ++o) {
          acc += probs[o];
          if (u < acc) {
            pick = o;
            break;
          }
        }
        while (probs[pick] == 0.0 && pick > 0) --pick;
        amps = outcomes[pick] / std::sqrt(probs[pick]);
        history.push_back({s, pick});
        changed = true;
      } else if (const auto* un = std::get_if<LocalUnitary>(&step)) {
        if (!un->condition || holds(*un->condition, history)) amps = apply_local(un->matrix, un->party, amps);
      }
      if (changed) profile = monotone_profile(schmidt_decompose(BipartiteState(amps, 1e-6)));
      for (std::size_t k = 0; k < levels; ++k) tally.sums[(s + 1) * levels + k] += profile[k];
    }
    if (is_success(protocol, history)) ++tally.successes;
  };

  const std::uint64_t block = opts.block_size;
  const std::uint64_t blocks = (opts.trials + block - 1) / block;
  std::vector<BlockTally> tallies(blocks);
  std::atomic<std::uint64_t> cursor{0};
  auto worker = [&] {
    for (std::uint64_t b = cursor++; b < blocks; b = cursor++) {
      BlockTally& tally = tallies[b];
      tally.sums.assign(layers * levels, 0.0);
      const std::uint64_t end = std::min(opts.trials, (b + 1) * block);
      for (std::uint64_t t = b * block; t < end; ++t) run_trial(t, tally);
    }
  };
  unsigned threads = opts.threads == 0 ? std::max(1u, std::thread::hardware_concurrency()) : opts.threads;
  threads = static_cast<unsigned>(std::min<std::uint64_t>(threads, blocks));
  if (threads <= 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    for (unsigned i = 0; i < threads; ++i) pool.emplace_back(worker);
  }

  SimulationReport report;
  report.trials = opts.trials;
  report.seed = opts.seed;
  report.predicted = protocol.predicted_success;
  std::vector<double> sums(layers * levels, 0.0);
  for (const auto& tally : tallies) {
    report.successes += tally.successes;
    for (std::size_t i = 0; i < sums.size(); ++i) sums[i] += tally.sums[i];
  }
  const double n = static_cast<double>(opts.trials);
  report.empirical = static_cast<double>(report.successes) / n;
  report.std_error = std::sqrt(report.empirical * (1.0 - report.empirical) / n);
  for (std::size_t l = 0; l < layers; ++l) {
    for (std::size_t k = 0; k < levels; ++k) report.audit.push_back({l, k + 1, sums[l * levels + k] / n});
  }
  return report;
}

}  // namespace locc
