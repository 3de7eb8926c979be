#include <gtest/gtest.h>

#include "locc/conversion.hpp"
#include "locc/monotones.hpp"
#include "locc/protocol.hpp"
#include "locc/simulator.hpp"
#include "test_support.hpp"

using namespace locc;
using namespace locc::testing;

namespace {

Eigen::MatrixXcd diag(std::initializer_list<double> d) {
  Eigen::VectorXcd v(static_cast<Eigen::Index>(d.size()));
  Eigen::Index i = 0;
  for (double x : d) v(i++) = x;
  return v.asDiagonal();
}

/// Applies y' = t y + (1 - t) P_{jk} y.
std::vector<Rational> apply_t(std::vector<Rational> y, const TTransform<Rational>& tt) {
  const Rational yj = y[tt.j];
  const Rational yk = y[tt.k];
  y[tt.j] = tt.t * yj + (1 - tt.t) * yk;
  y[tt.k] = tt.t * yk + (1 - tt.t) * yj;
  return y;
}

}  // namespace

TEST(ApplyMeasurement, IdentityLeavesStateUnchanged) {
  auto st = state_from_schmidt(SchmidtVector<double>({0.8, 0.2}));
  auto out = apply_measurement(st, Party::A, {Eigen::MatrixXcd::Identity(2, 2)});
  ASSERT_EQ(out.size(), 1u);
  EXPECT_NEAR(out[0].probability, 1.0, 1e-15);
  EXPECT_TRUE(out[0].post_state->amplitudes().isApprox(st.amplitudes(), 1e-15));
}

TEST(ApplyMeasurement, ProjectiveOnBell) {
  auto bell = state_from_schmidt(SchmidtVector<double>({0.5, 0.5}));
  for (Party party : {Party::A, Party::B}) {
    auto out = apply_measurement(bell, party, {diag({1, 0}), diag({0, 1})});
    ASSERT_EQ(out.size(), 2u);
    for (const auto& o : out) {
      EXPECT_NEAR(o.probability, 0.5, 1e-15);
      auto s = schmidt_decompose(*o.post_state);
      EXPECT_NEAR(s[0], 1.0, 1e-12);
    }
  }
}

TEST(ApplyMeasurement, FilterOnIntermediateGivesTarget) {
  auto gamma = state_from_schmidt(SchmidtVector<double>({0.5, 1.0 / 3, 1.0 / 6}));
  const double m0 = std::sqrt(2.0 / 3.0);
  auto out = apply_measurement(gamma, Party::A, {diag({m0, 1, 1}), diag({std::sqrt(1.0 / 3.0), 0, 0})});
  ASSERT_EQ(out.size(), 2u);
  EXPECT_NEAR(out[0].probability, 5.0 / 6.0, 1e-12);
  auto s = schmidt_decompose(*out[0].post_state);
  EXPECT_NEAR(s[0], 0.4, 1e-12);
  EXPECT_NEAR(s[1], 0.4, 1e-12);
  EXPECT_NEAR(s[2], 0.2, 1e-12);
  EXPECT_NEAR(out[1].probability, 1.0 / 6.0, 1e-12);
}

TEST(ApplyMeasurement, OnBActsOnColumns) {
  Eigen::MatrixXcd amps = Eigen::MatrixXcd::Zero(2, 2);
  amps(0, 1) = std::sqrt(0.7);
  amps(1, 0) = std::sqrt(0.3);
  auto out = apply_measurement(BipartiteState(amps), Party::B, {diag({1, 0}), diag({0, 1})});
  ASSERT_EQ(out.size(), 2u);
  EXPECT_NEAR(out[0].probability, 0.3, 1e-12);
  EXPECT_NEAR(out[1].probability, 0.7, 1e-12);
}

TEST(ApplyMeasurement, RejectsIncompleteOperators) {
  auto st = state_from_schmidt(SchmidtVector<double>({0.5, 0.5}));
  EXPECT_THROW(apply_measurement(st, Party::A, {diag({1, 0})}), InvalidInput);
  EXPECT_THROW(apply_measurement(st, Party::A, {Eigen::MatrixXcd::Identity(3, 3)}), InvalidInput);
}

TEST(ApplyMeasurement, ProbabilitiesSumToOne) {
  Rng rng(89);
  for (int trial = 0; trial < 100; ++trial) {
    const Eigen::Index n = 1 + trial % 4;
    auto st = random_state(rng, n, n);
    auto out = apply_measurement(st, trial % 2 ? Party::A : Party::B, random_measurement(rng, n, 1 + trial % 3));
    double total = 0.0;
    for (const auto& o : out) total += o.probability;
    EXPECT_NEAR(total, 1.0, 1e-12);
  }
}

TEST(Validate, RejectsMalformedProtocols) {
  LoccProtocol p;
  p.dimension = 2;
  p.steps.push_back(LocalMeasurement{Party::A, {diag({1, 0})}, std::nullopt});
  EXPECT_THROW(validate(p), InvalidInput);

  LoccProtocol u;
  u.dimension = 2;
  u.steps.push_back(LocalUnitary{Party::B, diag({1, 2}), std::nullopt, std::nullopt});
  EXPECT_THROW(validate(u), InvalidInput);

  LoccProtocol future;
  future.dimension = 2;
  future.steps.push_back(permutation_unitary(Party::A, {1, 0}, OutcomeCondition{1, 0}));
  future.steps.push_back(LocalMeasurement{Party::A, {diag({1, 0}), diag({0, 1})}, std::nullopt});
  EXPECT_THROW(validate(future), InvalidInput);

  LoccProtocol ok;
  ok.dimension = 2;
  ok.steps.push_back(LocalMeasurement{Party::A, {diag({1, 0}), diag({0, 1})}, std::nullopt});
  ok.steps.push_back(Announce{0});
  ok.steps.push_back(permutation_unitary(Party::B, {1, 0}, OutcomeCondition{0, 1}));
  EXPECT_NO_THROW(validate(ok));
  EXPECT_EQ(ok.measurement_count(), 1u);
}

TEST(TTransformChain, ReproducesSourceExactly) {
  Rng rng(97);
  int checked = 0;
  for (int trial = 0; trial < 2000 && checked < 300; ++trial) {
    const std::size_t n = 1 + trial % 6;
    auto a = random_rational_sv(rng, n, 1, 6);
    auto g = random_rational_sv(rng, n, 1, 6);
    if (!majorizes(a, g)) {
      EXPECT_THROW(t_transform_chain(a, g), Infeasible);
      continue;
    }
    ++checked;
    auto chain = t_transform_chain(a, g);
    EXPECT_LE(chain.size() + 1, std::max<std::size_t>(n, 1));
    std::vector<Rational> y = g.probs();
    for (const auto& tt : chain) {
      EXPECT_LT(tt.j, tt.k);
      EXPECT_GE(tt.t, 0);
      EXPECT_LE(tt.t, 1);
      y = apply_t(y, tt);
      EXPECT_TRUE(std::is_sorted(y.begin(), y.end(), std::greater<>()));
    }
    EXPECT_EQ(y, a.probs());
  }
  EXPECT_GE(checked, 100);
}

TEST(DeterministicProtocol, Examples) {
  auto a = sv({"1/2", "3/10", "1/5"});
  auto g = sv({"1/2", "1/3", "1/6"});
  auto proto = deterministic_protocol(a, g);
  validate(proto);
  auto run = exhaustive_run_exact(proto, a);
  EXPECT_EQ(run.success_probability, 1);
  for (const auto& b : run.branches) EXPECT_EQ(b.schmidt(), g);

  auto same = deterministic_protocol(a, a);
  EXPECT_EQ(same.measurement_count(), 0u);

  EXPECT_THROW(deterministic_protocol(g, a), Infeasible);
}

TEST(DeterministicProtocol, EveryBranchReachesTarget) {
  Rng rng(101);
  int checked = 0;
  for (int trial = 0; trial < 3000 && checked < 200; ++trial) {
    const std::size_t n = 1 + trial % 6;
    auto a = random_rational_sv(rng, n, 1, 6);
    auto g = random_rational_sv(rng, n, 1, 6);
    if (!majorizes(a, g)) continue;
    ++checked;
    auto proto = deterministic_protocol(a, g);
    validate(proto);
    auto exact = exhaustive_run_exact(proto, a);
    EXPECT_EQ(exact.success_probability, 1);
    for (const auto& b : exact.branches) EXPECT_EQ(b.schmidt(), g);

    auto flt = exhaustive_run(proto, state_from_schmidt(to_floating(a)));
    EXPECT_NEAR(flt.success_probability, 1.0, 1e-12);
    const auto gd = to_floating(g);
    for (const auto& b : flt.branches) {
      auto s = schmidt_decompose(b.state);
      for (std::size_t i = 0; i < n; ++i) EXPECT_NEAR(s[i], gd[i], 1e-9);
    }
  }
  EXPECT_GE(checked, 100);
}

TEST(FullProtocol, ExactSuccessEqualsPlanProbability) {
  Rng rng(103);
  for (int trial = 0; trial < 200; ++trial) {
    const std::size_t na = 1 + trial % 5, nb = 1 + (trial / 5) % 5;
    auto a = random_rational_sv(rng, na, 1, 8);
    auto b = random_rational_sv(rng, nb, 1, 8);
    if (a.rank() < b.rank()) continue;
    auto plan = build_plan(a, b);
    auto proto = build_full_protocol(plan);
    validate(proto);
    auto run = exhaustive_run_exact(proto, plan.source);
    EXPECT_EQ(run.success_probability, plan.probability);
    for (const auto& br : run.branches) {
      if (br.success) EXPECT_EQ(br.schmidt(), plan.target);
    }
    ASSERT_TRUE(proto.predicted_success.has_value());
    EXPECT_NEAR(*proto.predicted_success, plan.probability.get_d(), 1e-15);

    auto flt = exhaustive_run(proto, state_from_schmidt(to_floating(plan.source)));
    EXPECT_NEAR(flt.success_probability, plan.probability.get_d(), 1e-12);
  }
}

TEST(FullProtocol, RejectsInfeasiblePlan) {
  auto plan = build_plan(sv({"1", "0"}), sv({"1/2", "1/2"}));
  EXPECT_THROW(build_full_protocol(plan), Infeasible);
}

TEST(ExhaustiveRun, BranchCap) {
  LoccProtocol p;
  p.dimension = 2;
  for (int i = 0; i < 4; ++i) p.steps.push_back(LocalMeasurement{Party::A, {diag({1, 0}), diag({0, 1})}, std::nullopt});
  // Diagonal projectors on a Schmidt-form state leave only two live branches.
  auto bell = state_from_schmidt(SchmidtVector<double>({0.5, 0.5}));
  EXPECT_EQ(exhaustive_run(p, bell).branches.size(), 2u);

  LoccProtocol h;
  h.dimension = 2;
  Eigen::MatrixXcd plus = Eigen::MatrixXcd::Constant(2, 2, 0.5);
  Eigen::MatrixXcd minus = Eigen::MatrixXcd::Identity(2, 2) - plus;
  for (int i = 0; i < 3; ++i) {
    h.steps.push_back(LocalMeasurement{Party::A, {diag({1, 0}), diag({0, 1})}, std::nullopt});
    h.steps.push_back(LocalMeasurement{Party::A, {plus, minus}, std::nullopt});
  }
  EXPECT_EQ(exhaustive_run(h, bell).branches.size(), 64u);
  ExhaustiveOptions tight;
  tight.branch_cap = 10;
  EXPECT_THROW(exhaustive_run(h, bell, tight), BranchCapExceeded);
}

TEST(ExhaustiveRunExact, RejectsNonDiagonalSteps) {
  LoccProtocol p;
  p.dimension = 2;
  p.steps.push_back(LocalMeasurement{Party::A, {diag({1, 0}), diag({0, 1})}, std::nullopt});
  EXPECT_THROW(exhaustive_run_exact(p, sv({"1/2", "1/2"})), InvalidInput);
}

TEST(MonotoneAudit, FullProtocolNeverIncreasesAverages) {
  auto plan = build_plan(sv({"1/2", "3/10", "1/5"}), sv({"2/5", "2/5", "1/5"}));
  auto run = exhaustive_run_exact(build_full_protocol(plan), plan.source);
  auto audit = monotone_audit(run.layers, 3);
  EXPECT_TRUE(audit.non_increasing);
  EXPECT_EQ(audit.averages.front(), q("1/5"));
  EXPECT_EQ(audit.averages.back(), q("1/6"));
}

TEST(MonotoneAudit, RandomProtocolsNeverIncreaseAverages) {
  Rng rng(107);
  for (int trial = 0; trial < 100; ++trial) {
    const Eigen::Index n = 2 + trial % 3;
    auto proto = random_protocol(rng, n, 1 + trial % 3);
    validate(proto);
    auto run = exhaustive_run(proto, random_state(rng, n, n));
    for (std::size_t k = 1; k <= static_cast<std::size_t>(n); ++k) {
      auto audit = monotone_audit(run.layers, k);
      EXPECT_TRUE(audit.non_increasing) << "k=" << k << " increase=" << audit.max_increase;
    }
  }
}

TEST(MonotoneAudit, DetectsIncrease) {
  std::vector<AuditLayer<Rational>> layers = {{{1, sv({"1", "0"})}}, {{1, sv({"1/2", "1/2"})}}};
  auto audit = monotone_audit(layers, 2);
  EXPECT_FALSE(audit.non_increasing);
  EXPECT_NEAR(audit.max_increase, 0.5, 1e-15);
}

TEST(TrialRng, DependsOnlyOnSeedAndTrial) {
  TrialRng a(5, 17), b(5, 17), c(5, 18), d(6, 17);
  const auto x = a.next();
  EXPECT_EQ(x, b.next());
  EXPECT_NE(x, c.next());
  EXPECT_NE(x, d.next());
  TrialRng u(1, 1);
  for (int i = 0; i < 1000; ++i) {
    const double v = u.uniform();
    EXPECT_GE(v, 0.0);
    EXPECT_LT(v, 1.0);
  }
}

TEST(MonteCarlo, AgreesWithPrediction) {
  auto plan = build_plan(to_floating(sv({"4/5", "1/5"})), to_floating(sv({"1/2", "1/2"})));
  auto proto = build_full_protocol(plan);
  MonteCarloOptions opts;
  opts.trials = 100000;
  opts.seed = 42;
  auto report = monte_carlo_run(proto, state_from_schmidt(plan.source), opts);
  EXPECT_EQ(report.trials, 100000u);
  EXPECT_NEAR(report.empirical, 0.4, 3 * report.std_error);
  EXPECT_NEAR(report.std_error, std::sqrt(0.4 * 0.6 / 1e5), 1e-4);
  ASSERT_TRUE(report.predicted.has_value());
  EXPECT_NEAR(*report.predicted, 0.4, 1e-12);
}

TEST(MonteCarlo, DeterministicAcrossThreadCounts) {
  auto plan = build_plan(to_floating(sv({"1/2", "3/10", "1/5"})), to_floating(sv({"2/5", "2/5", "1/5"})));
  auto proto = build_full_protocol(plan);
  auto initial = state_from_schmidt(plan.source);
  MonteCarloOptions opts;
  opts.trials = 20000;
  opts.seed = 7;
  auto one = monte_carlo_run(proto, initial, opts);
  opts.threads = 4;
  auto four = monte_carlo_run(proto, initial, opts);
  EXPECT_EQ(one.successes, four.successes);
  EXPECT_EQ(one.empirical, four.empirical);
  ASSERT_EQ(one.audit.size(), four.audit.size());
  for (std::size_t i = 0; i < one.audit.size(); ++i) EXPECT_EQ(one.audit[i].avg_E, four.audit[i].avg_E);
  opts.seed = 8;
  EXPECT_NE(monte_carlo_run(proto, initial, opts).successes, one.successes);
}

TEST(MonteCarlo, CertainProtocolAlwaysSucceeds) {
  auto plan = build_plan(to_floating(sv({"1/2", "3/10", "1/5"})), to_floating(sv({"1/2", "1/3", "1/6"})));
  auto proto = build_full_protocol(plan);
  for (std::uint64_t seed : {0u, 1u, 99u}) {
    MonteCarloOptions opts;
    opts.trials = 2000;
    opts.seed = seed;
    EXPECT_EQ(monte_carlo_run(proto, state_from_schmidt(plan.source), opts).empirical, 1.0);
  }
}

TEST(MonteCarlo, ThreeStateCounterexampleReverseDirection) {
  auto plan = build_plan(to_floating(sv({"66/144", "66/144", "6/144", "6/144"})),
                         to_floating(sv({"108/144", "12/144", "12/144", "12/144"})));
  EXPECT_NEAR(plan.probability, 0.5, 1e-12);
  MonteCarloOptions opts;
  opts.trials = 100000;
  opts.seed = 17;
  auto report = monte_carlo_run(build_full_protocol(plan), state_from_schmidt(plan.source), opts);
  EXPECT_NEAR(report.empirical, 0.5, 3 * report.std_error);
}

TEST(MonotoneAudit, EmptyProtocolIsConstant) {
  LoccProtocol empty;
  empty.dimension = 3;
  auto run = exhaustive_run_exact(empty, sv({"1/2", "3/10", "1/5"}));
  auto audit = monotone_audit(run.layers, 2);
  EXPECT_TRUE(audit.non_increasing);
  for (const auto& v : audit.averages) EXPECT_EQ(v, q("1/2"));
}

TEST(MonotoneAudit, FinalStageExample) {
  auto plan = build_plan(sv({"1/2", "1/3", "1/6"}), sv({"2/5", "2/5", "1/5"}));
  auto run = exhaustive_run_exact(build_full_protocol(plan), plan.source);
  auto audit = monotone_audit(run.layers, 2);
  EXPECT_TRUE(audit.non_increasing);
  EXPECT_EQ(audit.averages.front(), q("1/2"));
  // (5/6) E_2(beta) + (1/6) E_2(failure branch); the failure branch is a
  // product state here, so its E_2 is 0.
  EXPECT_EQ(audit.averages.back(), q("5/6") * q("3/5"));
}
