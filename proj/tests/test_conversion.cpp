#include <gtest/gtest.h>

#include "locc/conversion.hpp"
#include "locc/monotones.hpp"
#include "test_support.hpp"

using namespace locc;
using namespace locc::testing;

namespace {

const auto kPsi1 = [] { return sv({"108/144", "12/144", "12/144", "12/144"}); };
const auto kPsi2 = [] { return sv({"66/144", "66/144", "6/144", "6/144"}); };
const auto kPsi3 = [] { return sv({"47/144", "47/144", "47/144", "3/144"}); };

/// Random pair with rank(alpha) >= rank(beta), lengths up to 6.
std::pair<SchmidtVector<Rational>, SchmidtVector<Rational>> random_feasible_pair(Rng& rng, int max_weight = 12) {
  std::uniform_int_distribution<std::size_t> len(1, 6);
  for (;;) {
    auto a = random_rational_sv(rng, len(rng), 1, max_weight);
    auto b = random_rational_sv(rng, len(rng), 1, max_weight);
    if (a.rank() >= b.rank()) return {a, b};
  }
}

}  // namespace

TEST(OptimalProbability, Examples) {
  EXPECT_EQ(optimal_probability(kPsi2(), kPsi2()), 1);
  EXPECT_EQ(optimal_probability(kPsi1(), kPsi2()), q("6/13"));
  EXPECT_EQ(optimal_probability(sv({"4/5", "1/5"}), sv({"1/2", "1/2"})), q("2/5"));
  EXPECT_EQ(optimal_probability(sv({"1", "0"}), sv({"1/2", "1/2"})), 0);
  EXPECT_EQ(optimal_probability(sv({"1"}), sv({"1/2", "1/2"})), 0);
}

TEST(OptimalProbability, MinimizerIsSmallestIndex) {
  auto m = minimize_tail_ratio(kPsi1(), kPsi2());
  EXPECT_EQ(m.minimizer, 2u);
  EXPECT_EQ(minimize_tail_ratio(kPsi2(), kPsi2()).minimizer, 1u);
  EXPECT_EQ(minimize_tail_ratio(sv({"1", "0"}), sv({"1/2", "1/2"})).minimizer, 0u);
}

TEST(OptimalProbability, MatchesBruteForce) {
  Rng rng(43);
  for (int trial = 0; trial < 500; ++trial) {
    std::uniform_int_distribution<std::size_t> len(1, 6);
    auto a = random_rational_sv(rng, len(rng), 1, 10);
    auto b = random_rational_sv(rng, len(rng), 1, 10);
    EXPECT_EQ(optimal_probability(a, b), brute_force_probability(a.probs(), b.probs()));
  }
}

TEST(OptimalProbability, FloatModeAgreesWithRational) {
  Rng rng(47);
  for (int trial = 0; trial < 300; ++trial) {
    auto [a, b] = random_feasible_pair(rng);
    EXPECT_NEAR(optimal_probability(to_floating(a), to_floating(b)), optimal_probability(a, b).get_d(), 1e-9);
  }
}

TEST(OptimalProbability, DeterministicIffMajorized) {
  Rng rng(53);
  int unit = 0;
  for (int trial = 0; trial < 2000; ++trial) {
    const std::size_t n = 1 + trial % 4;
    auto a = random_rational_sv(rng, n, 1, 4);
    auto b = random_rational_sv(rng, n, 1, 4);
    const bool deterministic = optimal_probability(a, b) == 1;
    unit += deterministic;
    EXPECT_EQ(deterministic, majorizes(a, b));
  }
  EXPECT_GT(unit, 100);
}

TEST(OptimalProbability, BoundedByEveryMonotoneRatio) {
  Rng rng(59);
  for (int trial = 0; trial < 300; ++trial) {
    auto [a0, b0] = random_feasible_pair(rng);
    auto [a, b] = pad_to_common(a0, b0);
    const Rational p = optimal_probability(a, b);
    for (std::size_t l = 1; l <= a.size(); ++l) {
      const Rational eb = monotone_E(b, l);
      if (eb > 0) EXPECT_LE(p, Rational(monotone_E(a, l) / eb));
    }
  }
}

TEST(OptimalProbability, IrreversibleUnlessEqual) {
  Rng rng(61);
  for (int trial = 0; trial < 2000; ++trial) {
    const std::size_t n = 1 + trial % 4;
    auto a = random_rational_sv(rng, n, 1, 3);
    auto b = random_rational_sv(rng, n, 1, 3);
    if (optimal_probability(a, b) == 1 && optimal_probability(b, a) == 1) EXPECT_EQ(a, b);
  }
}

TEST(Breakpoints, Examples) {
  auto same = breakpoints(sv({"1/2", "3/10", "1/5"}), sv({"1/2", "3/10", "1/5"}));
  EXPECT_EQ(same.boundaries, (std::vector<std::size_t>{4, 1}));
  EXPECT_EQ(same.ratios, std::vector<Rational>{1});

  auto three = breakpoints(sv({"1/2", "3/10", "1/5"}), sv({"2/5", "2/5", "1/5"}));
  EXPECT_EQ(three.boundaries, (std::vector<std::size_t>{4, 2, 1}));
  EXPECT_EQ(three.ratios, (std::vector<Rational>{q("5/6"), q("5/4")}));

  auto two = breakpoints(sv({"4/5", "1/5"}), sv({"1/2", "1/2"}));
  EXPECT_EQ(two.boundaries, (std::vector<std::size_t>{3, 2, 1}));
  EXPECT_EQ(two.ratios, (std::vector<Rational>{q("2/5"), q("8/5")}));

  EXPECT_THROW(breakpoints(sv({"1", "0"}), sv({"1/2", "1/2"})), Infeasible);
}

TEST(Breakpoints, ChainInvariants) {
  Rng rng(67);
  for (int trial = 0; trial < 500; ++trial) {
    auto [a0, b0] = random_feasible_pair(rng);
    auto [a, b] = pad_to_common(a0, b0);
    auto bp = breakpoints(a, b);
    ASSERT_EQ(bp.boundaries.front(), a.size() + 1);
    ASSERT_EQ(bp.boundaries.back(), 1u);
    ASSERT_EQ(bp.ratios.size() + 1, bp.boundaries.size());
    EXPECT_LE(bp.ratios.front(), 1);
    for (std::size_t j = 0; j < bp.ratios.size(); ++j) {
      EXPECT_GT(bp.boundaries[j], bp.boundaries[j + 1]);
      if (j + 1 < bp.ratios.size()) EXPECT_LT(bp.ratios[j], bp.ratios[j + 1]);
      Rational sa = 0, sb = 0;
      for (std::size_t i = bp.boundaries[j + 1]; i < bp.boundaries[j]; ++i) {
        sa += a[i - 1];
        sb += b[i - 1];
      }
      EXPECT_EQ(bp.ratios[j], Rational(sa / sb));
    }
  }
}

TEST(IntermediateState, Examples) {
  auto beta = sv({"1/2", "3/10", "1/5"});
  EXPECT_EQ(intermediate_state(breakpoints(beta, beta), beta), beta);

  auto target = sv({"2/5", "2/5", "1/5"});
  auto bp = breakpoints(sv({"1/2", "3/10", "1/5"}), target);
  EXPECT_EQ(intermediate_state(bp, target), sv({"1/2", "1/3", "1/6"}));

  auto bell = sv({"1/2", "1/2"});
  EXPECT_EQ(intermediate_state(breakpoints(sv({"4/5", "1/5"}), bell), bell), sv({"4/5", "1/5"}));
}

TEST(IntermediateState, RejectsMismatchedBreakpoints) {
  auto bp = breakpoints(sv({"4/5", "1/5"}), sv({"1/2", "1/2"}));
  EXPECT_THROW(intermediate_state(bp, sv({"1/2", "3/10", "1/5"})), InvalidInput);
  Breakpoints<Rational> broken{{3, 1}, {}};
  EXPECT_THROW(intermediate_state(broken, sv({"1/2", "1/2"})), InvalidInput);
}

TEST(IntermediateState, UnsortedChainIsReported) {
  // Not produced by breakpoints(); hand-made decreasing ratios make gamma
  // unsorted, which must be reported rather than silently reordered.
  Breakpoints<Rational> bad{{3, 2, 1}, {q("3/2"), q("1/2")}};
  auto beta = sv({"1/2", "1/2"});
  EXPECT_THROW(intermediate_state(bad, beta), std::logic_error);
  EXPECT_EQ(intermediate_state(bad, beta, {}, true), sv({"3/4", "1/4"}));
}

TEST(MeasurementOperators, Examples) {
  auto single = measurement_operators(Breakpoints<Rational>{{4, 1}, {1}});
  EXPECT_EQ(single.success_sq, (std::vector<Rational>{1, 1, 1}));
  EXPECT_EQ(single.failure_sq, (std::vector<Rational>{0, 0, 0}));

  auto three = measurement_operators(Breakpoints<Rational>{{4, 2, 1}, {q("5/6"), q("5/4")}});
  EXPECT_EQ(three.success_sq, (std::vector<Rational>{q("2/3"), 1, 1}));
  EXPECT_NEAR(three.success()(0, 0), std::sqrt(2.0 / 3.0), 1e-15);

  auto two = measurement_operators(Breakpoints<Rational>{{3, 2, 1}, {q("2/5"), q("8/5")}});
  EXPECT_EQ(two.success_sq, (std::vector<Rational>{q("1/4"), 1}));
  EXPECT_NEAR(two.success()(0, 0), 0.5, 1e-15);
  EXPECT_NEAR(two.failure()(0, 0), std::sqrt(0.75), 1e-15);
}

TEST(BuildPlan, Examples) {
  auto beta = sv({"1/2", "3/10", "1/5"});
  auto identity = build_plan(beta, beta);
  EXPECT_EQ(identity.probability, 1);
  EXPECT_EQ(*identity.intermediate, beta);
  EXPECT_EQ(identity.filter->success_sq, (std::vector<Rational>{1, 1, 1}));

  auto plan = build_plan(sv({"1/2", "3/10", "1/5"}), sv({"2/5", "2/5", "1/5"}));
  EXPECT_EQ(plan.probability, q("5/6"));
  EXPECT_EQ(*plan.intermediate, sv({"1/2", "1/3", "1/6"}));
  EXPECT_EQ(plan.filter->success_sq, (std::vector<Rational>{q("2/3"), 1, 1}));

  EXPECT_EQ(build_plan(kPsi2(), kPsi3()).probability, q("6/25"));

  auto impossible = build_plan(sv({"1", "0"}), sv({"1/2", "1/2"}));
  EXPECT_FALSE(impossible.feasible());
  EXPECT_EQ(impossible.probability, 0);
}

TEST(BuildPlan, InternalIdentities) {
  Rng rng(71);
  for (int trial = 0; trial < 500; ++trial) {
    auto [a0, b0] = random_feasible_pair(rng);
    auto plan = build_plan(a0, b0);
    ASSERT_TRUE(plan.feasible());
    const auto& a = plan.source;
    const auto& b = plan.target;
    const auto& g = *plan.intermediate;
    EXPECT_EQ(plan.probability, brute_force_probability(a.probs(), b.probs()));
    EXPECT_EQ(plan.probability, plan.breakpoints->ratios.front());
    // alpha is majorized by gamma, in tail form.
    for (std::size_t k = 1; k <= a.size(); ++k) EXPECT_GE(monotone_E(a, k), monotone_E(g, k));
    std::size_t failure_rank = 0;
    for (std::size_t i = 0; i < a.size(); ++i) {
      EXPECT_EQ(plan.filter->success_sq[i] + plan.filter->failure_sq[i], 1);
      EXPECT_EQ(g[i] * plan.filter->success_sq[i], plan.probability * b[i]);
      failure_rank += (g[i] * plan.filter->failure_sq[i]) != 0;
    }
    if (plan.probability < 1) EXPECT_LT(failure_rank, b.rank());
  }
}

TEST(BuildPlan, FloatModeIdentities) {
  Rng rng(73);
  for (int trial = 0; trial < 200; ++trial) {
    auto [ar, br] = random_feasible_pair(rng);
    auto plan = build_plan(to_floating(ar), to_floating(br));
    ASSERT_TRUE(plan.feasible());
    EXPECT_NEAR(plan.probability, optimal_probability(ar, br).get_d(), 1e-9);
    const Eigen::MatrixXd m = plan.filter->success();
    const Eigen::MatrixXd nn = plan.filter->failure();
    EXPECT_TRUE((m * m + nn * nn).isApprox(Eigen::MatrixXd::Identity(m.rows(), m.cols()), 1e-12));
    for (std::size_t i = 0; i < plan.target.size(); ++i) {
      const auto ii = static_cast<Eigen::Index>(i);
      EXPECT_NEAR(std::sqrt((*plan.intermediate)[i]) * m(ii, ii), std::sqrt(plan.probability * plan.target[i]),
                  1e-12);
    }
  }
}

TEST(MultiCopyBound, Examples) {
  auto two = multi_copy_bound(sv({"4/5", "1/5"}), sv({"1/2", "1/2"}));
  EXPECT_EQ(two.regime, CopyRegime::single_copy_optimal);
  EXPECT_EQ(two.m_max, q("2/5"));

  std::vector<Rational> nine(9, Rational(1, 9));
  std::vector<Rational> three(3, Rational(1, 3));
  auto big = multi_copy_bound(SchmidtVector<Rational>(nine), SchmidtVector<Rational>(three));
  EXPECT_EQ(big.source_rank, 9u);
  EXPECT_EQ(big.target_rank, 3u);
  EXPECT_EQ(big.regime, CopyRegime::multi_copy_possible);
}

TEST(MultiCopyBound, TwoCopiesImpossibleInSingleCopyRegime) {
  Rng rng(79);
  int checked = 0;
  for (int trial = 0; trial < 400; ++trial) {
    auto [a, b] = random_feasible_pair(rng);
    if (multi_copy_bound(a, b).regime != CopyRegime::single_copy_optimal) continue;
    ++checked;
    EXPECT_EQ(optimal_probability(a, tensor_power(b, 2)), 0);
  }
  EXPECT_GT(checked, 50);
}

TEST(TensorConversion, Examples) {
  auto a = sv({"1/2", "1/4", "1/4"});
  auto b = sv({"2/5", "2/5", "1/5"});
  EXPECT_EQ(tensor_conversion_probability(a, b, 1), q("5/6"));
  // Oracle: brute-force tail ratios over the enumerated 9-entry vectors.
  const Rational oracle = brute_force_probability(brute_force_tensor(a.probs(), 2), brute_force_tensor(b.probs(), 2));
  EXPECT_EQ(oracle, q("25/28"));
  EXPECT_EQ(tensor_conversion_probability(a, b, 2), oracle);
  EXPECT_GT(oracle, q("25/36"));
  EXPECT_THROW(tensor_conversion_probability(a, b, 0), InvalidInput);
}

TEST(TensorConversion, SuperMultiplicative) {
  Rng rng(83);
  for (int trial = 0; trial < 200; ++trial) {
    auto [a, b] = random_feasible_pair(rng, 6);
    const Rational p = optimal_probability(a, b);
    EXPECT_GE(tensor_conversion_probability(a, b, 2), Rational(p * p));
  }
}
