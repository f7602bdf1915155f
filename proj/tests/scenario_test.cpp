#include <cmath>
#include <complex>
#include <stdexcept>
#include <string>
#include <vector>

#include <gtest/gtest.h>

#include "qpigeon/operator.hpp"
#include "qpigeon/pigeonhole.hpp"
#include "qpigeon/report.hpp"
#include "qpigeon/spectrum.hpp"
#include "qpigeon/state.hpp"
#include "qpigeon/tsvf.hpp"

namespace qpigeon {
namespace {

TEST(PreselectedState, UniformAmplitudesOverAllBoxStrings) {
  const StateVector pre = preselected_state();
  ASSERT_EQ(pre.dim(), 8);
  const double expected = std::pow(1.0 / std::sqrt(2.0), 3);
  for (int j = 0; j < 8; ++j) {
    EXPECT_NEAR(std::abs(pre.amplitude(j) - Complex(expected, 0.0)), 0.0,
                1e-15);
  }
  EXPECT_NEAR(norm_squared(pre), 1.0, 1e-14);
}

TEST(PostselectedState, PhasePowersCountRFactors) {
  const StateVector post = postselected_state();
  const double mag = 1.0 / (2.0 * std::sqrt(2.0));
  // "LLL": no R factors.
  EXPECT_NEAR(std::abs(post.amplitude(0) - Complex(mag, 0.0)), 0.0, 1e-15);
  // "RRR": i^3 = -i.
  EXPECT_NEAR(std::abs(post.amplitude(7) - Complex(0.0, -mag)), 0.0, 1e-15);
  // "LRL": one R factor, phase i.
  EXPECT_NEAR(std::abs(post.amplitude(2) - Complex(0.0, mag)), 0.0, 1e-15);
  // "LRR": two R factors, phase -1.
  EXPECT_NEAR(std::abs(post.amplitude(3) - Complex(-mag, 0.0)), 0.0, 1e-15);
  EXPECT_NEAR(norm_squared(post), 1.0, 1e-14);
}

TEST(PairProjector, DiagonalMatchesSameBoxStrings) {
  const Operator p01 = pair_projector(0, 1);
  const std::vector<double> expected = {1, 1, 0, 0, 0, 0, 1, 1};
  for (int j = 0; j < 8; ++j) {
    EXPECT_NEAR(std::abs(p01.at(j, j) - Complex(expected[static_cast<size_t>(j)], 0.0)),
                0.0, 0.0);
  }
  EXPECT_NEAR(std::abs(trace(p01) - Complex(4.0, 0.0)), 0.0, 0.0);
  EXPECT_NEAR(max_abs_diff(multiply(p01, p01), p01), 0.0, 0.0);
  EXPECT_TRUE(p01.has_flag(kProjector));
}

TEST(PairProjector, AllPairsHaveTraceFourAndCommute) {
  for (const auto& [a, b] : kPairOrder) {
    const Operator p = pair_projector(a, b);
    EXPECT_NEAR(std::abs(trace(p) - Complex(4.0, 0.0)), 0.0, 0.0);
  }
  const Operator p01 = pair_projector(0, 1);
  const Operator p02 = pair_projector(0, 2);
  EXPECT_NEAR(max_abs_diff(multiply(p01, p02), multiply(p02, p01)), 0.0,
              1e-14);
}

TEST(PairProjector, ArgumentOrderIsIrrelevant) {
  EXPECT_NEAR(max_abs_diff(pair_projector(2, 0), pair_projector(0, 2)), 0.0,
              0.0);
}

TEST(PairProjector, RejectsBadIndices) {
  EXPECT_THROW(pair_projector(1, 1), std::invalid_argument);
  EXPECT_THROW(pair_projector(-1, 0), std::invalid_argument);
  EXPECT_THROW(pair_projector(0, 3), std::invalid_argument);
}

TEST(TotalProjector, SumsPairsEntrywiseExactly) {
  const Operator total = total_projector();
  const Operator sum = add(add(pair_projector(0, 1), pair_projector(1, 2)),
                           pair_projector(0, 2));
  EXPECT_NEAR(max_abs_diff(total, sum), 0.0, 0.0);
  EXPECT_NEAR(std::abs(trace(total) - Complex(12.0, 0.0)), 0.0, 0.0);
  EXPECT_NEAR(std::abs(total.at(0, 0) - Complex(3.0, 0.0)), 0.0, 0.0);
  EXPECT_TRUE(total.has_flag(kHermitian));
  EXPECT_FALSE(total.has_flag(kProjector));
}

TEST(TotalProjector, SpectrumHasNoZeroEigenvalue) {
  // The classical counting principle holds for eigenstates: at least one
  // pair is always together, so no eigenvalue vanishes.
  const Spectrum s = hermitian_spectrum(total_projector());
  ASSERT_EQ(s.pairs.size(), 2u);
  EXPECT_NEAR(s.pairs[0].eigenvalue, 1.0, 1e-10);
  EXPECT_EQ(s.pairs[0].multiplicity, 6);
  EXPECT_NEAR(s.pairs[1].eigenvalue, 3.0, 1e-10);
  EXPECT_EQ(s.pairs[1].multiplicity, 2);
  for (const auto& pair : s.pairs) {
    EXPECT_GT(std::abs(pair.eigenvalue), 1e-8);
  }
}

TEST(Scenario, MatrixElementConsistencyBetweenPairsAndTotal) {
  const PigeonholeScenario scenario = PigeonholeScenario::standard();
  Complex pair_sum(0.0, 0.0);
  for (const auto& [key, p] : scenario.pair_projectors) {
    pair_sum += inner(scenario.post, apply(p, scenario.pre));
  }
  const double total_sq =
      std::norm(inner(scenario.post, apply(scenario.total, scenario.pre)));
  EXPECT_NEAR(total_sq, std::norm(pair_sum), 1e-12);
}

TEST(VerifyConundrum, AllChecksPassAtStandardTolerance) {
  const Report report = verify_conundrum(1e-10);
  EXPECT_TRUE(report.pass);
  EXPECT_GE(report.checks.size(), 17u);
  for (const auto& check : report.checks) {
    EXPECT_TRUE(check.pass) << check.name << ": expected " << check.expected
                            << ", actual " << check.actual;
  }
}

TEST(VerifyConundrum, FixedCheckOrder) {
  const Report report = verify_conundrum(1e-10);
  const std::vector<std::string> expected_names = {
      "matrix_element_pair_01", "matrix_element_pair_12",
      "matrix_element_pair_02", "matrix_element_total_abs_sq",
      "overlap_post_pre",       "weak_value_pair_01",
      "weak_value_pair_12",     "weak_value_pair_02",
      "weak_value_total",       "spectrum_total",
      "abl_pair_01",            "abl_pair_12",
      "abl_pair_02",            "abl_total",
      "certainty_pair_01",      "certainty_pair_12",
      "certainty_pair_02",      "certainty_total"};
  ASSERT_EQ(report.checks.size(), expected_names.size());
  for (size_t k = 0; k < expected_names.size(); ++k) {
    EXPECT_EQ(report.checks[k].name, expected_names[k]);
  }
}

TEST(VerifyConundrum, DeterministicAcrossRuns) {
  const Report a = verify_conundrum(1e-10);
  const Report b = verify_conundrum(1e-10);
  ASSERT_EQ(a.checks.size(), b.checks.size());
  for (size_t k = 0; k < a.checks.size(); ++k) {
    EXPECT_EQ(a.checks[k].name, b.checks[k].name);
    EXPECT_EQ(a.checks[k].expected, b.checks[k].expected);
    EXPECT_EQ(a.checks[k].actual, b.checks[k].actual);
    EXPECT_EQ(a.checks[k].pass, b.checks[k].pass);
  }
}

TEST(VerifyConundrum, ToleranceZeroRunsAndMarksExactChecks) {
  const Report report = verify_conundrum(0.0);
  // The pair matrix elements are identically zero in floating point, so
  // they pass even at tolerance 0; noisier checks may legitimately fail.
  for (const auto& check : report.checks) {
    if (check.name.rfind("matrix_element_pair_", 0) == 0) {
      EXPECT_TRUE(check.pass) << check.name;
    }
  }
}

TEST(VerifyConundrum, NegativeToleranceRejected) {
  EXPECT_THROW(verify_conundrum(-1e-10), std::invalid_argument);
}

TEST(VerifyConundrum, PostEqualsPreBreaksTheConundrum) {
  PigeonholeScenario scenario = PigeonholeScenario::standard();
  scenario.post = scenario.pre;
  const Report report = verify_conundrum(scenario, 1e-10);
  EXPECT_FALSE(report.pass);
  for (const auto& check : report.checks) {
    if (check.name.rfind("weak_value_pair_", 0) == 0) {
      EXPECT_FALSE(check.pass);
      EXPECT_EQ(check.actual, "0.5+0i");
    }
    if (check.name == "spectrum_total") {
      EXPECT_TRUE(check.pass);  // spectrum does not involve the states
    }
  }
}

TEST(SequentialPairs, SingleMeasuredPairIsNeverTogether) {
  const PigeonholeScenario scenario = PigeonholeScenario::standard();
  for (const auto& pair : kPairOrder) {
    const SequentialResult result =
        enumerate_sequential_pairs(scenario, {pair});
    ASSERT_EQ(result.branches.size(), 2u);
    EXPECT_NEAR(result.postselect_probability, 0.125, 1e-15);
    EXPECT_NEAR(result.first_pair_together, 0.0, 0.0);
    // Outcome branch probabilities are Born weights of |+++>.
    EXPECT_NEAR(result.branches[0].probability, 0.5, 1e-14);
    EXPECT_NEAR(result.branches[1].probability, 0.5, 1e-14);
  }
}

TEST(SequentialPairs, TwoPairOrderDisturbsTheSecondPair) {
  const PigeonholeScenario scenario = PigeonholeScenario::standard();
  const SequentialResult result =
      enumerate_sequential_pairs(scenario, {{0, 1}, {1, 2}});
  ASSERT_EQ(result.branches.size(), 4u);
  EXPECT_NEAR(result.postselect_probability, 0.125, 1e-15);
  // Every surviving branch carries joint weight exactly 1/32.
  for (const auto& branch : result.branches) {
    EXPECT_NEAR(branch.joint_postselected, 1.0 / 32.0, 1e-15);
  }
  EXPECT_NEAR(result.later_pair_together, 0.5, 1e-14);
  // With a later measurement appended, the first pair is no longer never-
  // together: the joint statistics change (sequential disturbance).
  EXPECT_NEAR(result.first_pair_together, 0.5, 1e-14);
}

TEST(SequentialPairs, ThreePairOrderRaisesLaterTogetherWeight) {
  const PigeonholeScenario scenario = PigeonholeScenario::standard();
  const SequentialResult result =
      enumerate_sequential_pairs(scenario, {{0, 1}, {1, 2}, {0, 2}});
  ASSERT_EQ(result.branches.size(), 8u);
  EXPECT_NEAR(result.postselect_probability, 0.125, 1e-15);
  EXPECT_NEAR(result.later_pair_together, 0.75, 1e-14);
}

TEST(SequentialPairs, PostselectProbabilityIndependentOfOrder) {
  const PigeonholeScenario scenario = PigeonholeScenario::standard();
  const std::vector<std::vector<std::pair<int, int>>> orders = {
      {{0, 1}, {1, 2}},
      {{1, 2}, {0, 1}},
      {{0, 2}, {0, 1}, {1, 2}},
      {{1, 2}, {0, 2}, {0, 1}}};
  for (const auto& order : orders) {
    const SequentialResult result =
        enumerate_sequential_pairs(scenario, order);
    EXPECT_NEAR(result.postselect_probability, 0.125, 1e-15);
  }
}

TEST(SequentialPairs, BranchProbabilitiesSumToOne) {
  const PigeonholeScenario scenario = PigeonholeScenario::standard();
  const SequentialResult result =
      enumerate_sequential_pairs(scenario, {{0, 1}, {0, 2}});
  double total = 0.0;
  for (const auto& branch : result.branches) total += branch.probability;
  EXPECT_NEAR(total, 1.0, 1e-14);
}

TEST(SequentialPairs, RejectsMalformedOrders) {
  const PigeonholeScenario scenario = PigeonholeScenario::standard();
  EXPECT_THROW(enumerate_sequential_pairs(scenario, {}),
               std::invalid_argument);
  EXPECT_THROW(enumerate_sequential_pairs(
                   scenario, {{0, 1}, {1, 2}, {0, 2}, {0, 1}}),
               std::invalid_argument);
  EXPECT_THROW(enumerate_sequential_pairs(scenario, {{0, 1}, {1, 0}}),
               std::invalid_argument);
  try {
    enumerate_sequential_pairs(scenario, {{0, 0}});
    FAIL() << "expected invalid_argument";
  } catch (const std::invalid_argument& e) {
    EXPECT_EQ(std::string(e.what()),
              "unknown pair in measurement order: (0, 0)");
  }
}

TEST(SequentialPairDemo, SinglePairReportAssertsZero) {
  const Report report = sequential_pair_demo({{0, 1}});
  EXPECT_TRUE(report.pass);
  ASSERT_EQ(report.checks.size(), 2u);
  EXPECT_EQ(report.checks[0].name, "postselection_probability");
  EXPECT_EQ(report.checks[1].name,
            "measured_pair_together_given_postselection");
  ASSERT_TRUE(report.data.has_value());
  const std::vector<std::string> columns = {"outcome_pair_01", "probability",
                                            "joint_postselected"};
  EXPECT_EQ(report.data->columns, columns);
  EXPECT_EQ(report.data->rows.size(), 2u);
}

TEST(SequentialPairDemo, MultiPairReportAssertsPositiveLaterWeight) {
  const Report report = sequential_pair_demo({{0, 1}, {1, 2}});
  EXPECT_TRUE(report.pass);
  ASSERT_EQ(report.checks.size(), 2u);
  EXPECT_EQ(report.checks[1].name, "later_pair_together_given_postselection");
  EXPECT_EQ(report.checks[1].expected, "> 0");
  EXPECT_EQ(report.checks[1].actual, "0.5");
  ASSERT_TRUE(report.data.has_value());
  EXPECT_EQ(report.data->rows.size(), 4u);
  ASSERT_EQ(report.data->columns.size(), 4u);
  EXPECT_EQ(report.data->columns[0], "outcome_pair_01");
  EXPECT_EQ(report.data->columns[1], "outcome_pair_12");
}

}  // namespace
}  // namespace qpigeon
