#include "zoneseg/crf.hpp"

#include <cmath>
#include <random>

#include <gtest/gtest.h>

#include "oracles.hpp"
#include "zoneseg/error.hpp"

namespace zoneseg {
namespace {

using testing::CrfInstance;

CrfScores view(const CrfInstance& c) {
  return {c.emissions, c.transitions, c.start, c.end};
}

CrfInstance zeros(int length, int labels) {
  return {Eigen::MatrixXd::Zero(length, labels), Eigen::MatrixXd::Zero(labels, labels),
          Eigen::VectorXd::Zero(labels), Eigen::VectorXd::Zero(labels)};
}

TEST(CrfLogPartition, AllZeroScoresCountSequences) {
  const auto c = zeros(2, 3);
  EXPECT_NEAR(crf_log_partition(view(c)), 2.0 * std::log(3.0), 1e-12);
  EXPECT_NEAR(crf_log_partition(view(c)), 2.1972245773362196, 1e-12);
}

TEST(CrfLogPartition, SinglePositionIsLogSumExp) {
  auto c = zeros(1, 2);
  c.emissions << 0.3, -1.7;
  EXPECT_NEAR(crf_log_partition(view(c)), std::log(std::exp(0.3) + std::exp(-1.7)), 1e-12);
}

TEST(CrfLogPartition, MatchesEnumerationOnThreeByThree) {
  std::mt19937_64 rng(11);
  const auto c = testing::random_crf_instance(rng, 3, 3);
  EXPECT_NEAR(crf_log_partition(view(c)), testing::brute_log_partition(c), 1e-10);
}

TEST(CrfLogPartition, StableForLargeScores) {
  auto c = zeros(3, 2);
  c.emissions.setConstant(800.0);
  const double z = crf_log_partition(view(c));
  EXPECT_TRUE(std::isfinite(z));
  EXPECT_NEAR(z, 2400.0 + 3.0 * std::log(2.0), 1e-9);
}

TEST(CrfViterbi, HandEnumeratedExample) {
  auto c = zeros(3, 2);
  c.emissions << 2, 0, 0, 1, 1, 0;
  c.transitions << 1, 0, 0, 1;
  const auto result = crf_viterbi(view(c));
  EXPECT_EQ(result.labels, (std::vector<int>{0, 0, 0}));
  EXPECT_DOUBLE_EQ(result.score, 5.0);
}

TEST(CrfViterbi, SingleLabel) {
  auto c = zeros(4, 1);
  c.emissions << 1.5, -0.5, 2.0, 0.25;
  c.transitions << 0.75;
  c.start << 0.1;
  c.end << -0.2;
  const auto result = crf_viterbi(view(c));
  EXPECT_EQ(result.labels, (std::vector<int>{0, 0, 0, 0}));
  EXPECT_NEAR(result.score, 3.25 + 3 * 0.75 + 0.1 - 0.2, 1e-12);
}

TEST(CrfViterbi, TieGoesToLexicographicallySmallest) {
  // (0,1) and (1,0) both score 1; a right-to-left backtrace would give (1,0).
  auto c = zeros(2, 2);
  c.transitions << 0, 1, 1, 0;
  EXPECT_EQ(crf_viterbi(view(c)).labels, (std::vector<int>{0, 1}));

  const auto all_zero = zeros(3, 3);
  EXPECT_EQ(crf_viterbi(view(all_zero)).labels, (std::vector<int>{0, 0, 0}));
}

TEST(CrfViterbi, NeverExceedsLogPartition) {
  std::mt19937_64 rng(3);
  for (int i = 0; i < 50; ++i) {
    const auto c = testing::random_crf_instance(rng, 1 + i % 5, 1 + i % 4);
    EXPECT_LE(crf_viterbi(view(c)).score, crf_log_partition(view(c)) + 1e-12);
  }
}

TEST(CrfViterbi, MatchesBruteForceIncludingTies) {
  std::mt19937_64 rng(5);
  for (int i = 0; i < 200; ++i) {
    const int length = 1 + static_cast<int>(rng() % 5);
    const int labels = 1 + static_cast<int>(rng() % 4);
    const auto c = testing::random_crf_instance(rng, length, labels, i % 2 == 0);
    const auto expected = testing::brute_argmax(c);
    const auto got = crf_viterbi(view(c));
    ASSERT_EQ(got.labels, expected.labels) << "instance " << i;
    EXPECT_NEAR(got.score, expected.score, 1e-10);
  }
}

TEST(CrfMarginals, MatchEnumerationAndNormalize) {
  std::mt19937_64 rng(8);
  for (int i = 0; i < 40; ++i) {
    const auto c = testing::random_crf_instance(rng, 1 + i % 5, 1 + i % 4);
    const auto m = crf_marginals(view(c));
    const Eigen::MatrixXd expected = testing::brute_marginals(c);
    EXPECT_LT((m.unary - expected).cwiseAbs().maxCoeff(), 1e-10);
    for (Eigen::Index t = 0; t < m.unary.rows(); ++t) {
      EXPECT_NEAR(m.unary.row(t).sum(), 1.0, 1e-8);
      EXPECT_GE(m.unary.row(t).minCoeff(), 0.0);
    }
    for (std::size_t t = 0; t < m.pairwise.size(); ++t) {
      EXPECT_NEAR(m.pairwise[t].sum(), 1.0, 1e-8);
      // Pairwise marginals sum back to the unary ones.
      EXPECT_LT((m.pairwise[t].rowwise().sum() - m.unary.row(static_cast<Eigen::Index>(t)).transpose())
                    .cwiseAbs()
                    .maxCoeff(),
                1e-10);
    }
  }
}

TEST(CrfNll, UniformTwoLabelsIsLogTwo) {
  const auto c = zeros(1, 2);
  const std::vector<int> gold{1};
  EXPECT_NEAR(crf_nll_and_grad(view(c), gold).loss, std::log(2.0), 1e-12);
}

TEST(CrfNll, PeakedGoldPathHasNearZeroLoss) {
  std::mt19937_64 rng(2);
  auto c = zeros(4, 3);
  const std::vector<int> gold{2, 0, 1, 1};
  for (int t = 0; t < 4; ++t) c.emissions(t, gold[static_cast<std::size_t>(t)]) = 20.0;
  const auto result = crf_nll_and_grad(view(c), gold);
  EXPECT_LT(result.loss, 1e-3);
  EXPECT_GE(result.loss, 0.0);
  EXPECT_EQ(crf_viterbi(view(c)).labels, gold);
}

TEST(CrfNll, RejectsBadGold) {
  const auto c = zeros(2, 2);
  const std::vector<int> short_gold{0};
  const std::vector<int> out_of_range{0, 2};
  EXPECT_THROW(crf_nll_and_grad(view(c), short_gold), ValidationError);
  EXPECT_THROW(crf_nll_and_grad(view(c), out_of_range), ValidationError);
}

TEST(CrfNll, GradientsMatchFiniteDifferences) {
  std::mt19937_64 rng(21);
  for (int i = 0; i < 25; ++i) {
    const int length = 1 + i % 5;
    const int labels = 1 + (i / 5) % 4;
    auto c = testing::random_crf_instance(rng, length, labels);
    std::vector<int> gold(static_cast<std::size_t>(length));
    for (auto& y : gold) y = static_cast<int>(rng() % static_cast<unsigned>(labels));

    const auto analytic = crf_nll_and_grad(view(c), gold).grads;
    auto loss = [&] { return crf_nll_and_grad(view(c), gold).loss; };
    auto check = [&](Eigen::Ref<Eigen::MatrixXd> tensor, const Eigen::MatrixXd& expected) {
      const Eigen::VectorXd numeric = testing::finite_difference(tensor.data(), tensor.size(), loss);
      const Eigen::VectorXd flat = expected.reshaped();
      EXPECT_LT(testing::max_relative_error(flat, numeric), 1e-4);
    };
    check(c.emissions, analytic.emissions);
    check(c.transitions, analytic.transitions);
    check(c.start, analytic.start);
    check(c.end, analytic.end);
  }
}

TEST(Crf, ShapeErrors) {
  auto c = zeros(2, 3);
  c.transitions = Eigen::MatrixXd::Zero(2, 2);
  EXPECT_THROW(crf_log_partition(view(c)), DimensionMismatchError);
  const auto empty = zeros(0, 3);
  EXPECT_THROW(crf_viterbi(view(empty)), DimensionMismatchError);
}

}  // namespace
}  // namespace zoneseg
