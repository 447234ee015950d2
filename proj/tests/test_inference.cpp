#include "gcorr/inference.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <numeric>

#include "test_util.hpp"

using namespace gcorr;

TEST(Percentile, LinearInterpolation) {
  EXPECT_DOUBLE_EQ(percentile({1, 2, 3, 4}, 0.0), 1.0);
  EXPECT_DOUBLE_EQ(percentile({1, 2, 3, 4}, 1.0), 4.0);
  EXPECT_DOUBLE_EQ(percentile({1, 2, 3, 4}, 0.5), 2.5);
  EXPECT_DOUBLE_EQ(percentile({4, 1, 3, 2}, 0.25), 1.75);
}

TEST(TwoSidedPvalue, BoundaryArithmetic) {
  // all null replicates tie with the observed value: zero strict exceedances,
  // so the raw value 0 clamps to the floor 1/r
  std::vector<double> ties(20, 0.4);
  EXPECT_DOUBLE_EQ(two_sided_pvalue(0.4, ties), 1.0 / 20.0);
}

TEST(TwoSidedPvalue, ClampsToOne) {
  // observed in the middle of the null: raw two-sided value would exceed 1
  std::vector<double> nulls;
  for (int i = 0; i < 100; ++i) nulls.push_back(i < 50 ? -1.0 : 1.0);
  EXPECT_DOUBLE_EQ(two_sided_pvalue(0.0, nulls), 1.0);
}

TEST(TwoSidedPvalue, CountsCorrectSide) {
  // null mean 0, observed large: counts strict exceedances above
  std::vector<double> nulls = {-0.2, -0.1, 0.0, 0.1, 0.2, 0.9, 0.95, 1.0, -0.3, 0.05};
  // mean = 0.24 <= 0.8 -> count {0.9, 0.95, 1.0} = 3 -> 2*3/10
  EXPECT_DOUBLE_EQ(two_sided_pvalue(0.8, nulls), 0.6);
  // observed far below the mean: count strictly below
  EXPECT_DOUBLE_EQ(two_sided_pvalue(-0.25, nulls), 0.2);
}

TEST(PvalueTest, IdenticalGraphsHitTheFloor) {
  CorrelatedBernoulliParams params;
  params.bx = testutil::block2(0.7, 0.3);
  params.by = params.bx;
  params.rho = 0.0;
  params.z = make_assignment(100, {0.5, 0.5});
  Rng rng(1);
  const auto [x, y] = sample_correlated_bernoulli_sbm(params, rng);

  PvalueTestOptions opts;
  opts.method = GCorrMethod::dcorr;
  opts.k = 2;
  opts.replicates = 500;
  opts.seed = 7;
  const TestResult result = pvalue_test(x, x, opts);
  EXPECT_DOUBLE_EQ(result.observed, 1.0);
  for (double c0 : result.null_stats) EXPECT_LT(c0, 1.0);
  EXPECT_DOUBLE_EQ(result.pvalue, 1.0 / 500.0);
}

TEST(PvalueTest, RejectsTooFewReplicates) {
  Rng rng(2);
  const auto [x, y] = testutil::er_pair(20, 0.5, 0.5, 0.0, rng);
  PvalueTestOptions opts;
  opts.replicates = 10;
  EXPECT_THROW(pvalue_test(x, y, opts), ValidationError);
}

TEST(PvalueTest, ApproximatelyUniformUnderNull) {
  // light version of the validity acceptance criterion: 200 outer replicates,
  // ER null, alpha=0.05 rejection rate within a generous binomial band
  const int outer = 200;
  int rejections = 0;
  for (int t = 0; t < outer; ++t) {
    Rng rng(5000 + t);
    const auto [x, y] = testutil::er_pair(50, 0.5, 0.5, 0.0, rng);
    PvalueTestOptions opts;
    opts.method = GCorrMethod::dcorr;
    opts.k = 1;
    opts.replicates = 100;
    opts.seed = 100 + t;
    const TestResult result = pvalue_test(x, y, opts);
    rejections += result.pvalue < 0.05;
  }
  const double rate = double(rejections) / outer;
  EXPECT_GE(rate, 0.01);
  EXPECT_LE(rate, 0.11);
}

TEST(PvalueTest, NullStatsConcentrateAtTheBlockConstant) {
  // under conditional independence with block structure, the permuted
  // statistics sit near the model's nonzero constant (dcorr ~ 0.16 for the
  // 0.7/0.3 two-block setting), not near 0
  CorrelatedBernoulliParams params;
  params.bx = testutil::block2(0.7, 0.3);
  params.by = params.bx;
  params.rho = 0.0;
  params.z = make_assignment(100, {0.5, 0.5});
  Rng rng(17);
  const auto [x, y] = sample_correlated_bernoulli_sbm(params, rng);
  PvalueTestOptions opts;
  opts.method = GCorrMethod::dcorr;
  opts.k = 2;
  opts.replicates = 200;
  opts.seed = 18;
  const TestResult result = pvalue_test(x, y, opts);
  const double null_mean =
      std::accumulate(result.null_stats.begin(), result.null_stats.end(), 0.0) /
      result.null_stats.size();
  EXPECT_GT(null_mean, 0.1);
}

TEST(PvalueTest, BitIdenticalAcrossThreadCounts) {
  Rng rng(3);
  const auto [x, y] = testutil::er_pair(40, 0.5, 0.5, 0.3, rng);
  PvalueTestOptions opts;
  opts.method = GCorrMethod::dcorr;
  opts.k = 1;
  opts.replicates = 60;
  opts.seed = 99;
  opts.threads = 1;
  const TestResult serial = pvalue_test(x, y, opts);
  opts.threads = 4;
  const TestResult parallel = pvalue_test(x, y, opts);
  EXPECT_EQ(serial.pvalue, parallel.pvalue);
  EXPECT_EQ(serial.null_stats, parallel.null_stats);
}

TEST(PowerEstimate, PerfectCorrelationSaturates) {
  SbmModelSpec model;
  model.kind = SbmModelSpec::Kind::bernoulli;
  model.name = "er_equal";
  model.bx = Eigen::MatrixXd::Constant(1, 1, 0.5);
  model.by = model.bx;
  model.proportions = {1.0};
  PowerOptions opts;
  opts.replicates = 100;
  opts.seed = 11;
  const PowerResult result = power_estimate(model, 1.0, 20, GCorrMethod::dcorr, opts);
  EXPECT_DOUBLE_EQ(result.power, 1.0);
}

TEST(PowerEstimate, NullLevelNearAlpha) {
  SbmModelSpec model;
  model.kind = SbmModelSpec::Kind::bernoulli;
  model.name = "er_equal";
  model.bx = Eigen::MatrixXd::Constant(1, 1, 0.5);
  model.by = model.bx;
  model.proportions = {1.0};
  PowerOptions opts;
  opts.replicates = 500;
  opts.seed = 12;
  const PowerResult result = power_estimate(model, 0.0, 50, GCorrMethod::pearson, opts);
  EXPECT_GE(result.power, 0.02);
  EXPECT_LE(result.power, 0.09);
}

TEST(PowerEstimate, BitIdenticalAcrossThreadCounts) {
  SbmModelSpec model;
  model.kind = SbmModelSpec::Kind::bernoulli;
  model.name = "er";
  model.bx = Eigen::MatrixXd::Constant(1, 1, 0.5);
  model.by = model.bx;
  model.proportions = {1.0};
  PowerOptions opts;
  opts.replicates = 120;
  opts.seed = 31;
  opts.threads = 1;
  const PowerResult serial = power_estimate(model, 0.2, 25, GCorrMethod::dcorr, opts);
  opts.threads = 5;
  const PowerResult parallel = power_estimate(model, 0.2, 25, GCorrMethod::dcorr, opts);
  EXPECT_EQ(serial.power, parallel.power);
}

TEST(PowerEstimate, SharedSamplesMatchSingleRuns) {
  SbmModelSpec model;
  model.kind = SbmModelSpec::Kind::bernoulli;
  model.name = "er";
  model.bx = Eigen::MatrixXd::Constant(1, 1, 0.5);
  model.by = model.bx;
  model.proportions = {1.0};
  PowerOptions opts;
  opts.replicates = 150;
  opts.seed = 13;
  const auto multi = power_estimate_multi(
      model, 0.2, 30, {GCorrMethod::pearson, GCorrMethod::dcorr}, opts);
  const PowerResult solo = power_estimate(model, 0.2, 30, GCorrMethod::pearson, opts);
  EXPECT_DOUBLE_EQ(multi[0].power, solo.power);
}

TEST(NaivePearson, ZeroCorrelationNeverRejects) {
  EXPECT_DOUBLE_EQ(pearson_analytic_pvalue(0.0, 4950), 1.0);
}

TEST(NaivePearson, AnalyticPvalueMatchesTDistribution) {
  // r = 0.1, m = 100: t = 0.1*sqrt(98/0.99), df = 98
  const double p = pearson_analytic_pvalue(0.1, 100);
  EXPECT_NEAR(p, 0.32221736303061965, 1e-10);
}

TEST(NaivePearson, ValidForErNull) {
  SbmModelSpec model;
  model.kind = SbmModelSpec::Kind::bernoulli;
  model.name = "er";
  model.bx = Eigen::MatrixXd::Constant(1, 1, 0.5);
  model.by = model.bx;
  model.proportions = {1.0};
  PowerOptions opts;
  opts.replicates = 500;
  opts.seed = 21;
  const PowerResult result = naive_pearson_power(model, 0.0, 50, opts);
  EXPECT_GE(result.power, 0.02);
  EXPECT_LE(result.power, 0.09);
}

TEST(NaivePearson, InvalidForSbmNull) {
  SbmModelSpec model;
  model.kind = SbmModelSpec::Kind::bernoulli;
  model.name = "sbm";
  model.bx = testutil::block2(0.7, 0.3);
  model.by = model.bx;
  model.proportions = {0.5, 0.5};
  PowerOptions opts;
  opts.replicates = 300;
  opts.seed = 22;
  const PowerResult result = naive_pearson_power(model, 0.0, 100, opts);
  EXPECT_GT(result.power, 0.15);
}

TEST(PowerEstimate, SymmetricInRhoForSymmetricEr) {
  SbmModelSpec model;
  model.kind = SbmModelSpec::Kind::bernoulli;
  model.name = "er";
  model.bx = Eigen::MatrixXd::Constant(1, 1, 0.5);
  model.by = model.bx;
  model.proportions = {1.0};
  PowerOptions opts;
  opts.replicates = 300;
  opts.seed = 23;
  const PowerResult plus = power_estimate(model, 0.15, 60, GCorrMethod::dcorr, opts);
  PowerOptions opts2 = opts;
  opts2.seed = 24;
  const PowerResult minus = power_estimate(model, -0.15, 60, GCorrMethod::dcorr, opts2);
  EXPECT_NEAR(plus.power, minus.power, 0.12);
}

TEST(SbmModelSpec, FeasibleRhoIntersectsBlocks) {
  SbmModelSpec model;
  model.kind = SbmModelSpec::Kind::bernoulli;
  model.bx = testutil::block2(0.7, 0.3);
  model.by = testutil::block2(0.2, 0.5);
  model.proportions = {0.5, 0.5};
  const RhoBounds bounds = model.feasible_rho();
  EXPECT_NEAR(bounds.hi, 3.0 / 28.0, 1e-12);   // from the (0.7, 0.2) blocks
  EXPECT_NEAR(bounds.lo, -3.0 / 7.0, 1e-12);   // from the (0.3, 0.5) blocks
}
