#include "gcorr/community.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <numeric>

#include "gcorr/samplers.hpp"
#include "test_util.hpp"

using namespace gcorr;

TEST(Ase, CompleteGraphRankOne) {
  const int n = 10;
  Eigen::MatrixXd w = Eigen::MatrixXd::Ones(n, n);
  w.diagonal().setZero();
  const Embedding e = ase(AdjacencyMatrix{w, {}}, 1);
  // leading eigenpair of J - I: eigenvalue n-1, uniform eigenvector; with the
  // sign rule every coordinate equals sqrt((n-1)/n)
  const double expected = std::sqrt((n - 1.0) / n);
  for (int i = 0; i < n; ++i) EXPECT_NEAR(e.coords(i, 0), expected, 1e-12);
}

TEST(Ase, TwoBlockSbmSeparates) {
  CorrelatedBernoulliParams params;
  params.bx = testutil::block2(0.7, 0.3);
  params.by = params.bx;
  params.rho = 0.0;
  const int n = 200;
  params.z = make_assignment(n, {0.5, 0.5});
  Rng rng(42);
  const auto [x, y] = sample_correlated_bernoulli_sbm(params, rng);
  const Embedding e = ase(x, 2);

  // silhouette-style separation of the planted split
  auto mean_dist = [&](int i, int lo, int hi) {
    double total = 0;
    int count = 0;
    for (int j = lo; j < hi; ++j) {
      if (j == i) continue;
      total += (e.coords.row(i) - e.coords.row(j)).norm();
      ++count;
    }
    return total / count;
  };
  double silhouette = 0;
  for (int i = 0; i < n; ++i) {
    const bool first = i < n / 2;
    const double own = mean_dist(i, first ? 0 : n / 2, first ? n / 2 : n);
    const double other = mean_dist(i, first ? n / 2 : 0, first ? n : n / 2);
    silhouette += (other - own) / std::max(own, other);
  }
  EXPECT_GT(silhouette / n, 0.5);
}

TEST(Ase, AllZeroGraphEmbedsToZeros) {
  const Embedding e = ase(AdjacencyMatrix{Eigen::MatrixXd::Zero(6, 6), {}}, 2);
  EXPECT_EQ(e.coords.cwiseAbs().maxCoeff(), 0.0);
}

TEST(Ase, PicksLargestMagnitudeEigenvalues) {
  // disconnected complete bipartite-ish structure has a large negative
  // eigenvalue; |lambda| ordering must include it
  const int n = 8;
  Eigen::MatrixXd w = Eigen::MatrixXd::Zero(n, n);
  for (int i = 0; i < n / 2; ++i) {
    for (int j = n / 2; j < n; ++j) w(i, j) = w(j, i) = 1.0;
  }
  // K_{4,4}: eigenvalues 4, -4, zeros. coords at d=2 pick 4 and -4
  const Embedding e = ase(AdjacencyMatrix{w, {}}, 2);
  const Eigen::MatrixXd gram = e.coords.transpose() * e.coords;
  EXPECT_NEAR(gram(0, 0), 4.0, 1e-9);
  EXPECT_NEAR(gram(1, 1), 4.0, 1e-9);
}

TEST(Ase, LowRankReconstruction) {
  CorrelatedBernoulliParams params;
  params.bx = testutil::block2(0.8, 0.2);
  params.by = params.bx;
  params.rho = 0.0;
  params.z = make_assignment(150, {0.5, 0.5});
  Rng rng(7);
  const auto [x, y] = sample_correlated_bernoulli_sbm(params, rng);
  const Embedding e = ase(x, 2);
  // both leading eigenvalues of an assortative 2-block SBM are positive, so
  // coords*coords' is the best rank-2 approximation
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(x.w);
  Eigen::VectorXd ev = es.eigenvalues();
  std::sort(ev.data(), ev.data() + ev.size(),
            [](double a, double b) { return std::abs(a) > std::abs(b); });
  double best_rank2 = 0;
  for (int i = 2; i < ev.size(); ++i) best_rank2 += ev(i) * ev(i);
  const double resid = (e.coords * e.coords.transpose() - x.w).squaredNorm();
  EXPECT_LE(resid, best_rank2 + 1e-6);
}

TEST(JointEmbed, DuplicatedGraphSpansAseSpace) {
  Rng rng(3);
  const AdjacencyMatrix x = testutil::er_graph(40, 0.4, rng);
  const Embedding joint = joint_embed(x, x, 2);
  const Embedding single = ase(x, 2);
  // principal angles ~ 0: projection of joint coords onto ASE spans keeps norm
  Eigen::BDCSVD<Eigen::MatrixXd> svd(single.coords, Eigen::ComputeThinU);
  const Eigen::MatrixXd basis = svd.matrixU();
  const double before = joint.coords.squaredNorm();
  const double after = (basis * (basis.transpose() * joint.coords)).squaredNorm();
  EXPECT_NEAR(after / before, 1.0, 1e-9);
}

TEST(JointEmbed, SymmetricInArgumentsUpToRotation) {
  CorrelatedBernoulliParams params;
  params.bx = testutil::block2(0.7, 0.3);
  params.by = testutil::block2(0.2, 0.5);
  params.rho = 0.0;
  params.z = make_assignment(80, {0.5, 0.5});
  Rng rng(29);
  const auto [x, y] = sample_correlated_bernoulli_sbm(params, rng);
  const Embedding ab = joint_embed(x, y, 2);
  const Embedding ba = joint_embed(y, x, 2);
  // spans coincide: projecting one embedding onto the other's column space
  // preserves its norm (principal angles ~ 0)
  Eigen::BDCSVD<Eigen::MatrixXd> svd(ba.coords, Eigen::ComputeThinU);
  const Eigen::MatrixXd basis = svd.matrixU();
  const double kept = (basis * (basis.transpose() * ab.coords)).squaredNorm();
  EXPECT_NEAR(kept / ab.coords.squaredNorm(), 1.0, 1e-9);
}

TEST(JointEmbed, CompleteGraphsGiveConstantColumn) {
  const int n = 12;
  Eigen::MatrixXd w = Eigen::MatrixXd::Ones(n, n);
  w.diagonal().setZero();
  const AdjacencyMatrix x{w, {}};
  const Embedding e = joint_embed(x, x, 1);
  const double first = std::abs(e.coords(0, 0));
  for (int i = 0; i < n; ++i) EXPECT_NEAR(std::abs(e.coords(i, 0)), first, 1e-10);
}

namespace {

// Brute-force profile likelihood for the elbow, written independently of the
// production implementation.
int elbow_oracle(const std::vector<double>& s) {
  const int n = static_cast<int>(s.size());
  int best_q = 1;
  double best = -1e300;
  for (int q = 1; q < n; ++q) {
    double m1 = 0, m2 = 0;
    for (int i = 0; i < q; ++i) m1 += s[i];
    for (int i = q; i < n; ++i) m2 += s[i];
    m1 /= q;
    m2 /= (n - q);
    double ss = 0;
    for (int i = 0; i < q; ++i) ss += (s[i] - m1) * (s[i] - m1);
    for (int i = q; i < n; ++i) ss += (s[i] - m2) * (s[i] - m2);
    const double var = std::max(ss / n, 1e-300);
    const double ll = -0.5 * n * (std::log(2 * M_PI * var) + 1.0);
    if (ll > best + 1e-12) {
      best = ll;
      best_q = q;
    }
  }
  return best_q;
}

}  // namespace

TEST(SelectDim, KnownElbows) {
  EXPECT_EQ(select_dim({10, 9.5, 0.1, 0.09, 0.08}), 2);
  EXPECT_EQ(select_dim({1, 1, 1, 1}), 1);
  EXPECT_EQ(select_dim({100, 1, 1}), 1);
}

TEST(SelectDim, MatchesBruteForceOracle) {
  Rng rng(9);
  for (int trial = 0; trial < 50; ++trial) {
    const int n = 4 + int(rng.uniform_index(30));
    std::vector<double> values(n);
    for (double& v : values) v = rng.uniform() * 10;
    std::sort(values.rbegin(), values.rend());
    EXPECT_EQ(select_dim(values), elbow_oracle(values));
  }
}

TEST(GmmFit, SingleComponentClosedForm) {
  Rng data_rng(10);
  const int n = 60;
  Eigen::MatrixXd pts(n, 2);
  for (int i = 0; i < n; ++i) {
    pts(i, 0) = data_rng.normal();
    pts(i, 1) = 0.5 * data_rng.normal() + 1.0;
  }
  Rng rng(1);
  const GmmModel model = gmm_fit(Embedding{pts}, 1, rng);
  EXPECT_TRUE(model.converged);
  const Eigen::RowVectorXd mean = pts.colwise().mean();
  EXPECT_TRUE(model.means.row(0).isApprox(mean, 1e-9));
  // analytic max log-likelihood of a single Gaussian with MLE parameters
  const Eigen::MatrixXd centered = pts.rowwise() - mean;
  Eigen::MatrixXd cov = centered.transpose() * centered / double(n);
  const double logdet = std::log(cov.determinant());
  const double analytic = -0.5 * n * (2 * std::log(2 * M_PI) + logdet + 2);
  EXPECT_NEAR(model.loglik, analytic, 1e-3 * std::abs(analytic));
}

TEST(GmmFit, RecoversSeparatedClusters) {
  Rng data_rng(11);
  const int per = 50;
  Eigen::MatrixXd pts(2 * per, 2);
  for (int i = 0; i < per; ++i) {
    pts(i, 0) = 0.15 * data_rng.normal();
    pts(i, 1) = 0.15 * data_rng.normal();
    pts(per + i, 0) = 3.0 + 0.15 * data_rng.normal();
    pts(per + i, 1) = 3.0 + 0.15 * data_rng.normal();
  }
  Rng rng(2);
  const GmmModel model = gmm_fit(Embedding{pts}, 2, rng);
  EXPECT_TRUE(model.converged);
  const bool first_is_origin = model.means(0, 0) < 1.5;
  const Eigen::RowVector2d origin_mean = model.means.row(first_is_origin ? 0 : 1);
  const Eigen::RowVector2d far_mean = model.means.row(first_is_origin ? 1 : 0);
  EXPECT_NEAR(origin_mean(0), 0.0, 0.1);
  EXPECT_NEAR(origin_mean(1), 0.0, 0.1);
  EXPECT_NEAR(far_mean(0), 3.0, 0.1);
  EXPECT_NEAR(far_mean(1), 3.0, 0.1);
}

TEST(GmmFit, LogLikelihoodNondecreasing) {
  Rng data_rng(12);
  Eigen::MatrixXd pts(80, 2);
  for (int i = 0; i < 80; ++i) {
    pts(i, 0) = data_rng.normal();
    pts(i, 1) = data_rng.normal() + (i % 3);
  }
  Rng rng(3);
  const GmmModel model = gmm_fit(Embedding{pts}, 3, rng);
  for (std::size_t i = 1; i < model.loglik_history.size(); ++i) {
    EXPECT_GE(model.loglik_history[i],
              model.loglik_history[i - 1] - 1e-7 * (1 + std::abs(model.loglik_history[i - 1])))
        << "iteration " << i;
  }
}

TEST(GmmFit, DeterministicGivenSeed) {
  Rng data_rng(13);
  Eigen::MatrixXd pts(50, 2);
  for (int i = 0; i < 50; ++i) {
    pts(i, 0) = data_rng.normal();
    pts(i, 1) = data_rng.normal();
  }
  Rng rng1(77), rng2(77);
  const GmmModel a = gmm_fit(Embedding{pts}, 2, rng1);
  const GmmModel b = gmm_fit(Embedding{pts}, 2, rng2);
  EXPECT_EQ(a.loglik, b.loglik);
  EXPECT_TRUE(a.means.isApprox(b.means, 0.0));
}

TEST(GmmFit, BicFormula) {
  Rng data_rng(14);
  Eigen::MatrixXd pts(40, 2);
  for (int i = 0; i < 40; ++i) {
    pts(i, 0) = data_rng.normal();
    pts(i, 1) = data_rng.normal();
  }
  Rng rng(4);
  const GmmModel model = gmm_fit(Embedding{pts}, 3, rng);
  const double params = (3 - 1) + 3 * 2 + 3 * 2 * 3 / 2.0;
  EXPECT_NEAR(model.bic, -2 * model.loglik + params * std::log(40.0), 1e-9);
}

TEST(BlockEstimation, RecoversPlantedTwoBlocks) {
  CorrelatedBernoulliParams params;
  params.bx = testutil::block2(0.7, 0.3);
  params.by = params.bx;
  params.rho = 0.0;
  const int n = 200;
  params.z = make_assignment(n, {0.5, 0.5});
  int failures = 0;
  for (int trial = 0; trial < 10; ++trial) {
    Rng rng(1000 + trial);
    const auto [x, y] = sample_correlated_bernoulli_sbm(params, rng);
    BlockEstimationOptions opts;
    opts.k = 2;
    opts.seed = trial;
    const BlockEstimationReport report = block_estimation(x, y, opts);
    ASSERT_EQ(report.assignment.k, 2);
    const double err = testutil::two_block_error(params.z.z, report.assignment.z);
    if (err > 0.02) ++failures;
  }
  EXPECT_LE(failures, 1);
}

TEST(BlockEstimation, RecoversTwoBlocksWithUnequalMarginalsAtSmallN) {
  // the estimated-assignment power rows rely on accurate recovery at n = 100
  // with different block matrices per graph
  CorrelatedBernoulliParams params;
  params.bx = testutil::block2(0.7, 0.3);
  params.by = testutil::block2(0.2, 0.5);
  params.rho = 0.0;
  const int n = 100;
  params.z = make_assignment(n, {0.5, 0.5});
  int failures = 0;
  for (int trial = 0; trial < 20; ++trial) {
    Rng rng(4000 + trial);
    const auto [x, y] = sample_correlated_bernoulli_sbm(params, rng);
    BlockEstimationOptions opts;
    opts.k = 2;
    opts.seed = trial;
    const BlockEstimationReport report = block_estimation(x, y, opts);
    if (testutil::two_block_error(params.z.z, report.assignment.z) > 0.05) ++failures;
  }
  EXPECT_LE(failures, 1);
}

TEST(BlockEstimation, BicSelectsTwoBlocks) {
  CorrelatedBernoulliParams params;
  params.bx = testutil::block2(0.7, 0.3);
  params.by = params.bx;
  params.rho = 0.0;
  params.z = make_assignment(200, {0.5, 0.5});
  Rng rng(55);
  const auto [x, y] = sample_correlated_bernoulli_sbm(params, rng);
  BlockEstimationOptions opts;
  opts.seed = 5;
  opts.kmax = 6;
  const BlockEstimationReport report = block_estimation(x, y, opts);
  EXPECT_EQ(report.k_used, 2);
  EXPECT_EQ(report.bic_by_k.size(), 6u);
}

TEST(BlockEstimation, ForcedSingleBlock) {
  Rng rng(16);
  const AdjacencyMatrix x = testutil::er_graph(30, 0.4, rng);
  const AdjacencyMatrix y = testutil::er_graph(30, 0.4, rng);
  BlockEstimationOptions opts;
  opts.k = 1;
  const BlockEstimationReport report = block_estimation(x, y, opts);
  EXPECT_EQ(report.k_used, 1);
  for (int label : report.assignment.z) EXPECT_EQ(label, 1);
}

TEST(BlockEstimation, SelectsDimensionTwoForTwoBlockSbm) {
  CorrelatedBernoulliParams params;
  params.bx = testutil::block2(0.7, 0.3);
  params.by = testutil::block2(0.2, 0.5);
  params.rho = 0.0;
  params.z = make_assignment(200, {0.5, 0.5});
  Rng rng(17);
  const auto [x, y] = sample_correlated_bernoulli_sbm(params, rng);
  BlockEstimationOptions opts;
  opts.k = 2;
  const BlockEstimationReport report = block_estimation(x, y, opts);
  EXPECT_EQ(report.d_used, 2);
}
