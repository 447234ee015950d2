#include "gcorr/permutation.hpp"

#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <vector>

#include "gcorr/statistics.hpp"
#include "test_util.hpp"

using namespace gcorr;

namespace {

std::vector<double> block_entries(const Eigen::MatrixXd& w,
                                  const std::vector<int>& z, int bi, int bj) {
  std::vector<double> out;
  const int n = static_cast<int>(w.rows());
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      if (z[i] == bi && z[j] == bj && i != j) out.push_back(w(i, j));
    }
  }
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace

TEST(BlockPermute, EveryVertexItsOwnBlockIsIdentity) {
  Rng sample_rng(1);
  const AdjacencyMatrix x = testutil::random_weighted_graph(12, sample_rng);
  CommunityAssignment z;
  z.k = 12;
  for (int i = 0; i < 12; ++i) z.z.push_back(i + 1);
  Rng rng(99);
  const AdjacencyMatrix out = block_permute(x, z, rng);
  EXPECT_TRUE(out.w.isApprox(x.w, 0.0));
}

TEST(BlockPermute, SingleBlockPreservesEdgeCountExactly) {
  Rng sample_rng(2);
  const AdjacencyMatrix x = testutil::er_graph(20, 0.3, sample_rng);
  const CommunityAssignment z = make_assignment(20, {1.0});
  Rng rng(5);
  const AdjacencyMatrix out = block_permute(x, z, rng);
  EXPECT_DOUBLE_EQ(out.w.sum(), x.w.sum());
  EXPECT_FALSE(out.w.isApprox(x.w, 0.0));  // overwhelmingly likely for n=20
}

TEST(BlockPermute, PerBlockMultisetsPreserved) {
  Rng master(3);
  for (int trial = 0; trial < 100; ++trial) {
    const int n = 8 + int(master.uniform_index(12));
    const AdjacencyMatrix x = testutil::random_weighted_graph(n, master);
    CommunityAssignment z;
    z.k = 2;
    for (int i = 0; i < n; ++i) z.z.push_back(1 + int(master.uniform_index(2)));
    if (std::count(z.z.begin(), z.z.end(), 1) == 0 ||
        std::count(z.z.begin(), z.z.end(), 2) == 0) {
      z.z[0] = 1;
      z.z[n - 1] = 2;
    }
    Rng rng(trial);
    const auto [sorted, sorted_z] = sort_vertices(x, z);
    const AdjacencyMatrix out = block_permute(x, z, rng);
    for (int bi = 1; bi <= 2; ++bi) {
      for (int bj = bi; bj <= 2; ++bj) {
        EXPECT_EQ(block_entries(out.w, sorted_z.z, bi, bj),
                  block_entries(sorted.w, sorted_z.z, bi, bj))
            << "trial " << trial << " block " << bi << "," << bj;
      }
    }
  }
}

TEST(BlockPermute, OutputSymmetricAndHollow) {
  Rng master(4);
  const AdjacencyMatrix x = testutil::random_weighted_graph(15, master);
  const CommunityAssignment z = make_assignment(15, {0.4, 0.6});
  Rng rng(7);
  const AdjacencyMatrix out = block_permute(x, z, rng);
  EXPECT_TRUE(out.w.isApprox(out.w.transpose(), 0.0));
  EXPECT_EQ(out.w.diagonal().cwiseAbs().maxCoeff(), 0.0);
}

TEST(BlockPermute, MarginalDensityPreservedPerBlock) {
  // permuted SBM draws should look like fresh draws from the same SBM:
  // per-block densities agree with the block probabilities
  CorrelatedBernoulliParams params;
  params.bx = testutil::block2(0.7, 0.3);
  params.by = params.bx;
  params.rho = 0.0;
  const int n = 60;
  params.z = make_assignment(n, {0.5, 0.5});
  Rng rng(11);
  double within = 0, across = 0, wc = 0, ac = 0;
  for (int rep = 0; rep < 200; ++rep) {
    const auto [x, y] = sample_correlated_bernoulli_sbm(params, rng);
    const AdjacencyMatrix perm = block_permute(x, params.z, rng);
    for (int i = 0; i < n; ++i) {
      for (int j = i + 1; j < n; ++j) {
        const bool same = (i < n / 2) == (j < n / 2);
        (same ? within : across) += perm.w(i, j);
        (same ? wc : ac) += 1.0;
      }
    }
  }
  EXPECT_NEAR(within / wc, 0.7, 4 * std::sqrt(0.21 / wc));
  EXPECT_NEAR(across / ac, 0.3, 4 * std::sqrt(0.21 / ac));
}

TEST(BlockPermute, DestroysEdgewiseCorrelation) {
  // correlated pair at rho=0.5; after block permutation the statistic drops
  // to the rho=0 level (0 for ER)
  Rng rng(12);
  const int reps = 120;
  double mean_raw = 0, mean_perm = 0;
  const CommunityAssignment z = make_assignment(60, {1.0});
  for (int rep = 0; rep < reps; ++rep) {
    const auto [x, y] = testutil::er_pair(60, 0.5, 0.5, 0.5, rng);
    mean_raw += pearson_graph(x, y).value;
    const AdjacencyMatrix perm = block_permute(x, z, rng);
    mean_perm += pearson_graph(perm, y).value;
  }
  mean_raw /= reps;
  mean_perm /= reps;
  EXPECT_GT(mean_raw, 0.45);
  EXPECT_NEAR(mean_perm, 0.0, 0.01);
}

TEST(BlockPermute, DimensionMismatchThrows) {
  Rng rng(13);
  const AdjacencyMatrix x = testutil::random_weighted_graph(6, rng);
  EXPECT_THROW(block_permute(x, CommunityAssignment{{1, 1, 1}, 1}, rng),
               DimensionMismatchError);
}

TEST(BlockPermute, SingletonAndTinyBlocksUnchanged) {
  Rng rng(14);
  const AdjacencyMatrix x = testutil::random_weighted_graph(3, rng);
  // blocks {v0}, {v1, v2}: only the off-diagonal rectangle (2 cells) and the
  // diagonal 2-block (1 cell, untouched) exist
  const CommunityAssignment z{{1, 2, 2}, 2};
  const AdjacencyMatrix out = block_permute(x, z, rng);
  EXPECT_DOUBLE_EQ(out.w(1, 2), x.w(1, 2));  // single-entry diag block kept
}
