#pragma once

#include <Eigen/Dense>
#include <vector>

#include "gcorr/graph.hpp"
#include "gcorr/rng.hpp"
#include "gcorr/samplers.hpp"

namespace gcorr::testutil {

/// Random symmetric hollow matrix with entries uniform in [lo, hi).
inline AdjacencyMatrix random_weighted_graph(Eigen::Index n, Rng& rng,
                                             double lo = 0.0, double hi = 1.0) {
  Eigen::MatrixXd w = Eigen::MatrixXd::Zero(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = i + 1; j < n; ++j) {
      w(i, j) = w(j, i) = lo + (hi - lo) * rng.uniform();
    }
  }
  return AdjacencyMatrix{std::move(w), {}};
}

/// Single binary ER graph.
inline AdjacencyMatrix er_graph(Eigen::Index n, double p, Rng& rng) {
  Eigen::MatrixXd w = Eigen::MatrixXd::Zero(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = i + 1; j < n; ++j) {
      w(i, j) = w(j, i) = rng.bernoulli(p) ? 1.0 : 0.0;
    }
  }
  return AdjacencyMatrix{std::move(w), {}};
}

/// Correlated ER pair with equal marginals (convenience wrapper).
inline std::pair<AdjacencyMatrix, AdjacencyMatrix> er_pair(Eigen::Index n, double p,
                                                           double q, double rho,
                                                           Rng& rng) {
  CorrelatedBernoulliParams params;
  params.bx = Eigen::MatrixXd::Constant(1, 1, p);
  params.by = Eigen::MatrixXd::Constant(1, 1, q);
  params.rho = rho;
  params.z = make_assignment(n, {1.0});
  return sample_correlated_bernoulli_sbm(params, rng);
}

/// Two-block SBM parameter helper.
inline Eigen::MatrixXd block2(double diag, double off) {
  Eigen::MatrixXd b(2, 2);
  b << diag, off, off, diag;
  return b;
}

/// Classification error up to label swap for 2-block assignments (fraction).
inline double two_block_error(const std::vector<int>& truth,
                              const std::vector<int>& estimate) {
  std::size_t direct = 0, swapped = 0;
  for (std::size_t i = 0; i < truth.size(); ++i) {
    direct += truth[i] != estimate[i];
    swapped += truth[i] != 3 - estimate[i];
  }
  return static_cast<double>(std::min(direct, swapped)) / truth.size();
}

}  // namespace gcorr::testutil
