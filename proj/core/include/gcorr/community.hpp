#pragma once

#include <cstdint>
#include <optional>
#include <utility>
#include <vector>

#include "gcorr/graph.hpp"
#include "gcorr/rng.hpp"

namespace gcorr {

/// Latent vertex positions: one row per vertex.
struct Embedding {
  Eigen::MatrixXd coords;  // n x d

  Eigen::Index n() const { return coords.rows(); }
  int d() const { return static_cast<int>(coords.cols()); }
};

/// Full-covariance Gaussian mixture fitted by EM.
struct GmmModel {
  int k = 0;
  Eigen::VectorXd weights;                  // simplex of length k
  Eigen::MatrixXd means;                    // k x d
  std::vector<Eigen::MatrixXd> covariances; // k SPD d x d (after regularization)
  double loglik = 0.0;
  double bic = 0.0;  // -2*loglik + params*ln(n)
  bool converged = false;
  std::vector<double> loglik_history;

  /// Hard assignment by maximum responsibility; ties pick the lowest
  /// component index. Returns 0-based component indices.
  std::vector<int> predict(const Eigen::MatrixXd& points) const;
};

/// Adjacency spectral embedding: the d eigenpairs of largest magnitude give
/// coords = V |Lambda|^{1/2}. Eigenvector signs are fixed by forcing the
/// largest-magnitude entry positive so embeddings are deterministic.
/// An all-zero matrix embeds to zeros (with a warning) rather than erroring.
Embedding ase(const AdjacencyMatrix& x, int d);

/// Joint embedding of two vertex-matched graphs: column-concatenate the two
/// individual embeddings into an n x 2d matrix and keep the d leading left
/// singular vectors.
Embedding joint_embed(const AdjacencyMatrix& x1, const AdjacencyMatrix& x2, int d);

/// Zhu-Ghodsi profile-likelihood elbow: the split point of a nonincreasing
/// value sequence maximizing the two-piece common-variance Gaussian
/// likelihood. Ties resolve to the smallest split.
int select_dim(const std::vector<double>& singular_values);

/// EM fit of a k-component full-covariance GMM with k-means++ initialization,
/// 3 restarts (best log-likelihood kept), covariance floor added to the
/// diagonals, convergence at relative log-likelihood change < 1e-6 or 300
/// iterations.
GmmModel gmm_fit(const Embedding& embedding, int k, Rng& rng);

struct BlockEstimationOptions {
  std::optional<int> k;     // fixed component count; unset = BIC selection
  std::optional<int> d;     // fixed embedding dimension; unset = elbow choice
  int kmax = 0;             // BIC search upper bound; 0 = floor(sqrt(n))
  std::uint64_t seed = 0;
  int threads = 1;
};

struct BlockEstimationReport {
  CommunityAssignment assignment;
  int d_used = 0;
  int k_used = 0;                               // effective block count
  std::vector<std::pair<int, double>> bic_by_k; // (k, bic) for each fit
};

/// Joint community estimation: pick d from the spectrum of [X Y] (two
/// successive profile-likelihood elbows), embed both graphs jointly, and
/// cluster the embedding rows with a GMM — either at the given k or at the
/// best-BIC k in 1..kmax. Labels are compacted to 1..k_used in order of first
/// appearance.
BlockEstimationReport block_estimation(const AdjacencyMatrix& x,
                                       const AdjacencyMatrix& y,
                                       const BlockEstimationOptions& opts = {});

}  // namespace gcorr
