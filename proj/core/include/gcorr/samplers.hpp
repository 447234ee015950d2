#pragma once

#include <utility>

#include "gcorr/graph.hpp"
#include "gcorr/rng.hpp"

namespace gcorr {

/// Feasible edge-correlation interval for a pair of Bernoulli marginals.
struct RhoBounds {
  double lo;
  double hi;

  bool contains(double rho) const {
    // endpoints are part of the feasible set; allow for tiny fp overshoot
    const double eps = 1e-12;
    return rho >= lo - eps && rho <= hi + eps;
  }
};

/// Block parameters for a pair of correlated Bernoulli SBM graphs sharing one
/// community assignment. bx/by are k x k symmetric block probability matrices.
struct CorrelatedBernoulliParams {
  Eigen::MatrixXd bx;
  Eigen::MatrixXd by;
  double rho = 0.0;
  CommunityAssignment z;

  void validate() const;
};

/// Block parameters for a pair of correlated Gaussian SBM graphs. Each edge
/// pair is bivariate normal with block-specific means/SDs and correlation rho.
struct CorrelatedGaussianParams {
  Eigen::MatrixXd mux;
  Eigen::MatrixXd muy;
  Eigen::MatrixXd sigx;
  Eigen::MatrixXd sigy;
  double rho = 0.0;
  CommunityAssignment z;

  void validate() const;
};

/// Closed feasible interval for the edge correlation of a Bernoulli pair with
/// marginals p and q:
///   max{-pq/((1-p)(1-q)), -(1-p)(1-q)/(pq)} <= rho
///                                     <= min{p(1-q)/(q(1-p)), q(1-p)/(p(1-q))}
/// Throws DegenerateMarginalError when p or q is 0 or 1 (interval collapses;
/// such marginals are only usable with rho = 0).
RhoBounds rho_bounds(double p, double q);

/// Success probabilities of Y conditioned on X=1 (first) and X=0 (second).
/// Values are clamped into [0,1] against fp overshoot of at most 1e-12.
std::pair<double, double> bernoulli_conditionals(double p, double q, double rho);

/// Draws one correlated Bernoulli pair: X ~ Bern(p), then Y from the
/// conditional with the exact target Pearson correlation rho.
std::pair<int, int> sample_correlated_bernoulli_edge(double p, double q,
                                                     double rho, Rng& rng);

/// Draws one correlated Gaussian pair via the Cholesky factor of the 2x2
/// covariance: X = mux + sigx*Z1, Y = muy + sigy*(rho*Z1 + sqrt(1-rho^2)*Z2).
std::pair<double, double> sample_correlated_gaussian_edge(double mux, double muy,
                                                          double sigx, double sigy,
                                                          double rho, Rng& rng);

/// Samples a correlated Bernoulli SBM pair. Every unordered vertex pair is
/// drawn independently with the block-specific marginals; iteration order is
/// the row-major upper triangle so a seed reproduces bit-identical graphs.
/// ER is the k = 1 special case.
std::pair<AdjacencyMatrix, AdjacencyMatrix> sample_correlated_bernoulli_sbm(
    const CorrelatedBernoulliParams& params, Rng& rng);

/// Samples a correlated Gaussian SBM pair (weighted graphs).
std::pair<AdjacencyMatrix, AdjacencyMatrix> sample_correlated_gaussian_sbm(
    const CorrelatedGaussianParams& params, Rng& rng);

}  // namespace gcorr
