#include "gcorr/samplers.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace gcorr {

namespace {

bool is_probability(double p) { return p >= 0.0 && p <= 1.0; }

void check_block_matrix(const Eigen::MatrixXd& b, int k, const char* name) {
  if (b.rows() != k || b.cols() != k) {
    throw DimensionMismatchError(std::string(name) + " must be " +
                                 std::to_string(k) + "x" + std::to_string(k));
  }
  if (!b.isApprox(b.transpose())) {
    throw ValidationError(std::string(name) + " must be symmetric (undirected SBM)");
  }
}

double clamp_probability(double p) {
  if (p < 0.0) {
    if (p < -1e-12) {
      throw RhoOutOfRangeError("conditional probability " + std::to_string(p) +
                               " < 0; rho outside the feasible interval");
    }
    return 0.0;
  }
  if (p > 1.0) {
    if (p > 1.0 + 1e-12) {
      throw RhoOutOfRangeError("conditional probability " + std::to_string(p) +
                               " > 1; rho outside the feasible interval");
    }
    return 1.0;
  }
  return p;
}

}  // namespace

RhoBounds rho_bounds(double p, double q) {
  if (!is_probability(p) || !is_probability(q)) {
    throw ValidationError("marginal probabilities must lie in [0,1]");
  }
  if (p == 0.0 || p == 1.0 || q == 0.0 || q == 1.0) {
    throw DegenerateMarginalError(
        "feasible rho interval collapses for marginal 0 or 1; use rho = 0");
  }
  const double lo = std::max(-(p * q) / ((1.0 - p) * (1.0 - q)),
                             -((1.0 - p) * (1.0 - q)) / (p * q));
  const double hi = std::min((p * (1.0 - q)) / (q * (1.0 - p)),
                             (q * (1.0 - p)) / (p * (1.0 - q)));
  return RhoBounds{lo, hi};
}

std::pair<double, double> bernoulli_conditionals(double p, double q, double rho) {
  if (p == 0.0 || p == 1.0 || q == 0.0 || q == 1.0) {
    if (rho != 0.0) {
      throw RhoOutOfRangeError("degenerate marginal requires rho = 0");
    }
    return {q, q};
  }
  if (!rho_bounds(p, q).contains(rho)) {
    throw RhoOutOfRangeError("rho=" + std::to_string(rho) +
                             " outside feasible interval for p=" + std::to_string(p) +
                             ", q=" + std::to_string(q));
  }
  const double given_one = q + rho * std::sqrt((1.0 - p) / p * q * (1.0 - q));
  const double given_zero = q - rho * std::sqrt(p / (1.0 - p) * q * (1.0 - q));
  return {clamp_probability(given_one), clamp_probability(given_zero)};
}

std::pair<int, int> sample_correlated_bernoulli_edge(double p, double q,
                                                     double rho, Rng& rng) {
  const auto [given_one, given_zero] = bernoulli_conditionals(p, q, rho);
  const int x = rng.bernoulli(p) ? 1 : 0;
  const int y = rng.bernoulli(x == 1 ? given_one : given_zero) ? 1 : 0;
  return {x, y};
}

std::pair<double, double> sample_correlated_gaussian_edge(double mux, double muy,
                                                          double sigx, double sigy,
                                                          double rho, Rng& rng) {
  if (std::abs(rho) >= 1.0) {
    throw InvalidCovarianceError("|rho| must be < 1 for a positive definite edge covariance");
  }
  if (sigx <= 0.0 || sigy <= 0.0) {
    throw ValidationError("standard deviations must be positive");
  }
  const double z1 = rng.normal();
  const double z2 = rng.normal();
  const double x = mux + sigx * z1;
  const double y = muy + sigy * (rho * z1 + std::sqrt(1.0 - rho * rho) * z2);
  return {x, y};
}

void CorrelatedBernoulliParams::validate() const {
  if (z.k < 1 || z.z.empty()) throw ValidationError("missing community assignment");
  check_block_matrix(bx, z.k, "bx");
  check_block_matrix(by, z.k, "by");
  for (int i = 0; i < z.k; ++i) {
    for (int j = i; j < z.k; ++j) {
      const double p = bx(i, j);
      const double q = by(i, j);
      if (!is_probability(p) || !is_probability(q)) {
        throw ValidationError("block probabilities must lie in [0,1]");
      }
      if (p == 0.0 || p == 1.0 || q == 0.0 || q == 1.0) {
        if (rho != 0.0) {
          throw RhoOutOfRangeError("block (" + std::to_string(i + 1) + "," +
                                   std::to_string(j + 1) +
                                   ") has a degenerate marginal; rho must be 0");
        }
        continue;
      }
      if (!rho_bounds(p, q).contains(rho)) {
        throw RhoOutOfRangeError("rho=" + std::to_string(rho) +
                                 " infeasible for block (" + std::to_string(i + 1) +
                                 "," + std::to_string(j + 1) + ") with p=" +
                                 std::to_string(p) + ", q=" + std::to_string(q));
      }
    }
  }
}

void CorrelatedGaussianParams::validate() const {
  if (z.k < 1 || z.z.empty()) throw ValidationError("missing community assignment");
  check_block_matrix(mux, z.k, "mux");
  check_block_matrix(muy, z.k, "muy");
  check_block_matrix(sigx, z.k, "sigx");
  check_block_matrix(sigy, z.k, "sigy");
  if ((sigx.array() <= 0.0).any() || (sigy.array() <= 0.0).any()) {
    throw ValidationError("block standard deviations must be positive");
  }
  if (std::abs(rho) >= 1.0) {
    throw InvalidCovarianceError("|rho| must be < 1 for a positive definite edge covariance");
  }
}

std::pair<AdjacencyMatrix, AdjacencyMatrix> sample_correlated_bernoulli_sbm(
    const CorrelatedBernoulliParams& params, Rng& rng) {
  params.validate();
  const Eigen::Index n = static_cast<Eigen::Index>(params.z.n());
  Eigen::MatrixXd x = Eigen::MatrixXd::Zero(n, n);
  Eigen::MatrixXd y = Eigen::MatrixXd::Zero(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    const int bi = params.z.z[i] - 1;
    for (Eigen::Index j = i + 1; j < n; ++j) {
      const int bj = params.z.z[j] - 1;
      const auto [xe, ye] = sample_correlated_bernoulli_edge(
          params.bx(bi, bj), params.by(bi, bj), params.rho, rng);
      x(i, j) = x(j, i) = xe;
      y(i, j) = y(j, i) = ye;
    }
  }
  return {AdjacencyMatrix{std::move(x), {}}, AdjacencyMatrix{std::move(y), {}}};
}

std::pair<AdjacencyMatrix, AdjacencyMatrix> sample_correlated_gaussian_sbm(
    const CorrelatedGaussianParams& params, Rng& rng) {
  params.validate();
  const Eigen::Index n = static_cast<Eigen::Index>(params.z.n());
  Eigen::MatrixXd x = Eigen::MatrixXd::Zero(n, n);
  Eigen::MatrixXd y = Eigen::MatrixXd::Zero(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    const int bi = params.z.z[i] - 1;
    for (Eigen::Index j = i + 1; j < n; ++j) {
      const int bj = params.z.z[j] - 1;
      const auto [xe, ye] = sample_correlated_gaussian_edge(
          params.mux(bi, bj), params.muy(bi, bj), params.sigx(bi, bj),
          params.sigy(bi, bj), params.rho, rng);
      x(i, j) = x(j, i) = xe;
      y(i, j) = y(j, i) = ye;
    }
  }
  return {AdjacencyMatrix{std::move(x), {}}, AdjacencyMatrix{std::move(y), {}}};
}

}  // namespace gcorr
