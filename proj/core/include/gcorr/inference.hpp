#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "gcorr/community.hpp"
#include "gcorr/graph.hpp"
#include "gcorr/samplers.hpp"
#include "gcorr/statistics.hpp"

namespace gcorr {

/// Outcome of a block-permutation test.
struct TestResult {
  double observed = 0.0;
  std::vector<double> null_stats;
  double pvalue = 1.0;
  GCorrMethod method = GCorrMethod::pearson;
  int k_used = 0;
  int d_used = 0;
  std::uint64_t seed = 0;
  std::optional<Scale> observed_scale;  // mgc only
};

/// Monte Carlo power estimate under one sampling setting.
struct PowerResult {
  double power = 0.0;
  double alpha = 0.0;
  int replicates = 0;
  std::string model;  // setting descriptor
  int n = 0;
  double rho = 0.0;
  int k = 0;
  GCorrMethod method = GCorrMethod::pearson;
  bool analytic = false;  // true for the naive analytic Pearson baseline

  std::string method_name() const {
    return analytic ? "naive_pearson" : to_string(method);
  }
};

/// Linear-interpolation percentile of a sample (q in [0,1]).
double percentile(std::vector<double> values, double q);

/// Two-sided permutation p-value: with the null replicates' mean below the
/// observed value, counts strict exceedances above (and conversely), doubles
/// the proportion, and clamps into [1/r, 1] — a finite permutation test
/// cannot certify p below its resolution floor.
double two_sided_pvalue(double observed, std::span<const double> null_stats);

struct PvalueTestOptions {
  GCorrMethod method = GCorrMethod::dcorr;
  std::optional<int> k;  // prior block count for estimation; unset = BIC
  int replicates = 500;
  std::uint64_t seed = 0;
  int threads = 1;
};

/// Block-permutation test: estimate the joint community assignment, sort the
/// companion graph by it, and compare the observed statistic against
/// statistics of block-permuted copies. The assignment is estimated once from
/// the observed pair and reused for every permutation replicate.
TestResult pvalue_test(const AdjacencyMatrix& x, const AdjacencyMatrix& y,
                       const PvalueTestOptions& opts);

/// One sampling setting for power experiments: a correlated Bernoulli or
/// Gaussian SBM plus how assignments enter the test.
struct SbmModelSpec {
  enum class Kind { bernoulli, gaussian };
  Kind kind = Kind::bernoulli;
  std::string name;  // descriptor carried into results

  Eigen::MatrixXd bx, by;                 // bernoulli block probabilities
  Eigen::MatrixXd mux, muy, sigx, sigy;   // gaussian block parameters
  std::vector<double> proportions{1.0};   // block size fractions

  bool estimate_assignments = false;  // estimate z per replicate vs use planted z
  std::optional<int> k_prior;         // prior k for estimation; default = #blocks

  int blocks() const { return static_cast<int>(proportions.size()); }

  /// Feasible rho interval across all blocks (Bernoulli) or (-1, 1) (Gaussian).
  RhoBounds feasible_rho() const;

  std::pair<AdjacencyMatrix, AdjacencyMatrix> sample(
      double rho, const CommunityAssignment& z, Rng& rng) const;
};

struct PowerOptions {
  double alpha = 0.05;
  int replicates = 500;
  std::uint64_t seed = 0;
  int threads = 1;
};

/// Monte Carlo power of the block-permutation test. Each replicate draws a
/// fresh correlated pair, records the observed statistic, and one statistic
/// of a block-permuted copy; the empirical alpha/2 and 1-alpha/2 percentiles
/// of the permuted statistics bound the acceptance region.
///
/// All requested methods share each replicate's sample and permutation, which
/// leaves every per-method power estimate unchanged while tripling throughput.
std::vector<PowerResult> power_estimate_multi(const SbmModelSpec& model,
                                              double rho, int n,
                                              const std::vector<GCorrMethod>& methods,
                                              const PowerOptions& opts);

/// Single-method wrapper of power_estimate_multi.
PowerResult power_estimate(const SbmModelSpec& model, double rho, int n,
                           GCorrMethod method, const PowerOptions& opts);

/// Two-sided p-value of the Pearson correlation of m edge pairs from the
/// t statistic r*sqrt((m-2)/(1-r^2)) with m-2 degrees of freedom.
double pearson_analytic_pvalue(double r, std::size_t m);

/// Baseline without block permutation: Pearson on vectorized upper triangles
/// with the analytic t-distribution p-value. Valid for ER, invalid for SBM.
bool naive_pearson_test(const AdjacencyMatrix& x, const AdjacencyMatrix& y,
                        double alpha);

/// Monte Carlo rejection rate of the naive analytic Pearson test.
PowerResult naive_pearson_power(const SbmModelSpec& model, double rho, int n,
                                const PowerOptions& opts);

}  // namespace gcorr
