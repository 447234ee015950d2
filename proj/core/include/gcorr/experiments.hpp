#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "gcorr/inference.hpp"

namespace gcorr {

/// The four standard correlated-Bernoulli settings used by the statistic
/// sweep (n = 100, given assignments):
///   a: ER p = q = 0.5
///   b: ER p = 0.7, q = 0.2
///   c: SBM, both graphs 0.7 within / 0.3 between, equal blocks
///   d: SBM, 0.7/0.3 vs 0.2/0.5, equal blocks
std::vector<SbmModelSpec> statistic_sweep_settings();

/// The six correlated-Bernoulli power rows: the four settings above with
/// given assignments, then setting d with estimated assignments, then the
/// same with a 70/30 block split.
std::vector<SbmModelSpec> bernoulli_power_settings();

/// The four correlated-Gaussian power rows (unit variances, given
/// assignments): ER with equal then different means, SBM with equal then
/// different block means.
std::vector<SbmModelSpec> gaussian_power_settings();

struct ExperimentConfig {
  std::filesystem::path outdir;
  std::uint64_t seed = 0;
  int threads = 1;
  int replicates = 500;
  std::vector<int> n_grid = {10, 20, 30, 40, 50, 60, 70, 80, 90, 100};
  std::string flags;  // recorded verbatim in the metadata sidecar
};

/// One row of the statistic sweep output.
struct StatSweepRow {
  std::string setting;
  double rho = 0.0;
  GCorrMethod method = GCorrMethod::pearson;
  double mean_stat = 0.0;
  double sd_stat = 0.0;
};

/// Mean and SD of the Pearson and DCorr statistics over replicated draws,
/// sweeping rho across each setting's feasible interval. n = 100.
std::vector<StatSweepRow> run_statistic_sweep(const ExperimentConfig& config);

/// Writes run_statistic_sweep to <outdir>/fig1.csv plus a metadata sidecar.
std::filesystem::path write_statistic_sweep(const ExperimentConfig& config);

enum class GraphFamily { bernoulli, gaussian };

/// Power curves for every row setting of the chosen family over
/// rho in {0, 0.1, -0.1} and the configured n grid, for pearson/dcorr/mgc
/// with block permutation plus the naive analytic Pearson baseline.
std::vector<PowerResult> run_power_curves(GraphFamily family,
                                          const ExperimentConfig& config);

/// Writes run_power_curves to <outdir>/fig3.csv or fig4.csv plus a sidecar.
std::filesystem::path write_power_curves(GraphFamily family,
                                         const ExperimentConfig& config);

struct KSweepRow {
  int k = 0;
  GCorrMethod method = GCorrMethod::pearson;
  double observed = 0.0;
  double null_mean = 0.0;
  double null_sd = 0.0;
};

struct KSweepConfig {
  std::vector<int> k_list;
  std::vector<GCorrMethod> methods = {GCorrMethod::pearson, GCorrMethod::dcorr,
                                      GCorrMethod::mgc};
  int replicates = 500;
  std::uint64_t seed = 0;
  int threads = 1;
};

/// For each k: estimate a k-block assignment jointly from the pair, then
/// compare the observed statistic with the null distribution generated by
/// block permutation at that k.
std::vector<KSweepRow> run_k_sweep(const AdjacencyMatrix& a,
                                   const AdjacencyMatrix& b,
                                   const KSweepConfig& config);

std::filesystem::path write_k_sweep(const AdjacencyMatrix& a,
                                    const AdjacencyMatrix& b,
                                    const KSweepConfig& config,
                                    const std::filesystem::path& outdir,
                                    const std::string& flags = "");

/// JSON sidecar (seed, version, flags) accompanying every experiment CSV.
void write_metadata_sidecar(const std::filesystem::path& csv_path,
                            std::uint64_t seed, const std::string& flags);

}  // namespace gcorr
