#include "gcorr/inference.hpp"

#include <algorithm>
#include <cmath>

#include "gcorr/parallel.hpp"
#include "gcorr/permutation.hpp"
#include "gcorr/special.hpp"

namespace gcorr {

double percentile(std::vector<double> values, double q) {
  if (values.empty()) throw ValidationError("percentile of an empty sample");
  q = std::clamp(q, 0.0, 1.0);
  std::sort(values.begin(), values.end());
  const double h = q * (values.size() - 1);
  const std::size_t lo = static_cast<std::size_t>(h);
  if (lo + 1 >= values.size()) return values.back();
  const double frac = h - static_cast<double>(lo);
  return values[lo] + frac * (values[lo + 1] - values[lo]);
}

double two_sided_pvalue(double observed, std::span<const double> null_stats) {
  const std::size_t r = null_stats.size();
  if (r == 0) throw ValidationError("p-value needs at least one null replicate");
  double mean = 0.0;
  for (double v : null_stats) mean += v;
  mean /= static_cast<double>(r);
  std::size_t count = 0;
  if (mean <= observed) {
    for (double v : null_stats) count += v > observed;
  } else {
    for (double v : null_stats) count += v < observed;
  }
  const double raw = 2.0 * static_cast<double>(count) / static_cast<double>(r);
  return std::clamp(raw, 1.0 / static_cast<double>(r), 1.0);
}

TestResult pvalue_test(const AdjacencyMatrix& x, const AdjacencyMatrix& y,
                       const PvalueTestOptions& opts) {
  if (x.n() != y.n()) {
    throw DimensionMismatchError("test needs vertex-matched graphs");
  }
  if (opts.replicates < 20) {
    throw ValidationError("permutation test needs at least 20 replicates");
  }

  const GCorrStatistic observed = compute_statistic(opts.method, x, y);

  BlockEstimationOptions est_opts;
  est_opts.k = opts.k;
  est_opts.seed = derive_seed(opts.seed, 0);
  est_opts.threads = opts.threads;
  const BlockEstimationReport est = block_estimation(x, y, est_opts);

  const AdjacencyMatrix y_sorted = sort_vertices(y, est.assignment).first;

  std::vector<double> null_stats(opts.replicates);
  parallel_for(static_cast<std::size_t>(opts.replicates), opts.threads,
               [&](std::size_t i) {
                 Rng rng = Rng::derived(opts.seed, 1 + i);
                 const AdjacencyMatrix permuted =
                     block_permute(x, est.assignment, rng);
                 null_stats[i] =
                     compute_statistic(opts.method, permuted, y_sorted).value;
               });

  TestResult result;
  result.observed = observed.value;
  result.pvalue = two_sided_pvalue(observed.value, null_stats);
  result.null_stats = std::move(null_stats);
  result.method = opts.method;
  result.k_used = est.k_used;
  result.d_used = est.d_used;
  result.seed = opts.seed;
  result.observed_scale = observed.scale;
  return result;
}

RhoBounds SbmModelSpec::feasible_rho() const {
  if (kind == Kind::gaussian) return RhoBounds{-1.0, 1.0};
  RhoBounds bounds{-1.0, 1.0};
  const int k = blocks();
  for (int i = 0; i < k; ++i) {
    for (int j = i; j < k; ++j) {
      const RhoBounds block = rho_bounds(bx(i, j), by(i, j));
      bounds.lo = std::max(bounds.lo, block.lo);
      bounds.hi = std::min(bounds.hi, block.hi);
    }
  }
  return bounds;
}

std::pair<AdjacencyMatrix, AdjacencyMatrix> SbmModelSpec::sample(
    double rho, const CommunityAssignment& z, Rng& rng) const {
  if (kind == Kind::bernoulli) {
    CorrelatedBernoulliParams params{bx, by, rho, z};
    return sample_correlated_bernoulli_sbm(params, rng);
  }
  CorrelatedGaussianParams params{mux, muy, sigx, sigy, rho, z};
  return sample_correlated_gaussian_sbm(params, rng);
}

std::vector<PowerResult> power_estimate_multi(
    const SbmModelSpec& model, double rho, int n,
    const std::vector<GCorrMethod>& methods, const PowerOptions& opts) {
  if (opts.alpha <= 0.0 || opts.alpha >= 1.0) {
    throw ValidationError("alpha must lie in (0,1)");
  }
  if (opts.replicates < 100) {
    throw ValidationError("power estimation needs at least 100 replicates");
  }
  const CommunityAssignment planted = make_assignment(n, model.proportions);
  const int k_prior = model.k_prior.value_or(model.blocks());
  const std::size_t r = static_cast<std::size_t>(opts.replicates);
  const std::size_t m = methods.size();

  std::vector<std::vector<double>> observed(m, std::vector<double>(r));
  std::vector<std::vector<double>> permuted(m, std::vector<double>(r));

  parallel_for(r, opts.threads, [&](std::size_t i) {
    const std::uint64_t rep_seed = derive_seed(opts.seed, i);
    Rng sample_rng = Rng::derived(rep_seed, 0);
    const auto [gx, gy] = model.sample(rho, planted, sample_rng);

    CommunityAssignment assignment = planted;
    if (model.estimate_assignments) {
      BlockEstimationOptions est_opts;
      est_opts.k = k_prior;
      est_opts.seed = derive_seed(rep_seed, 1);
      assignment = block_estimation(gx, gy, est_opts).assignment;
    }
    Rng perm_rng = Rng::derived(rep_seed, 2);
    const AdjacencyMatrix gx_permuted = block_permute(gx, assignment, perm_rng);
    const AdjacencyMatrix gy_sorted = sort_vertices(gy, assignment).first;

    for (std::size_t s = 0; s < m; ++s) {
      observed[s][i] = compute_statistic(methods[s], gx, gy).value;
      permuted[s][i] =
          compute_statistic(methods[s], gx_permuted, gy_sorted).value;
    }
  });

  std::vector<PowerResult> results;
  results.reserve(m);
  for (std::size_t s = 0; s < m; ++s) {
    const double lower = percentile(permuted[s], opts.alpha / 2.0);
    const double upper = percentile(permuted[s], 1.0 - opts.alpha / 2.0);
    std::size_t rejections = 0;
    for (double c1 : observed[s]) {
      rejections += (c1 < lower) || (c1 > upper);
    }
    PowerResult pr;
    pr.power = static_cast<double>(rejections) / static_cast<double>(r);
    pr.alpha = opts.alpha;
    pr.replicates = opts.replicates;
    pr.model = model.name;
    pr.n = n;
    pr.rho = rho;
    pr.k = model.estimate_assignments ? k_prior : model.blocks();
    pr.method = methods[s];
    results.push_back(std::move(pr));
  }
  return results;
}

PowerResult power_estimate(const SbmModelSpec& model, double rho, int n,
                           GCorrMethod method, const PowerOptions& opts) {
  return power_estimate_multi(model, rho, n, {method}, opts).front();
}

double pearson_analytic_pvalue(double r, std::size_t m) {
  if (m < 3) throw TooFewSamplesError("analytic Pearson p-value needs m >= 3");
  const double r2 = r * r;
  if (r2 >= 1.0) return 0.0;
  const double t = r * std::sqrt((static_cast<double>(m) - 2.0) / (1.0 - r2));
  return 2.0 * student_t_sf(std::abs(t), static_cast<double>(m) - 2.0);
}

bool naive_pearson_test(const AdjacencyMatrix& x, const AdjacencyMatrix& y,
                        double alpha) {
  const GCorrStatistic stat = pearson_graph(x, y);
  const std::size_t m = static_cast<std::size_t>(x.n()) * (x.n() - 1) / 2;
  return pearson_analytic_pvalue(stat.value, m) < alpha;
}

PowerResult naive_pearson_power(const SbmModelSpec& model, double rho, int n,
                                const PowerOptions& opts) {
  if (opts.alpha <= 0.0 || opts.alpha >= 1.0) {
    throw ValidationError("alpha must lie in (0,1)");
  }
  const CommunityAssignment planted = make_assignment(n, model.proportions);
  const std::size_t r = static_cast<std::size_t>(opts.replicates);
  std::vector<char> rejected(r, 0);
  parallel_for(r, opts.threads, [&](std::size_t i) {
    Rng rng = Rng::derived(derive_seed(opts.seed, i), 0);
    const auto [gx, gy] = model.sample(rho, planted, rng);
    rejected[i] = naive_pearson_test(gx, gy, opts.alpha);
  });
  PowerResult pr;
  pr.power = static_cast<double>(std::count(rejected.begin(), rejected.end(), 1)) /
             static_cast<double>(r);
  pr.alpha = opts.alpha;
  pr.replicates = opts.replicates;
  pr.model = model.name;
  pr.n = n;
  pr.rho = rho;
  pr.k = model.blocks();
  pr.method = GCorrMethod::pearson;
  pr.analytic = true;
  return pr;
}

}  // namespace gcorr
