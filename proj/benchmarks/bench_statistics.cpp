#include <benchmark/benchmark.h>

#include "gcorr/community.hpp"
#include "gcorr/permutation.hpp"
#include "gcorr/samplers.hpp"
#include "gcorr/statistics.hpp"

using namespace gcorr;

namespace {

std::pair<AdjacencyMatrix, AdjacencyMatrix> bernoulli_pair(int n, Rng& rng) {
  CorrelatedBernoulliParams params;
  params.bx = Eigen::MatrixXd::Constant(1, 1, 0.5);
  params.by = params.bx;
  params.rho = 0.3;
  params.z = make_assignment(n, {1.0});
  return sample_correlated_bernoulli_sbm(params, rng);
}

std::pair<AdjacencyMatrix, AdjacencyMatrix> gaussian_pair(int n, Rng& rng) {
  CorrelatedGaussianParams params;
  params.mux = Eigen::MatrixXd::Zero(1, 1);
  params.muy = params.mux;
  params.sigx = Eigen::MatrixXd::Ones(1, 1);
  params.sigy = params.sigx;
  params.rho = 0.3;
  params.z = make_assignment(n, {1.0});
  return sample_correlated_gaussian_sbm(params, rng);
}

}  // namespace

static void BM_SampleBernoulliSbm(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  Rng rng(1);
  for (auto _ : state) {
    auto pair = bernoulli_pair(n, rng);
    benchmark::DoNotOptimize(pair.first.w.data());
  }
}
BENCHMARK(BM_SampleBernoulliSbm)->Arg(50)->Arg(100)->Arg(200)->Arg(400);

static void BM_Pearson(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  Rng rng(2);
  const auto [x, y] = bernoulli_pair(n, rng);
  for (auto _ : state) {
    benchmark::DoNotOptimize(pearson_graph(x, y).value);
  }
}
BENCHMARK(BM_Pearson)->Arg(50)->Arg(100)->Arg(200)->Arg(400);

static void BM_Dcorr(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  Rng rng(3);
  const auto [x, y] = bernoulli_pair(n, rng);
  for (auto _ : state) {
    benchmark::DoNotOptimize(dcorr_graph(x, y).value);
  }
}
BENCHMARK(BM_Dcorr)->Arg(50)->Arg(100)->Arg(200)->Arg(400);

static void BM_MgcBinary(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  Rng rng(4);
  const auto [x, y] = bernoulli_pair(n, rng);
  for (auto _ : state) {
    benchmark::DoNotOptimize(mgc_graph(x, y).value);
  }
}
BENCHMARK(BM_MgcBinary)->Arg(50)->Arg(100)->Arg(200)->Arg(400);

static void BM_MgcWeighted(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  Rng rng(5);
  const auto [x, y] = gaussian_pair(n, rng);
  for (auto _ : state) {
    benchmark::DoNotOptimize(mgc_graph(x, y).value);
  }
}
BENCHMARK(BM_MgcWeighted)->Arg(50)->Arg(100)->Arg(200)->Arg(400);

static void BM_BlockPermute(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  Rng rng(6);
  CorrelatedBernoulliParams params;
  params.bx = (Eigen::MatrixXd(2, 2) << 0.7, 0.3, 0.3, 0.7).finished();
  params.by = params.bx;
  params.rho = 0.0;
  params.z = make_assignment(n, {0.5, 0.5});
  const auto [x, y] = sample_correlated_bernoulli_sbm(params, rng);
  for (auto _ : state) {
    Rng perm_rng(state.iterations());
    benchmark::DoNotOptimize(block_permute(x, params.z, perm_rng).w.data());
  }
}
BENCHMARK(BM_BlockPermute)->Arg(50)->Arg(100)->Arg(200)->Arg(400);

static void BM_BlockEstimation(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  Rng rng(7);
  CorrelatedBernoulliParams params;
  params.bx = (Eigen::MatrixXd(2, 2) << 0.7, 0.3, 0.3, 0.7).finished();
  params.by = params.bx;
  params.rho = 0.0;
  params.z = make_assignment(n, {0.5, 0.5});
  const auto [x, y] = sample_correlated_bernoulli_sbm(params, rng);
  for (auto _ : state) {
    BlockEstimationOptions opts;
    opts.k = 2;
    opts.seed = static_cast<std::uint64_t>(state.iterations());
    benchmark::DoNotOptimize(block_estimation(x, y, opts).k_used);
  }
}
BENCHMARK(BM_BlockEstimation)->Arg(50)->Arg(100)->Arg(200);

BENCHMARK_MAIN();
