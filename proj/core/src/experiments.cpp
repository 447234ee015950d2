#include "gcorr/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>

#include <json.hpp>

#include "gcorr/parallel.hpp"
#include "gcorr/permutation.hpp"
#include "gcorr/version.hpp"

namespace gcorr {

namespace {

Eigen::MatrixXd block2(double diag, double off) {
  Eigen::MatrixXd b(2, 2);
  b << diag, off, off, diag;
  return b;
}

Eigen::MatrixXd scalar1(double v) {
  Eigen::MatrixXd b(1, 1);
  b << v;
  return b;
}

SbmModelSpec bernoulli_er(std::string name, double p, double q) {
  SbmModelSpec m;
  m.kind = SbmModelSpec::Kind::bernoulli;
  m.name = std::move(name);
  m.bx = scalar1(p);
  m.by = scalar1(q);
  m.proportions = {1.0};
  return m;
}

SbmModelSpec bernoulli_sbm(std::string name, const Eigen::MatrixXd& bx,
                           const Eigen::MatrixXd& by,
                           std::vector<double> proportions) {
  SbmModelSpec m;
  m.kind = SbmModelSpec::Kind::bernoulli;
  m.name = std::move(name);
  m.bx = bx;
  m.by = by;
  m.proportions = std::move(proportions);
  return m;
}

SbmModelSpec gaussian_spec(std::string name, const Eigen::MatrixXd& mux,
                           const Eigen::MatrixXd& muy,
                           std::vector<double> proportions) {
  SbmModelSpec m;
  m.kind = SbmModelSpec::Kind::gaussian;
  m.name = std::move(name);
  m.mux = mux;
  m.muy = muy;
  m.sigx = Eigen::MatrixXd::Ones(mux.rows(), mux.cols());
  m.sigy = m.sigx;
  m.proportions = std::move(proportions);
  return m;
}

std::string format_double(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.10g", v);
  return buf;
}

std::ofstream open_output(const std::filesystem::path& file) {
  std::ofstream out(file);
  if (!out) throw ValidationError("cannot write " + file.string());
  return out;
}

}  // namespace

std::vector<SbmModelSpec> statistic_sweep_settings() {
  return {
      bernoulli_er("a_er_equal", 0.5, 0.5),
      bernoulli_er("b_er_unequal", 0.7, 0.2),
      bernoulli_sbm("c_sbm_equal", block2(0.7, 0.3), block2(0.7, 0.3), {0.5, 0.5}),
      bernoulli_sbm("d_sbm_unequal", block2(0.7, 0.3), block2(0.2, 0.5), {0.5, 0.5}),
  };
}

std::vector<SbmModelSpec> bernoulli_power_settings() {
  std::vector<SbmModelSpec> rows = statistic_sweep_settings();
  SbmModelSpec estimated =
      bernoulli_sbm("e_sbm_unequal_estimated", block2(0.7, 0.3), block2(0.2, 0.5),
                    {0.5, 0.5});
  estimated.estimate_assignments = true;
  estimated.k_prior = 2;
  rows.push_back(estimated);
  SbmModelSpec skewed =
      bernoulli_sbm("f_sbm_unequal_estimated_7030", block2(0.7, 0.3),
                    block2(0.2, 0.5), {0.7, 0.3});
  skewed.estimate_assignments = true;
  skewed.k_prior = 2;
  rows.push_back(skewed);
  return rows;
}

std::vector<SbmModelSpec> gaussian_power_settings() {
  return {
      gaussian_spec("g1_er_equal_mean", scalar1(0.0), scalar1(0.0), {1.0}),
      gaussian_spec("g2_er_unequal_mean", scalar1(0.0), scalar1(2.0), {1.0}),
      gaussian_spec("g3_sbm_equal_mean", block2(0.0, 2.0), block2(0.0, 2.0),
                    {0.5, 0.5}),
      gaussian_spec("g4_sbm_unequal_mean", block2(2.0, 0.0), block2(4.0, 2.0),
                    {0.5, 0.5}),
  };
}

std::vector<StatSweepRow> run_statistic_sweep(const ExperimentConfig& config) {
  constexpr int kVertices = 100;
  constexpr int kRhoPoints = 9;
  const auto settings = statistic_sweep_settings();
  const std::vector<GCorrMethod> methods = {GCorrMethod::pearson,
                                            GCorrMethod::dcorr};
  std::vector<StatSweepRow> rows;
  for (std::size_t s = 0; s < settings.size(); ++s) {
    const SbmModelSpec& model = settings[s];
    const RhoBounds bounds = model.feasible_rho();
    const CommunityAssignment z = make_assignment(kVertices, model.proportions);
    std::vector<double> rho_grid(kRhoPoints);
    for (int g = 0; g < kRhoPoints; ++g) {
      rho_grid[g] = bounds.lo + (bounds.hi - bounds.lo) * g / double(kRhoPoints - 1);
    }
    if (bounds.lo <= 0.0 && bounds.hi >= 0.0) {
      // pin the conditional-independence point: snap the nearest grid value
      // onto rho = 0 exactly
      std::size_t nearest = 0;
      for (std::size_t g = 1; g < rho_grid.size(); ++g) {
        if (std::abs(rho_grid[g]) < std::abs(rho_grid[nearest])) nearest = g;
      }
      rho_grid[nearest] = 0.0;
    }
    for (int g = 0; g < kRhoPoints; ++g) {
      const double rho = rho_grid[g];
      std::vector<std::vector<double>> stats(
          methods.size(), std::vector<double>(config.replicates));
      parallel_for(static_cast<std::size_t>(config.replicates), config.threads,
                   [&](std::size_t i) {
                     Rng rng = Rng::derived(
                         derive_seed(config.seed, s * 1000 + g), i);
                     const auto [gx, gy] = model.sample(rho, z, rng);
                     for (std::size_t m = 0; m < methods.size(); ++m) {
                       stats[m][i] = compute_statistic(methods[m], gx, gy).value;
                     }
                   });
      for (std::size_t m = 0; m < methods.size(); ++m) {
        double mean = 0.0;
        for (double v : stats[m]) mean += v;
        mean /= stats[m].size();
        double var = 0.0;
        for (double v : stats[m]) var += (v - mean) * (v - mean);
        var /= stats[m].size() > 1 ? stats[m].size() - 1 : 1;
        rows.push_back(StatSweepRow{model.name, rho, methods[m], mean,
                                    std::sqrt(var)});
      }
    }
  }
  return rows;
}

std::filesystem::path write_statistic_sweep(const ExperimentConfig& config) {
  std::filesystem::create_directories(config.outdir);
  const auto rows = run_statistic_sweep(config);
  const std::filesystem::path csv = config.outdir / "fig1.csv";
  std::ofstream out = open_output(csv);
  out << "setting,rho,method,mean_stat,sd_stat\n";
  for (const auto& r : rows) {
    out << r.setting << ',' << format_double(r.rho) << ',' << to_string(r.method)
        << ',' << format_double(r.mean_stat) << ',' << format_double(r.sd_stat)
        << '\n';
  }
  out.close();
  write_metadata_sidecar(csv, config.seed, config.flags);
  return csv;
}

std::vector<PowerResult> run_power_curves(GraphFamily family,
                                          const ExperimentConfig& config) {
  const auto settings = family == GraphFamily::bernoulli
                            ? bernoulli_power_settings()
                            : gaussian_power_settings();
  const std::vector<GCorrMethod> methods = {
      GCorrMethod::pearson, GCorrMethod::dcorr, GCorrMethod::mgc};
  const std::vector<double> rhos = {0.0, 0.1, -0.1};
  std::vector<PowerResult> rows;
  for (std::size_t s = 0; s < settings.size(); ++s) {
    for (std::size_t g = 0; g < rhos.size(); ++g) {
      for (std::size_t ni = 0; ni < config.n_grid.size(); ++ni) {
        const int n = config.n_grid[ni];
        PowerOptions opts;
        opts.replicates = config.replicates;
        opts.threads = config.threads;
        opts.seed = derive_seed(config.seed, (s * 16 + g) * 64 + ni);
        auto block = power_estimate_multi(settings[s], rhos[g], n, methods, opts);
        rows.insert(rows.end(), block.begin(), block.end());
        PowerOptions naive_opts = opts;
        naive_opts.seed = derive_seed(opts.seed, 7777);
        rows.push_back(naive_pearson_power(settings[s], rhos[g], n, naive_opts));
      }
    }
  }
  return rows;
}

std::filesystem::path write_power_curves(GraphFamily family,
                                         const ExperimentConfig& config) {
  std::filesystem::create_directories(config.outdir);
  const auto rows = run_power_curves(family, config);
  const std::filesystem::path csv =
      config.outdir / (family == GraphFamily::bernoulli ? "fig3.csv" : "fig4.csv");
  std::ofstream out = open_output(csv);
  out << "row_setting,rho,n,method,power\n";
  for (const auto& r : rows) {
    out << r.model << ',' << format_double(r.rho) << ',' << r.n << ','
        << r.method_name() << ',' << format_double(r.power) << '\n';
  }
  out.close();
  write_metadata_sidecar(csv, config.seed, config.flags);
  return csv;
}

std::vector<KSweepRow> run_k_sweep(const AdjacencyMatrix& a,
                                   const AdjacencyMatrix& b,
                                   const KSweepConfig& config) {
  std::vector<KSweepRow> rows;
  for (std::size_t ki = 0; ki < config.k_list.size(); ++ki) {
    const int k = config.k_list[ki];
    BlockEstimationOptions est_opts;
    est_opts.k = k;
    est_opts.seed = derive_seed(config.seed, ki * 2);
    est_opts.threads = config.threads;
    const BlockEstimationReport est = block_estimation(a, b, est_opts);
    const AdjacencyMatrix b_sorted = sort_vertices(b, est.assignment).first;

    std::vector<std::vector<double>> nulls(
        config.methods.size(), std::vector<double>(config.replicates));
    parallel_for(static_cast<std::size_t>(config.replicates), config.threads,
                 [&](std::size_t i) {
                   Rng rng = Rng::derived(derive_seed(config.seed, ki * 2 + 1), i);
                   const AdjacencyMatrix permuted =
                       block_permute(a, est.assignment, rng);
                   for (std::size_t m = 0; m < config.methods.size(); ++m) {
                     nulls[m][i] =
                         compute_statistic(config.methods[m], permuted, b_sorted)
                             .value;
                   }
                 });
    for (std::size_t m = 0; m < config.methods.size(); ++m) {
      const double observed =
          compute_statistic(config.methods[m], a, b).value;
      double mean = 0.0;
      for (double v : nulls[m]) mean += v;
      mean /= nulls[m].size();
      double var = 0.0;
      for (double v : nulls[m]) var += (v - mean) * (v - mean);
      var /= nulls[m].size() > 1 ? nulls[m].size() - 1 : 1;
      rows.push_back(
          KSweepRow{k, config.methods[m], observed, mean, std::sqrt(var)});
    }
  }
  return rows;
}

std::filesystem::path write_k_sweep(const AdjacencyMatrix& a,
                                    const AdjacencyMatrix& b,
                                    const KSweepConfig& config,
                                    const std::filesystem::path& outdir,
                                    const std::string& flags) {
  std::filesystem::create_directories(outdir);
  const auto rows = run_k_sweep(a, b, config);
  const std::filesystem::path csv = outdir / "ksweep.csv";
  std::ofstream out = open_output(csv);
  out << "k,method,observed,null_mean,null_sd\n";
  for (const auto& r : rows) {
    out << r.k << ',' << to_string(r.method) << ',' << format_double(r.observed)
        << ',' << format_double(r.null_mean) << ',' << format_double(r.null_sd)
        << '\n';
  }
  out.close();
  write_metadata_sidecar(csv, config.seed, flags);
  return csv;
}

void write_metadata_sidecar(const std::filesystem::path& csv_path,
                            std::uint64_t seed, const std::string& flags) {
  nlohmann::json meta;
  meta["seed"] = seed;
  meta["version"] = kVersion;
  meta["flags"] = flags;
  std::filesystem::path sidecar = csv_path;
  sidecar += ".meta.json";
  std::ofstream out = open_output(sidecar);
  out << meta.dump(2) << '\n';
}

}  // namespace gcorr
