// gcorr command line front end: sampling, statistics, block-permutation
// testing, power sweeps, experiment reproduction, and edge-list ingestion.

#include <CLI11.hpp>
#include <json.hpp>

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "gcorr/community.hpp"
#include "gcorr/experiments.hpp"
#include "gcorr/inference.hpp"
#include "gcorr/io.hpp"
#include "gcorr/samplers.hpp"
#include "gcorr/statistics.hpp"
#include "gcorr/version.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

struct GlobalOptions {
  std::uint64_t seed = 42;
  int threads = 1;
  std::string out = ".";
};

Eigen::MatrixXd read_square_csv(const fs::path& file) {
  std::ifstream in(file);
  if (!in) throw gcorr::ValidationError("cannot open " + file.string());
  std::vector<std::vector<double>> rows;
  std::string line;
  std::size_t line_number = 0;
  while (std::getline(in, line)) {
    ++line_number;
    if (line.find_first_not_of(" \t\r\n") == std::string::npos) continue;
    std::vector<double> row;
    std::stringstream ss(line);
    std::string field;
    while (std::getline(ss, field, ',')) {
      try {
        row.push_back(std::stod(field));
      } catch (const std::exception&) {
        throw gcorr::ParseError("bad numeric field '" + field + "'", line_number);
      }
    }
    rows.push_back(std::move(row));
  }
  if (rows.empty() || rows.size() != rows.front().size()) {
    throw gcorr::ValidationError(file.string() + " is not a square CSV matrix");
  }
  Eigen::MatrixXd m(rows.size(), rows.size());
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (rows[i].size() != rows.size()) {
      throw gcorr::ValidationError(file.string() + " is ragged");
    }
    for (std::size_t j = 0; j < rows.size(); ++j) m(i, j) = rows[i][j];
  }
  return m;
}

std::vector<double> parse_double_list(const std::string& text) {
  std::vector<double> values;
  std::stringstream ss(text);
  std::string field;
  while (std::getline(ss, field, ',')) {
    if (field.empty()) continue;
    values.push_back(std::stod(field));
  }
  if (values.empty()) throw gcorr::ValidationError("empty numeric list '" + text + "'");
  return values;
}

std::vector<int> parse_int_list(const std::string& text) {
  std::vector<int> values;
  for (double v : parse_double_list(text)) values.push_back(static_cast<int>(v));
  return values;
}

Eigen::MatrixXd matrix_from_json(const json& j) {
  const auto rows = j.get<std::vector<std::vector<double>>>();
  Eigen::MatrixXd m(rows.size(), rows.empty() ? 0 : rows.front().size());
  for (std::size_t i = 0; i < rows.size(); ++i) {
    for (std::size_t c = 0; c < rows[i].size(); ++c) m(i, c) = rows[i][c];
  }
  return m;
}

gcorr::SbmModelSpec model_spec_from_json(const fs::path& file) {
  std::ifstream in(file);
  if (!in) throw gcorr::ValidationError("cannot open model spec " + file.string());
  json j;
  try {
    in >> j;
  } catch (const json::exception& e) {
    throw gcorr::ValidationError("model spec " + file.string() + ": " + e.what());
  }
  gcorr::SbmModelSpec spec;
  const std::string model = j.value("model", "bernoulli");
  spec.name = j.value("name", file.stem().string());
  if (model == "bernoulli") {
    spec.kind = gcorr::SbmModelSpec::Kind::bernoulli;
    spec.bx = matrix_from_json(j.at("bx"));
    spec.by = matrix_from_json(j.at("by"));
  } else if (model == "gaussian") {
    spec.kind = gcorr::SbmModelSpec::Kind::gaussian;
    spec.mux = matrix_from_json(j.at("mux"));
    spec.muy = matrix_from_json(j.at("muy"));
    if (j.contains("sigx")) {
      spec.sigx = matrix_from_json(j.at("sigx"));
      spec.sigy = matrix_from_json(j.at("sigy"));
    } else {
      spec.sigx = Eigen::MatrixXd::Ones(spec.mux.rows(), spec.mux.cols());
      spec.sigy = spec.sigx;
    }
  } else {
    throw gcorr::ValidationError("model must be bernoulli or gaussian");
  }
  if (j.contains("proportions")) {
    spec.proportions = j.at("proportions").get<std::vector<double>>();
  } else {
    const Eigen::Index k =
        spec.kind == gcorr::SbmModelSpec::Kind::bernoulli ? spec.bx.rows()
                                                          : spec.mux.rows();
    spec.proportions.assign(static_cast<std::size_t>(k), 1.0 / double(k));
  }
  spec.estimate_assignments = j.value("assignments", "given") == "estimated";
  if (j.contains("k_prior")) spec.k_prior = j.at("k_prior").get<int>();
  return spec;
}

json scale_to_json(const std::optional<gcorr::Scale>& scale) {
  if (!scale) return nullptr;
  return json{{"k", scale->k}, {"l", scale->l}};
}

int run_sample(const GlobalOptions& global, const std::string& model,
               int n, int k, double rho, const std::string& bx_file,
               const std::string& by_file, const std::string& mux_file,
               const std::string& muy_file, const std::string& sigx_file,
               const std::string& sigy_file, const std::string& proportions,
               const std::string& out_x, const std::string& out_y,
               const std::string& format) {
  gcorr::Rng rng(global.seed);
  std::pair<gcorr::AdjacencyMatrix, gcorr::AdjacencyMatrix> pair;
  std::vector<double> props;
  auto check_block_count = [k](const Eigen::MatrixXd& b) {
    if (k > 0 && b.rows() != k) {
      throw gcorr::ValidationError("--k=" + std::to_string(k) +
                                   " does not match the " +
                                   std::to_string(b.rows()) +
                                   "-block parameter files");
    }
  };
  if (model == "bernoulli") {
    if (bx_file.empty() || by_file.empty()) {
      throw gcorr::ValidationError("bernoulli sampling needs --bx and --by");
    }
    gcorr::CorrelatedBernoulliParams params;
    params.bx = read_square_csv(bx_file);
    params.by = read_square_csv(by_file);
    check_block_count(params.bx);
    params.rho = rho;
    props = proportions.empty()
                ? std::vector<double>(params.bx.rows(), 1.0 / double(params.bx.rows()))
                : parse_double_list(proportions);
    params.z = gcorr::make_assignment(n, props);
    pair = gcorr::sample_correlated_bernoulli_sbm(params, rng);
  } else if (model == "gaussian") {
    if (mux_file.empty() || muy_file.empty()) {
      throw gcorr::ValidationError("gaussian sampling needs --mux and --muy");
    }
    gcorr::CorrelatedGaussianParams params;
    params.mux = read_square_csv(mux_file);
    params.muy = read_square_csv(muy_file);
    check_block_count(params.mux);
    params.sigx = sigx_file.empty()
                      ? Eigen::MatrixXd::Ones(params.mux.rows(), params.mux.cols())
                      : read_square_csv(sigx_file);
    params.sigy = sigy_file.empty()
                      ? Eigen::MatrixXd::Ones(params.muy.rows(), params.muy.cols())
                      : read_square_csv(sigy_file);
    params.rho = rho;
    props = proportions.empty()
                ? std::vector<double>(params.mux.rows(), 1.0 / double(params.mux.rows()))
                : parse_double_list(proportions);
    params.z = gcorr::make_assignment(n, props);
    pair = gcorr::sample_correlated_gaussian_sbm(params, rng);
  } else {
    throw gcorr::ValidationError("--model must be bernoulli or gaussian");
  }
  if (format == "dense") {
    gcorr::write_dense_csv(out_x, pair.first);
    gcorr::write_dense_csv(out_y, pair.second);
  } else if (format == "edgelist") {
    gcorr::write_edge_list_csv(out_x, pair.first);
    gcorr::write_edge_list_csv(out_y, pair.second);
  } else {
    throw gcorr::ValidationError("--format must be dense or edgelist");
  }
  json summary{{"n", n}, {"rho", rho}, {"seed", global.seed},
               {"out_x", out_x}, {"out_y", out_y}};
  std::cout << summary.dump() << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"graph correlation testing toolkit"};
  app.set_version_flag("--version", gcorr::kVersion);
  app.require_subcommand(1);

  GlobalOptions global;
  app.add_option("--seed", global.seed, "master RNG seed")->capture_default_str();
  app.add_option("--threads", global.threads, "worker threads")->capture_default_str();
  app.add_option("--out", global.out, "output directory")->capture_default_str();

  // sample
  auto* sample = app.add_subcommand("sample", "draw a correlated graph pair");
  std::string sample_model = "bernoulli";
  int sample_n = 100;
  int sample_k = 0;
  double sample_rho = 0.0;
  std::string bx_file, by_file, mux_file, muy_file, sigx_file, sigy_file;
  std::string proportions;
  std::string out_x = "x.csv", out_y = "y.csv";
  std::string sample_format = "dense";
  sample->add_option("--model", sample_model, "bernoulli|gaussian")->capture_default_str();
  sample->add_option("--n", sample_n, "vertex count")->capture_default_str();
  sample->add_option("--k", sample_k, "block count (checked against the parameter files)");
  sample->add_option("--rho", sample_rho, "edge correlation")->capture_default_str();
  sample->add_option("--bx", bx_file, "k x k block probability CSV for graph X");
  sample->add_option("--by", by_file, "k x k block probability CSV for graph Y");
  sample->add_option("--mux", mux_file, "k x k block mean CSV for graph X");
  sample->add_option("--muy", muy_file, "k x k block mean CSV for graph Y");
  sample->add_option("--sigx", sigx_file, "k x k block SD CSV for graph X (default ones)");
  sample->add_option("--sigy", sigy_file, "k x k block SD CSV for graph Y (default ones)");
  sample->add_option("--proportions", proportions, "block size fractions, e.g. 0.7,0.3");
  sample->add_option("--out-x", out_x, "output file for graph X")->capture_default_str();
  sample->add_option("--out-y", out_y, "output file for graph Y")->capture_default_str();
  sample->add_option("--format", sample_format, "dense|edgelist")->capture_default_str();

  // stat
  auto* stat = app.add_subcommand("stat", "compute one correlation statistic");
  std::string stat_a, stat_b, stat_method = "dcorr";
  stat->add_option("graph_a", stat_a, "first graph file")->required();
  stat->add_option("graph_b", stat_b, "second graph file")->required();
  stat->add_option("--method", stat_method, "pearson|dcorr|mgc")->capture_default_str();

  // embed
  auto* embed = app.add_subcommand("embed", "joint community estimation");
  std::string embed_a, embed_b;
  int embed_d = 0, embed_k = 0, embed_kmax = 0;
  embed->add_option("graph_a", embed_a)->required();
  embed->add_option("graph_b", embed_b)->required();
  embed->add_option("--d", embed_d, "embedding dimension (default: elbow choice)");
  embed->add_option("--k", embed_k, "block count (default: BIC selection)");
  embed->add_option("--kmax", embed_kmax, "BIC search bound (default floor(sqrt(n)))");

  // test
  auto* test = app.add_subcommand("test", "block-permutation p-value");
  std::string test_a, test_b, test_method = "dcorr";
  int test_k = 0, test_replicates = 500;
  test->add_option("graph_a", test_a)->required();
  test->add_option("graph_b", test_b)->required();
  test->add_option("--method", test_method, "pearson|dcorr|mgc")->capture_default_str();
  test->add_option("--k", test_k, "block count for estimation (default: BIC)");
  test->add_option("--replicates", test_replicates, "permutation replicates")
      ->capture_default_str();

  // power
  auto* power = app.add_subcommand("power", "Monte Carlo power sweep");
  std::string power_spec, power_rhos = "0,0.1,-0.1";
  std::string power_ns = "10,20,30,40,50,60,70,80,90,100";
  std::string power_methods = "pearson,dcorr,mgc";
  double power_alpha = 0.05;
  int power_replicates = 500;
  bool power_naive = false;
  power->add_option("--model-spec", power_spec, "JSON model description")->required();
  power->add_option("--rho", power_rhos, "comma-separated rho grid")->capture_default_str();
  power->add_option("--n", power_ns, "comma-separated n grid")->capture_default_str();
  power->add_option("--methods", power_methods, "statistics to test")->capture_default_str();
  power->add_option("--alpha", power_alpha, "type I error level")->capture_default_str();
  power->add_option("--replicates", power_replicates, "Monte Carlo replicates")
      ->capture_default_str();
  power->add_flag("--naive", power_naive, "also run the analytic Pearson baseline");

  // reproduce
  auto* reproduce = app.add_subcommand("reproduce", "rerun a standard experiment");
  std::string reproduce_which;
  int reproduce_replicates = 500;
  std::string reproduce_ns = "10,20,30,40,50,60,70,80,90,100";
  reproduce->add_option("experiment", reproduce_which, "fig1|fig3|fig4")->required();
  reproduce->add_option("--replicates", reproduce_replicates)->capture_default_str();
  reproduce->add_option("--n-grid", reproduce_ns)->capture_default_str();

  // ingest
  auto* ingest = app.add_subcommand("ingest", "pair two directed edge lists");
  std::string ingest_a, ingest_b, ingest_out_a = "a.csv", ingest_out_b = "b.csv";
  bool ingest_binarize = false;
  ingest->add_option("edge_list_a", ingest_a)->required();
  ingest->add_option("edge_list_b", ingest_b)->required();
  ingest->add_flag("--binarize", ingest_binarize, "threshold weights > 0 to 1");
  ingest->add_option("--out-a", ingest_out_a)->capture_default_str();
  ingest->add_option("--out-b", ingest_out_b)->capture_default_str();

  // ksweep
  auto* ksweep = app.add_subcommand("ksweep", "null-vs-observed across block counts");
  std::string ksweep_a, ksweep_b, ksweep_ks = "2,4,8,16,32,64,128,256";
  std::string ksweep_methods = "pearson,dcorr,mgc";
  int ksweep_replicates = 500;
  ksweep->add_option("graph_a", ksweep_a)->required();
  ksweep->add_option("graph_b", ksweep_b)->required();
  ksweep->add_option("--k-list", ksweep_ks, "block counts")->capture_default_str();
  ksweep->add_option("--methods", ksweep_methods)->capture_default_str();
  ksweep->add_option("--replicates", ksweep_replicates)->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (sample->parsed()) {
      return run_sample(global, sample_model, sample_n, sample_k, sample_rho, bx_file,
                        by_file, mux_file, muy_file, sigx_file, sigy_file,
                        proportions, out_x, out_y, sample_format);
    }
    if (stat->parsed()) {
      const auto a = gcorr::read_graph(stat_a);
      const auto b = gcorr::read_graph(stat_b);
      const auto s =
          gcorr::compute_statistic(gcorr::method_from_string(stat_method), a, b);
      json out{{"value", s.value}, {"method", gcorr::to_string(s.method)}};
      if (s.scale) out["scale"] = scale_to_json(s.scale);
      std::cout << out.dump() << "\n";
      return 0;
    }
    if (embed->parsed()) {
      const auto a = gcorr::read_graph(embed_a);
      const auto b = gcorr::read_graph(embed_b);
      gcorr::BlockEstimationOptions opts;
      if (embed_d > 0) opts.d = embed_d;
      if (embed_k > 0) opts.k = embed_k;
      opts.kmax = embed_kmax;
      opts.seed = global.seed;
      opts.threads = global.threads;
      const auto report = gcorr::block_estimation(a, b, opts);
      fs::create_directories(global.out);
      const fs::path assignment_path = fs::path(global.out) / "assignment.csv";
      std::ofstream assignment(assignment_path);
      assignment << "vertex,label\n";
      for (std::size_t i = 0; i < report.assignment.z.size(); ++i) {
        const std::string name =
            a.labels.empty() ? "v" + std::to_string(i) : a.labels[i];
        assignment << name << ',' << report.assignment.z[i] << '\n';
      }
      json bic = json::array();
      for (const auto& [k, value] : report.bic_by_k) {
        bic.push_back({{"k", k}, {"bic", value}});
      }
      json report_json{{"d", report.d_used},
                       {"k_hat", report.k_used},
                       {"bic", bic},
                       {"seed", global.seed}};
      std::ofstream report_file(fs::path(global.out) / "report.json");
      report_file << report_json.dump(2) << '\n';
      std::cout << report_json.dump() << "\n";
      return 0;
    }
    if (test->parsed()) {
      const auto a = gcorr::read_graph(test_a);
      const auto b = gcorr::read_graph(test_b);
      gcorr::PvalueTestOptions opts;
      opts.method = gcorr::method_from_string(test_method);
      if (test_k > 0) opts.k = test_k;
      opts.replicates = test_replicates;
      opts.seed = global.seed;
      opts.threads = global.threads;
      const auto result = gcorr::pvalue_test(a, b, opts);
      json out{{"observed", result.observed},
               {"pvalue", result.pvalue},
               {"method", gcorr::to_string(result.method)},
               {"k_used", result.k_used},
               {"d_used", result.d_used},
               {"seed", result.seed},
               {"replicates", result.null_stats.size()},
               {"null_stats", result.null_stats}};
      if (result.observed_scale) out["scale"] = scale_to_json(result.observed_scale);
      std::cout << out.dump() << "\n";
      return 0;
    }
    if (power->parsed()) {
      const auto spec = model_spec_from_json(power_spec);
      std::vector<gcorr::GCorrMethod> methods;
      {
        std::stringstream ss(power_methods);
        std::string field;
        while (std::getline(ss, field, ',')) {
          if (!field.empty()) methods.push_back(gcorr::method_from_string(field));
        }
      }
      fs::create_directories(global.out);
      const fs::path csv_path = fs::path(global.out) / "power.csv";
      std::ofstream csv(csv_path);
      csv << "model,n,rho,method,alpha,replicates,power\n";
      const auto rho_grid = parse_double_list(power_rhos);
      const auto n_grid = parse_int_list(power_ns);
      for (std::size_t ri = 0; ri < rho_grid.size(); ++ri) {
        const double rho = rho_grid[ri];
        for (std::size_t ni = 0; ni < n_grid.size(); ++ni) {
          const int n = n_grid[ni];
          gcorr::PowerOptions opts;
          opts.alpha = power_alpha;
          opts.replicates = power_replicates;
          opts.threads = global.threads;
          opts.seed = gcorr::derive_seed(global.seed, ri * 4096 + ni);
          std::vector<gcorr::PowerResult> rows;
          if (!methods.empty()) {
            rows = gcorr::power_estimate_multi(spec, rho, n, methods, opts);
          }
          if (power_naive) {
            rows.push_back(gcorr::naive_pearson_power(spec, rho, n, opts));
          }
          for (const auto& r : rows) {
            csv << r.model << ',' << r.n << ',' << r.rho << ','
                << r.method_name() << ',' << r.alpha << ',' << r.replicates
                << ',' << r.power << '\n';
          }
        }
      }
      csv.close();
      gcorr::write_metadata_sidecar(csv_path, global.seed, power_spec);
      std::cout << csv_path.string() << "\n";
      return 0;
    }
    if (reproduce->parsed()) {
      gcorr::ExperimentConfig config;
      config.outdir = global.out;
      config.seed = global.seed;
      config.threads = global.threads;
      config.replicates = reproduce_replicates;
      config.n_grid = parse_int_list(reproduce_ns);
      config.flags = reproduce_which;
      fs::path written;
      if (reproduce_which == "fig1") {
        written = gcorr::write_statistic_sweep(config);
      } else if (reproduce_which == "fig3") {
        written = gcorr::write_power_curves(gcorr::GraphFamily::bernoulli, config);
      } else if (reproduce_which == "fig4") {
        written = gcorr::write_power_curves(gcorr::GraphFamily::gaussian, config);
      } else {
        throw gcorr::ValidationError("experiment must be fig1, fig3 or fig4");
      }
      std::cout << written.string() << "\n";
      return 0;
    }
    if (ingest->parsed()) {
      gcorr::IngestOptions opts;
      opts.binarize = ingest_binarize;
      const auto [a, b] = gcorr::ingest_connectome(ingest_a, ingest_b, opts);
      gcorr::write_dense_csv(ingest_out_a, a);
      gcorr::write_dense_csv(ingest_out_b, b);
      json out{{"n", a.n()}, {"out_a", ingest_out_a}, {"out_b", ingest_out_b}};
      std::cout << out.dump() << "\n";
      return 0;
    }
    if (ksweep->parsed()) {
      const auto a = gcorr::read_graph(ksweep_a);
      const auto b = gcorr::read_graph(ksweep_b);
      gcorr::KSweepConfig config;
      config.k_list = parse_int_list(ksweep_ks);
      config.methods.clear();
      std::stringstream ss(ksweep_methods);
      std::string field;
      while (std::getline(ss, field, ',')) {
        if (!field.empty()) config.methods.push_back(gcorr::method_from_string(field));
      }
      config.replicates = ksweep_replicates;
      config.seed = global.seed;
      config.threads = global.threads;
      const fs::path written = gcorr::write_k_sweep(a, b, config, global.out);
      std::cout << written.string() << "\n";
      return 0;
    }
  } catch (const gcorr::ValidationError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const gcorr::NumericError& e) {
    std::cerr << "numeric failure: " << e.what() << "\n";
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 0;
}
