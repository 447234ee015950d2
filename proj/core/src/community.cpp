#include "gcorr/community.hpp"

#include <Eigen/Cholesky>
#include <Eigen/Eigenvalues>
#include <Eigen/SVD>
#include <algorithm>
#include <cmath>
#include <limits>
#include <mutex>
#include <numeric>

#include "gcorr/parallel.hpp"

namespace gcorr {

namespace {

// Deterministic sign convention: largest-magnitude entry positive.
void fix_column_signs(Eigen::MatrixXd& m) {
  for (Eigen::Index c = 0; c < m.cols(); ++c) {
    Eigen::Index at = 0;
    m.col(c).cwiseAbs().maxCoeff(&at);
    if (m(at, c) < 0.0) m.col(c) = -m.col(c);
  }
}

}  // namespace

Embedding ase(const AdjacencyMatrix& x, int d) {
  const Eigen::Index n = x.n();
  if (d < 1 || d > n) {
    throw ValidationError("embedding dimension must satisfy 1 <= d <= n");
  }
  if (x.w.cwiseAbs().maxCoeff() == 0.0) {
    warn("adjacency spectral embedding of an all-zero graph is zero");
    return Embedding{Eigen::MatrixXd::Zero(n, d)};
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(x.w);
  if (solver.info() != Eigen::Success) {
    throw EigenFailureError("symmetric eigendecomposition did not converge");
  }
  const Eigen::VectorXd& values = solver.eigenvalues();
  std::vector<int> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](int a, int b) {
    const double ma = std::abs(values(a));
    const double mb = std::abs(values(b));
    if (ma != mb) return ma > mb;
    if (values(a) != values(b)) return values(a) > values(b);
    return a < b;
  });
  Eigen::MatrixXd coords(n, d);
  for (int c = 0; c < d; ++c) {
    coords.col(c) = solver.eigenvectors().col(order[c]) *
                    std::sqrt(std::abs(values(order[c])));
  }
  fix_column_signs(coords);
  return Embedding{std::move(coords)};
}

Embedding joint_embed(const AdjacencyMatrix& x1, const AdjacencyMatrix& x2, int d) {
  if (x1.n() != x2.n()) {
    throw DimensionMismatchError("joint embedding needs vertex-matched graphs");
  }
  const Embedding r1 = ase(x1, d);
  const Embedding r2 = ase(x2, d);
  Eigen::MatrixXd concat(x1.n(), 2 * d);
  concat << r1.coords, r2.coords;
  Eigen::BDCSVD<Eigen::MatrixXd> svd(concat, Eigen::ComputeThinU);
  Eigen::MatrixXd coords = svd.matrixU().leftCols(d);
  fix_column_signs(coords);
  return Embedding{std::move(coords)};
}

int select_dim(const std::vector<double>& singular_values) {
  const int n = static_cast<int>(singular_values.size());
  if (n < 2) throw ValidationError("elbow selection needs at least 2 values");
  std::vector<double> prefix(n + 1, 0.0), prefix_sq(n + 1, 0.0);
  for (int i = 0; i < n; ++i) {
    prefix[i + 1] = prefix[i] + singular_values[i];
    prefix_sq[i + 1] = prefix_sq[i] + singular_values[i] * singular_values[i];
  }
  int best_q = 1;
  double best_ll = -std::numeric_limits<double>::infinity();
  for (int q = 1; q < n; ++q) {
    const double mean1 = prefix[q] / q;
    const double mean2 = (prefix[n] - prefix[q]) / (n - q);
    const double ss = (prefix_sq[q] - q * mean1 * mean1) +
                      (prefix_sq[n] - prefix_sq[q] - (n - q) * mean2 * mean2);
    const double var = std::max(ss / n, 1e-300);
    const double ll = -0.5 * n * (std::log(2.0 * M_PI * var) + 1.0);
    if (ll > best_ll + 1e-12) {
      best_ll = ll;
      best_q = q;
    }
  }
  return best_q;
}

namespace {

struct CholeskyComponent {
  Eigen::LLT<Eigen::MatrixXd> llt;
  double log_norm = 0.0;  // log weight - log det term - (d/2) log(2 pi)
};

// Adds the covariance floor and factorizes. The relative floor keeps healthy
// components untouched; the absolute term regularizes single-point components
// (they arise legitimately when k approaches n).
Eigen::LLT<Eigen::MatrixXd> floored_llt(Eigen::MatrixXd cov, double data_trace,
                                        int d) {
  const double floor_value =
      1e-6 * cov.trace() / d + 1e-9 * data_trace / d;
  cov.diagonal().array() += floor_value;
  Eigen::LLT<Eigen::MatrixXd> llt(cov);
  if (llt.info() != Eigen::Success) {
    throw DegenerateClusterError(
        "component covariance not positive definite after regularization");
  }
  return llt;
}

double log_det_from_llt(const Eigen::LLT<Eigen::MatrixXd>& llt) {
  return 2.0 * llt.matrixLLT().diagonal().array().log().sum();
}

std::vector<Eigen::Index> kmeanspp_centers(const Eigen::MatrixXd& pts, int k,
                                           Rng& rng) {
  const Eigen::Index n = pts.rows();
  std::vector<Eigen::Index> centers;
  centers.reserve(k);
  centers.push_back(static_cast<Eigen::Index>(rng.uniform_index(n)));
  Eigen::VectorXd dist2 =
      (pts.rowwise() - pts.row(centers[0])).rowwise().squaredNorm();
  while (static_cast<int>(centers.size()) < k) {
    const double total = dist2.sum();
    Eigen::Index chosen;
    if (total <= 0.0) {
      chosen = static_cast<Eigen::Index>(rng.uniform_index(n));
    } else {
      double target = rng.uniform() * total;
      chosen = n - 1;
      for (Eigen::Index i = 0; i < n; ++i) {
        target -= dist2(i);
        if (target <= 0.0) {
          chosen = i;
          break;
        }
      }
    }
    centers.push_back(chosen);
    dist2 = dist2.cwiseMin(
        (pts.rowwise() - pts.row(chosen)).rowwise().squaredNorm());
  }
  return centers;
}

GmmModel em_once(const Eigen::MatrixXd& pts, int k, Rng& rng) {
  const Eigen::Index n = pts.rows();
  const int d = static_cast<int>(pts.cols());
  const Eigen::RowVectorXd data_mean = pts.colwise().mean();
  const Eigen::MatrixXd centered = pts.rowwise() - data_mean;
  const Eigen::MatrixXd data_cov = centered.transpose() * centered / double(n);
  const double data_trace = data_cov.trace();

  GmmModel model;
  model.k = k;
  model.weights = Eigen::VectorXd::Constant(k, 1.0 / k);
  model.means.resize(k, d);
  const auto centers = kmeanspp_centers(pts, k, rng);
  for (int c = 0; c < k; ++c) model.means.row(c) = pts.row(centers[c]);
  model.covariances.assign(k, data_cov);
  {
    // one hard-assignment pass seeds per-component moments; this keeps the
    // initial scales local (a component seeded at an isolated point must not
    // start with the global covariance, or k near n collapses to few blocks)
    std::vector<int> owner(n);
    Eigen::VectorXd counts = Eigen::VectorXd::Zero(k);
    for (Eigen::Index i = 0; i < n; ++i) {
      int best = 0;
      double best_dist = (pts.row(i) - pts.row(centers[0])).squaredNorm();
      for (int c = 1; c < k; ++c) {
        const double dist = (pts.row(i) - pts.row(centers[c])).squaredNorm();
        if (dist < best_dist) {
          best_dist = dist;
          best = c;
        }
      }
      owner[i] = best;
      counts(best) += 1.0;
    }
    Eigen::MatrixXd sums = Eigen::MatrixXd::Zero(k, d);
    for (Eigen::Index i = 0; i < n; ++i) sums.row(owner[i]) += pts.row(i);
    for (int c = 0; c < k; ++c) {
      if (counts(c) > 0) model.means.row(c) = sums.row(c) / counts(c);
    }
    std::vector<Eigen::MatrixXd> scatter(k, Eigen::MatrixXd::Zero(d, d));
    for (Eigen::Index i = 0; i < n; ++i) {
      const Eigen::VectorXd diff = (pts.row(i) - model.means.row(owner[i])).transpose();
      scatter[owner[i]].noalias() += diff * diff.transpose();
    }
    for (int c = 0; c < k; ++c) {
      if (counts(c) > 0) model.covariances[c] = scatter[c] / counts(c);
      model.weights(c) = std::max(counts(c), 1.0) / double(n);
    }
    model.weights /= model.weights.sum();
  }

  Eigen::MatrixXd log_resp(n, k);
  constexpr int kMaxIter = 300;
  constexpr double kTol = 1e-6;
  double prev_ll = -std::numeric_limits<double>::infinity();
  for (int iter = 0; iter < kMaxIter; ++iter) {
    // E step
    std::vector<CholeskyComponent> comps(k);
    for (int c = 0; c < k; ++c) {
      comps[c].llt = floored_llt(model.covariances[c], data_trace, d);
      comps[c].log_norm = std::log(std::max(model.weights(c), 1e-300)) -
                          0.5 * log_det_from_llt(comps[c].llt) -
                          0.5 * d * std::log(2.0 * M_PI);
    }
    for (Eigen::Index i = 0; i < n; ++i) {
      for (int c = 0; c < k; ++c) {
        const Eigen::VectorXd diff = (pts.row(i) - model.means.row(c)).transpose();
        const double quad = diff.dot(comps[c].llt.solve(diff));
        log_resp(i, c) = comps[c].log_norm - 0.5 * quad;
      }
    }
    double ll = 0.0;
    for (Eigen::Index i = 0; i < n; ++i) {
      const double row_max = log_resp.row(i).maxCoeff();
      const double lse =
          row_max + std::log((log_resp.row(i).array() - row_max).exp().sum());
      ll += lse;
      log_resp.row(i) = (log_resp.row(i).array() - lse).exp();
    }
    model.loglik = ll;
    model.loglik_history.push_back(ll);

    // M step (log_resp now holds responsibilities)
    const Eigen::VectorXd counts = log_resp.colwise().sum();
    for (int c = 0; c < k; ++c) {
      const double nk = std::max(counts(c), 1e-12);
      model.weights(c) = counts(c) / double(n);
      model.means.row(c) = (log_resp.col(c).transpose() * pts) / nk;
      Eigen::MatrixXd cov = Eigen::MatrixXd::Zero(d, d);
      for (Eigen::Index i = 0; i < n; ++i) {
        const Eigen::VectorXd diff = (pts.row(i) - model.means.row(c)).transpose();
        cov.noalias() += log_resp(i, c) * diff * diff.transpose();
      }
      model.covariances[c] = cov / nk;
    }

    if (iter > 0 && std::abs(ll - prev_ll) <= kTol * (1.0 + std::abs(prev_ll))) {
      model.converged = true;
      break;
    }
    prev_ll = ll;
  }

  const double params = (k - 1) + k * d + k * d * (d + 1) / 2.0;
  model.bic = -2.0 * model.loglik + params * std::log(static_cast<double>(n));
  // keep the regularized covariances consistent with what the E step used
  for (int c = 0; c < k; ++c) {
    const double floor_value =
        1e-6 * model.covariances[c].trace() / d + 1e-9 * data_trace / d;
    model.covariances[c].diagonal().array() += floor_value;
  }
  return model;
}

}  // namespace

GmmModel gmm_fit(const Embedding& embedding, int k, Rng& rng) {
  const Eigen::Index n = embedding.n();
  if (k < 1) throw ValidationError("component count must be >= 1");
  if (n < k) throw ValidationError("need at least k points to fit k components");
  constexpr int kRestarts = 3;
  GmmModel best;
  bool have_best = false;
  for (int restart = 0; restart < kRestarts; ++restart) {
    Rng restart_rng(rng.next_u64());
    GmmModel candidate = em_once(embedding.coords, k, restart_rng);
    const bool better =
        !have_best ||
        std::make_pair(candidate.converged, candidate.loglik) >
            std::make_pair(best.converged, best.loglik);
    if (better) {
      best = std::move(candidate);
      have_best = true;
    }
  }
  return best;
}

std::vector<int> GmmModel::predict(const Eigen::MatrixXd& points) const {
  const Eigen::Index n = points.rows();
  const int d = static_cast<int>(points.cols());
  std::vector<int> labels(n, 0);
  std::vector<Eigen::LLT<Eigen::MatrixXd>> llts;
  std::vector<double> log_norms;
  llts.reserve(k);
  for (int c = 0; c < k; ++c) {
    llts.emplace_back(covariances[c]);
    if (llts.back().info() != Eigen::Success) {
      throw DegenerateClusterError("stored component covariance is not positive definite");
    }
    log_norms.push_back(std::log(std::max(weights(c), 1e-300)) -
                        0.5 * log_det_from_llt(llts.back()) -
                        0.5 * d * std::log(2.0 * M_PI));
  }
  for (Eigen::Index i = 0; i < n; ++i) {
    double best_score = -std::numeric_limits<double>::infinity();
    for (int c = 0; c < k; ++c) {
      const Eigen::VectorXd diff = (points.row(i) - means.row(c)).transpose();
      const double score = log_norms[c] - 0.5 * diff.dot(llts[c].solve(diff));
      if (score > best_score) {
        best_score = score;
        labels[i] = c;
      }
    }
  }
  return labels;
}

BlockEstimationReport block_estimation(const AdjacencyMatrix& x,
                                       const AdjacencyMatrix& y,
                                       const BlockEstimationOptions& opts) {
  if (x.n() != y.n()) {
    throw DimensionMismatchError("block estimation needs vertex-matched graphs");
  }
  const Eigen::Index n = x.n();

  int d = 0;
  if (opts.d) {
    d = *opts.d;
    if (d < 1 || d > n) throw ValidationError("d must satisfy 1 <= d <= n");
  } else {
    // Joint spectrum of [X Y]; two successive elbows over the top of the
    // scree. A single elbow stops at the dominant eigenvalue of assortative
    // SBMs and misses the block-separating directions, while an elbow over
    // the full spectrum drifts into the smoothly decaying noise bulk, so only
    // the top ~sqrt(n) values enter the profile likelihood.
    Eigen::MatrixXd concat(n, 2 * n);
    concat << x.w, y.w;
    Eigen::BDCSVD<Eigen::MatrixXd> svd(concat);
    const Eigen::VectorXd sv = svd.singularValues();
    const int top = std::min<int>(
        static_cast<int>(sv.size()),
        std::max(3, static_cast<int>(std::ceil(std::sqrt(double(n))))));
    std::vector<double> values(sv.data(), sv.data() + top);
    d = select_dim(values);
    if (top - d >= 2) {
      std::vector<double> rest(values.begin() + d, values.end());
      d += select_dim(rest);
    }
    d = std::min<int>(d, static_cast<int>(n));
  }

  const Embedding emb = joint_embed(x, y, d);

  BlockEstimationReport report;
  report.d_used = d;

  GmmModel chosen;
  if (opts.k) {
    if (*opts.k < 1) throw ValidationError("k must be >= 1");
    if (n < *opts.k) throw ValidationError("need at least k vertices");
    Rng rng = Rng::derived(opts.seed, static_cast<std::uint64_t>(*opts.k));
    chosen = gmm_fit(emb, *opts.k, rng);
    report.bic_by_k.emplace_back(*opts.k, chosen.bic);
  } else {
    int kmax = opts.kmax > 0 ? opts.kmax
                             : static_cast<int>(std::floor(std::sqrt(double(n))));
    kmax = std::clamp<int>(kmax, 1, static_cast<int>(n));
    std::vector<GmmModel> fits(kmax);
    parallel_for(kmax, opts.threads, [&](std::size_t idx) {
      const int k = static_cast<int>(idx) + 1;
      Rng rng = Rng::derived(opts.seed, static_cast<std::uint64_t>(k));
      fits[idx] = gmm_fit(emb, k, rng);
    });
    int best_k = 0;
    for (int k = 1; k <= kmax; ++k) {
      report.bic_by_k.emplace_back(k, fits[k - 1].bic);
      if (!fits[k - 1].converged) continue;  // never select a non-converged fit
      if (best_k == 0 || fits[k - 1].bic < fits[best_k - 1].bic) best_k = k;
    }
    if (best_k == 0) {
      throw DegenerateClusterError("no GMM fit converged during BIC selection");
    }
    chosen = std::move(fits[best_k - 1]);
  }

  const std::vector<int> raw = chosen.predict(emb.coords);
  // compact to labels 1..k_used in order of first appearance
  std::vector<int> remap(chosen.k, 0);
  CommunityAssignment assignment;
  assignment.z.reserve(n);
  int next = 0;
  for (int r : raw) {
    if (remap[r] == 0) remap[r] = ++next;
    assignment.z.push_back(remap[r]);
  }
  assignment.k = next;
  report.k_used = next;
  report.assignment = std::move(assignment);
  return report;
}

}  // namespace gcorr
