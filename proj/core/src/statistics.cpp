#include "gcorr/statistics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <vector>

#include "gcorr/special.hpp"

namespace gcorr {

std::string to_string(GCorrMethod method) {
  switch (method) {
    case GCorrMethod::pearson: return "pearson";
    case GCorrMethod::dcorr: return "dcorr";
    case GCorrMethod::mgc: return "mgc";
  }
  return "unknown";
}

GCorrMethod method_from_string(const std::string& name) {
  if (name == "pearson") return GCorrMethod::pearson;
  if (name == "dcorr") return GCorrMethod::dcorr;
  if (name == "mgc") return GCorrMethod::mgc;
  throw ValidationError("unknown statistic '" + name + "' (expected pearson|dcorr|mgc)");
}

namespace {

void check_same_n(Eigen::Index nx, Eigen::Index ny) {
  if (nx != ny) {
    throw DimensionMismatchError("graphs have different vertex counts: " +
                                 std::to_string(nx) + " vs " + std::to_string(ny));
  }
}

double clamp_correlation(double v) { return std::clamp(v, -1.0, 1.0); }

}  // namespace

GCorrStatistic pearson_graph(const AdjacencyMatrix& x, const AdjacencyMatrix& y) {
  check_same_n(x.n(), y.n());
  const Eigen::VectorXd ux = vectorize_upper(x);
  const Eigen::VectorXd uy = vectorize_upper(y);
  const Eigen::VectorXd cx = ux.array() - ux.mean();
  const Eigen::VectorXd cy = uy.array() - uy.mean();
  const double vx = cx.squaredNorm();
  const double vy = cy.squaredNorm();
  if (vx <= 0.0 || vy <= 0.0) {
    throw ConstantInputError("Pearson undefined: an input graph has constant edge weights");
  }
  const double r = cx.dot(cy) / std::sqrt(vx * vy);
  return GCorrStatistic{clamp_correlation(r), GCorrMethod::pearson, std::nullopt};
}

CenteredDistanceMatrix u_center(const DistanceMatrix& d) {
  const Eigen::Index n = d.n();
  if (n < 4) {
    throw TooFewSamplesError("U-centering requires n >= 4, got n=" + std::to_string(n));
  }
  const Eigen::VectorXd row_sums = d.d.rowwise().sum();
  const Eigen::VectorXd col_sums = d.d.colwise().sum();
  const double grand = d.d.sum();
  Eigen::MatrixXd a = d.d;
  a.noalias() -= row_sums / (n - 2.0) * Eigen::RowVectorXd::Ones(n);
  a.noalias() -= Eigen::VectorXd::Ones(n) * (col_sums.transpose() / (n - 2.0));
  a.array() += grand / ((n - 1.0) * (n - 2.0));
  a.diagonal().setZero();
  return CenteredDistanceMatrix{std::move(a)};
}

double dcov_unbiased(const CenteredDistanceMatrix& cx,
                     const CenteredDistanceMatrix& cy) {
  check_same_n(cx.n(), cy.n());
  const double n = static_cast<double>(cx.n());
  return cx.a.cwiseProduct(cy.a).sum() / (n * (n - 3.0));
}

GCorrStatistic dcorr_graph(const AdjacencyMatrix& x, const AdjacencyMatrix& y) {
  check_same_n(x.n(), y.n());
  const CenteredDistanceMatrix cx = u_center(kernel_to_distance(x));
  const CenteredDistanceMatrix cy = u_center(kernel_to_distance(y));
  const double cov = dcov_unbiased(cx, cy);
  const double vx = dcov_unbiased(cx, cx);
  const double vy = dcov_unbiased(cy, cy);
  double value = 0.0;
  if (vx > 0.0 && vy > 0.0) {
    value = clamp_correlation(cov / std::sqrt(vx * vy));
  }
  return GCorrStatistic{value, GCorrMethod::dcorr, std::nullopt};
}

namespace {

// Dense ranks of each row of a symmetric distance matrix: tied distances
// share a rank, distinct values rank 1,2,... in increasing order. The
// self-distance 0 participates, so binary graphs collapse to ranks {1,2}.
Eigen::MatrixXi dense_row_ranks(const Eigen::MatrixXd& d) {
  const Eigen::Index n = d.rows();
  Eigen::MatrixXi ranks(n, n);
  std::vector<int> order(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(),
              [&](int a, int b) { return d(i, a) < d(i, b); });
    int rank = 0;
    double prev = std::numeric_limits<double>::quiet_NaN();
    for (int j : order) {
      if (!(d(i, j) == prev)) {
        ++rank;
        prev = d(i, j);
      }
      ranks(i, j) = rank;
    }
  }
  return ranks;
}

// High quantile of the null distribution of the global statistic, used as the
// noise floor of the smoothing threshold. Under independence the unbiased
// dcorr of m+1 points is approximately 2*Beta(a,a)-1 with a = m(m-3)/4 - 1/2.
double null_quantile_threshold(Eigen::Index n) {
  const double m = static_cast<double>(n) - 1.0;
  const double a = m * (m - 3.0) / 4.0 - 0.5;
  if (a < 1.0) return 1.0;  // too few samples to smooth; force global fallback
  const double per = 1.0 - 0.02 / m;
  return 2.0 * incomplete_beta_inv(a, a, per) - 1.0;
}

// Largest 4-connected component of mask; returns its size and marks it in
// region. Components are discovered in row-major order, so ties in size
// resolve to the first one found.
int largest_component(const std::vector<char>& mask, int rows, int cols,
                      std::vector<char>& region) {
  std::vector<int> label(static_cast<std::size_t>(rows) * cols, 0);
  int best_size = 0;
  int best_label = 0;
  int next_label = 0;
  std::vector<int> stack;
  for (int r = 0; r < rows; ++r) {
    for (int c = 0; c < cols; ++c) {
      const int at = r * cols + c;
      if (!mask[at] || label[at] != 0) continue;
      ++next_label;
      int size = 0;
      stack.push_back(at);
      label[at] = next_label;
      while (!stack.empty()) {
        const int cur = stack.back();
        stack.pop_back();
        ++size;
        const int cr = cur / cols;
        const int cc = cur % cols;
        const int neighbors[4] = {cur - cols, cur + cols, cur - 1, cur + 1};
        const bool valid[4] = {cr > 0, cr + 1 < rows, cc > 0, cc + 1 < cols};
        for (int k = 0; k < 4; ++k) {
          if (valid[k] && mask[neighbors[k]] && label[neighbors[k]] == 0) {
            label[neighbors[k]] = next_label;
            stack.push_back(neighbors[k]);
          }
        }
      }
      if (size > best_size) {
        best_size = size;
        best_label = next_label;
      }
    }
  }
  region.assign(label.size(), 0);
  if (best_label != 0) {
    for (std::size_t i = 0; i < label.size(); ++i) {
      region[i] = label[i] == best_label;
    }
  }
  return best_size;
}

}  // namespace

MgcMap mgc_map(const AdjacencyMatrix& x, const AdjacencyMatrix& y) {
  check_same_n(x.n(), y.n());
  const Eigen::Index n = x.n();
  const DistanceMatrix dx = kernel_to_distance(x);
  const DistanceMatrix dy = kernel_to_distance(y);
  const Eigen::MatrixXd ax = u_center(dx).a;
  const Eigen::MatrixXd ay = u_center(dy).a;
  const Eigen::MatrixXi rx = dense_row_ranks(dx.d);
  const Eigen::MatrixXi ry = dense_row_ranks(dy.d);
  const int mx = rx.maxCoeff();
  const int my = ry.maxCoeff();

  // Bucket sums by rank pair, then 2D prefix sums give every scale at once.
  Eigen::MatrixXd cov = Eigen::MatrixXd::Zero(mx, my);
  Eigen::VectorXd sum_x = Eigen::VectorXd::Zero(mx);
  Eigen::VectorXd sum_y = Eigen::VectorXd::Zero(my);
  Eigen::VectorXd sumsq_x = Eigen::VectorXd::Zero(mx);
  Eigen::VectorXd sumsq_y = Eigen::VectorXd::Zero(my);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < n; ++j) {
      const int k = rx(i, j) - 1;
      const int l = ry(i, j) - 1;
      const double a = ax(i, j);
      const double b = ay(i, j);
      cov(k, l) += a * b;
      sum_x(k) += a;
      sumsq_x(k) += a * a;
      sum_y(l) += b;
      sumsq_y(l) += b * b;
    }
  }
  for (int k = 1; k < mx; ++k) cov.row(k) += cov.row(k - 1);
  for (int l = 1; l < my; ++l) cov.col(l) += cov.col(l - 1);
  for (int k = 1; k < mx; ++k) {
    sum_x(k) += sum_x(k - 1);
    sumsq_x(k) += sumsq_x(k - 1);
  }
  for (int l = 1; l < my; ++l) {
    sum_y(l) += sum_y(l - 1);
    sumsq_y(l) += sumsq_y(l - 1);
  }

  // Truncated-mean correction: without it, small scales pick up the shared
  // negative bias of near-neighbor centered distances. At the full scale the
  // corrections vanish because U-centered matrices sum to zero.
  const double cells = static_cast<double>(n) * static_cast<double>(n);
  Eigen::MatrixXd corr(mx, my);
  Eigen::VectorXd var_x = sumsq_x - sum_x.cwiseProduct(sum_x) / cells;
  Eigen::VectorXd var_y = sumsq_y - sum_y.cwiseProduct(sum_y) / cells;
  for (int k = 0; k < mx; ++k) {
    for (int l = 0; l < my; ++l) {
      const double c = cov(k, l) - sum_x(k) * sum_y(l) / cells;
      const double denom = var_x(k) * var_y(l);
      corr(k, l) = denom > 0.0 ? std::clamp(c / std::sqrt(denom), -1.0, 1.0) : 0.0;
    }
  }

  MgcMap map;
  map.local_corr = corr;
  map.global_stat = corr(mx - 1, my - 1);
  map.stat = map.global_stat;
  map.opt_scale = Scale{mx, my};

  const double threshold = std::max(map.global_stat, null_quantile_threshold(n));
  std::vector<char> mask(static_cast<std::size_t>(mx) * my, 0);
  bool any = false;
  for (int k = 0; k < mx; ++k) {
    for (int l = 0; l < my; ++l) {
      const bool sig = corr(k, l) > threshold;
      mask[static_cast<std::size_t>(k) * my + l] = sig;
      any |= sig;
    }
  }
  if (any) {
    std::vector<char> region;
    const int size = largest_component(mask, mx, my, region);
    if (size >= 2 * n) {
      double best = map.global_stat;
      Scale best_scale = map.opt_scale;
      for (int k = 0; k < mx; ++k) {
        for (int l = 0; l < my; ++l) {
          if (region[static_cast<std::size_t>(k) * my + l] && corr(k, l) > best) {
            best = corr(k, l);
            best_scale = Scale{k + 1, l + 1};
          }
        }
      }
      map.stat = best;
      map.opt_scale = best_scale;
    }
  }
  return map;
}

GCorrStatistic mgc_graph(const AdjacencyMatrix& x, const AdjacencyMatrix& y) {
  const MgcMap map = mgc_map(x, y);
  return GCorrStatistic{map.stat, GCorrMethod::mgc, map.opt_scale};
}

GCorrStatistic compute_statistic(GCorrMethod method, const AdjacencyMatrix& x,
                                 const AdjacencyMatrix& y) {
  switch (method) {
    case GCorrMethod::pearson: return pearson_graph(x, y);
    case GCorrMethod::dcorr: return dcorr_graph(x, y);
    case GCorrMethod::mgc: return mgc_graph(x, y);
  }
  throw ValidationError("unknown statistic method");
}

}  // namespace gcorr
