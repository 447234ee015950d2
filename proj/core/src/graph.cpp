#include "gcorr/graph.hpp"

#include <algorithm>
#include <cmath>
#include <iostream>
#include <numeric>

namespace gcorr {

void warn(const std::string& message) {
  std::cerr << "gcorr: warning: " << message << "\n";
}

bool AdjacencyMatrix::is_binary() const {
  for (Eigen::Index j = 0; j < w.cols(); ++j) {
    for (Eigen::Index i = 0; i < w.rows(); ++i) {
      const double v = w(i, j);
      if (v != 0.0 && v != 1.0) return false;
    }
  }
  return true;
}

AdjacencyMatrix AdjacencyMatrix::checked(Eigen::MatrixXd w,
                                         std::vector<std::string> labels) {
  if (w.rows() != w.cols()) {
    throw DimensionMismatchError("adjacency matrix must be square, got " +
                                 std::to_string(w.rows()) + "x" +
                                 std::to_string(w.cols()));
  }
  if (!labels.empty() && static_cast<Eigen::Index>(labels.size()) != w.rows()) {
    throw DimensionMismatchError("label list length does not match vertex count");
  }
  for (Eigen::Index i = 0; i < w.rows(); ++i) {
    for (Eigen::Index j = i + 1; j < w.cols(); ++j) {
      if (w(i, j) != w(j, i)) {
        throw ValidationError("adjacency matrix is not symmetric at (" +
                              std::to_string(i) + "," + std::to_string(j) +
                              "); symmetrize directed input first");
      }
    }
  }
  bool had_diagonal = false;
  for (Eigen::Index i = 0; i < w.rows(); ++i) {
    if (w(i, i) != 0.0) {
      had_diagonal = true;
      w(i, i) = 0.0;
    }
  }
  if (had_diagonal) warn("nonzero diagonal entries dropped (self-loops are not modeled)");
  return AdjacencyMatrix{std::move(w), std::move(labels)};
}

CommunityAssignment CommunityAssignment::checked(std::vector<int> z, int k) {
  if (k < 1) throw ValidationError("block count must be >= 1");
  for (std::size_t i = 0; i < z.size(); ++i) {
    if (z[i] < 1 || z[i] > k) {
      throw ValidationError("block label " + std::to_string(z[i]) +
                            " at vertex " + std::to_string(i) +
                            " outside 1.." + std::to_string(k));
    }
  }
  return CommunityAssignment{std::move(z), k};
}

DistanceMatrix kernel_to_distance(const AdjacencyMatrix& x) {
  const Eigen::Index n = x.n();
  const double max_weight = x.w.maxCoeff();
  if (max_weight <= 0.0) {
    throw AllZeroMatrixError("kernel-to-distance transform undefined: max edge weight is 0");
  }
  if (x.w.diagonal().cwiseAbs().maxCoeff() != 0.0) {
    warn("adjacency diagonal not hollow; distances on the diagonal forced to 0");
  }
  Eigen::MatrixXd d = Eigen::MatrixXd::Ones(n, n) - x.w / max_weight;
  d.diagonal().setZero();
  return DistanceMatrix{std::move(d)};
}

std::pair<AdjacencyMatrix, CommunityAssignment> sort_vertices(
    const AdjacencyMatrix& x, const CommunityAssignment& z) {
  const Eigen::Index n = x.n();
  if (static_cast<Eigen::Index>(z.n()) != n) {
    throw DimensionMismatchError("assignment has " + std::to_string(z.n()) +
                                 " labels for " + std::to_string(n) + " vertices");
  }
  std::vector<int> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](int a, int b) { return z.z[a] < z.z[b]; });

  AdjacencyMatrix sorted;
  sorted.w = x.w(order, order);
  if (!x.labels.empty()) {
    sorted.labels.reserve(n);
    for (int idx : order) sorted.labels.push_back(x.labels[idx]);
  }
  CommunityAssignment sorted_z;
  sorted_z.k = z.k;
  sorted_z.z.reserve(n);
  for (int idx : order) sorted_z.z.push_back(z.z[idx]);
  return {std::move(sorted), std::move(sorted_z)};
}

AdjacencyMatrix symmetrize_directed(const Eigen::MatrixXd& w_directed,
                                    std::vector<std::string> labels) {
  if (w_directed.rows() != w_directed.cols()) {
    throw DimensionMismatchError("directed weight matrix must be square");
  }
  Eigen::MatrixXd out = (w_directed + w_directed.transpose()) / 2.0;
  out.diagonal().setZero();
  return AdjacencyMatrix{std::move(out), std::move(labels)};
}

Eigen::VectorXd vectorize_upper(const AdjacencyMatrix& x) {
  const Eigen::Index n = x.n();
  Eigen::VectorXd v(n * (n - 1) / 2);
  Eigen::Index pos = 0;
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = i + 1; j < n; ++j) {
      v(pos++) = x.w(i, j);
    }
  }
  return v;
}

CommunityAssignment make_assignment(Eigen::Index n,
                                    const std::vector<double>& proportions) {
  if (proportions.empty()) throw ValidationError("need at least one block proportion");
  double total = 0.0;
  for (double p : proportions) {
    if (p <= 0.0) throw ValidationError("block proportions must be positive");
    total += p;
  }
  CommunityAssignment out;
  out.k = static_cast<int>(proportions.size());
  out.z.reserve(n);
  double cumulative = 0.0;
  Eigen::Index assigned = 0;
  for (int b = 0; b < out.k; ++b) {
    cumulative += proportions[b] / total;
    const Eigen::Index boundary =
        (b == out.k - 1) ? n : static_cast<Eigen::Index>(std::llround(cumulative * n));
    if (boundary <= assigned) {
      throw ValidationError("block " + std::to_string(b + 1) +
                            " would be empty at n=" + std::to_string(n));
    }
    for (; assigned < boundary; ++assigned) out.z.push_back(b + 1);
  }
  return out;
}

}  // namespace gcorr
