#pragma once

#include <Eigen/Dense>
#include <string>
#include <utility>
#include <vector>

#include "gcorr/errors.hpp"

namespace gcorr {

/// Symmetric edge-weight matrix with zero diagonal. Binary graphs use {0,1}
/// entries. The optional vertex labels travel with the matrix through sorting
/// and file round trips.
struct AdjacencyMatrix {
  Eigen::MatrixXd w;
  std::vector<std::string> labels;  // empty or size n

  Eigen::Index n() const { return w.rows(); }
  bool is_binary() const;

  /// Validates squareness, symmetry, zero diagonal, and label length.
  /// Use for untrusted input (files); internal builders construct directly.
  static AdjacencyMatrix checked(Eigen::MatrixXd w,
                                 std::vector<std::string> labels = {});
};

/// Vertex -> block label map. Labels take values in 1..k.
struct CommunityAssignment {
  std::vector<int> z;
  int k = 0;

  std::size_t n() const { return z.size(); }

  static CommunityAssignment checked(std::vector<int> z, int k);
};

/// Kernel-induced distance matrix, D = J - (I + X / max X).
struct DistanceMatrix {
  Eigen::MatrixXd d;

  Eigen::Index n() const { return d.rows(); }
};

/// Treats the adjacency matrix as a similarity kernel and converts it to a
/// distance: D[i][j] = 1 - x[i][j] / max(x) for i != j, D[i][i] = 0.
/// The diagonal is forced to zero even if the input violates hollowness
/// (a warning is emitted in that case).
/// Throws AllZeroMatrixError when max(x) = 0, where the transform is undefined.
DistanceMatrix kernel_to_distance(const AdjacencyMatrix& x);

/// Simultaneously reorders rows and columns so block labels are nondecreasing.
/// The sort is stable within a block, so repeated calls with the same labels
/// give one canonical order. Returns the reordered matrix and sorted labels.
std::pair<AdjacencyMatrix, CommunityAssignment> sort_vertices(
    const AdjacencyMatrix& x, const CommunityAssignment& z);

/// Averages the two directed weights of every vertex pair:
/// out[i][j] = (w[i][j] + w[j][i]) / 2, with the diagonal zeroed.
AdjacencyMatrix symmetrize_directed(const Eigen::MatrixXd& w_directed,
                                    std::vector<std::string> labels = {});

/// Row-major strict upper triangle as a flat vector of length n(n-1)/2.
Eigen::VectorXd vectorize_upper(const AdjacencyMatrix& x);

/// Partitions n vertices into blocks with the given proportions; sizes are
/// assigned by cumulative rounding so they always sum to n. Labels come out
/// sorted (1,...,1,2,...,2,...).
CommunityAssignment make_assignment(Eigen::Index n,
                                    const std::vector<double>& proportions);

}  // namespace gcorr
