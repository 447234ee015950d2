#pragma once

#include <optional>
#include <string>

#include "gcorr/graph.hpp"

namespace gcorr {

/// U-centered distance matrix: the Szekely-Rizzo modification of double
/// centering whose inner products give unbiased distance covariances.
/// Off-diagonal row sums are zero; the diagonal is zero.
struct CenteredDistanceMatrix {
  Eigen::MatrixXd a;

  Eigen::Index n() const { return a.rows(); }
};

enum class GCorrMethod { pearson, dcorr, mgc };

std::string to_string(GCorrMethod method);
GCorrMethod method_from_string(const std::string& name);

/// MGC neighborhood-size pair (number of x-neighbors, number of y-neighbors).
struct Scale {
  int k = 0;
  int l = 0;
};

/// A graph correlation value plus enough metadata for downstream reporting.
struct GCorrStatistic {
  double value = 0.0;
  GCorrMethod method = GCorrMethod::pearson;
  std::optional<Scale> scale;  // set for mgc only
};

/// Pearson correlation of the two vectorized strict upper triangles. For an
/// undirected graph the upper triangle carries all edge information; including
/// the mirrored lower triangle would not change the value.
/// Throws ConstantInputError when either triangle has zero variance.
GCorrStatistic pearson_graph(const AdjacencyMatrix& x, const AdjacencyMatrix& y);

/// U-centering: a~[i][j] = d[i][j] - rowsum_i/(n-2) - colsum_j/(n-2)
///                        + grandsum/((n-1)(n-2)) for i != j, zero diagonal.
/// Requires n >= 4 (the U-statistic denominator n(n-3) vanishes below that).
CenteredDistanceMatrix u_center(const DistanceMatrix& d);

/// Unbiased sample distance covariance:
///   (1/(n(n-3))) * sum_{i != j} cx[i][j] * cy[i][j].
double dcov_unbiased(const CenteredDistanceMatrix& cx,
                     const CenteredDistanceMatrix& cy);

/// Distance correlation of the kernel-induced distances of both graphs,
/// normalized per R^2 = V^2(x,y)/sqrt(V^2(x,x) V^2(y,y)); returns 0 when
/// either distance variance is <= 0. Adjacency kernels are indefinite, so the
/// value may legitimately be negative.
GCorrStatistic dcorr_graph(const AdjacencyMatrix& x, const AdjacencyMatrix& y);

/// Full grid of local distance correlations plus the smoothed-maximum choice.
struct MgcMap {
  Eigen::MatrixXd local_corr;  // scale (k,l) at entry (k-1,l-1)
  double global_stat = 0.0;    // == unbiased dcorr of the same inputs
  double stat = 0.0;           // smoothed maximum (falls back to global)
  Scale opt_scale;
};

/// Multiscale graph correlation. Local correlations are rank-truncated
/// U-centered distance products over every neighborhood-size pair; distance
/// ranks are dense (tied distances share a rank), which collapses binary
/// graphs to a 2x2 scale grid. The smoothed maximum is accepted only when a
/// connected region of scales beating max(global statistic, a high quantile
/// of the null of the global statistic) covers at least 2n grid entries;
/// otherwise the global (DCorr) value is returned. Hence mgc >= dcorr always.
MgcMap mgc_map(const AdjacencyMatrix& x, const AdjacencyMatrix& y);

GCorrStatistic mgc_graph(const AdjacencyMatrix& x, const AdjacencyMatrix& y);

/// Dispatch by method enum; used by the inference layer.
GCorrStatistic compute_statistic(GCorrMethod method, const AdjacencyMatrix& x,
                                 const AdjacencyMatrix& y);

}  // namespace gcorr
