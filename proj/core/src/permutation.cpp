#include "gcorr/permutation.hpp"

#include <vector>

namespace gcorr {

AdjacencyMatrix block_permute(const AdjacencyMatrix& x,
                              const CommunityAssignment& z, Rng& rng) {
  auto [sorted, sorted_z] = sort_vertices(x, z);
  const Eigen::Index n = sorted.n();

  // Block boundaries in the sorted order: block b occupies [start[b], end[b]).
  std::vector<Eigen::Index> starts, ends;
  Eigen::Index pos = 0;
  while (pos < n) {
    Eigen::Index stop = pos;
    while (stop < n && sorted_z.z[stop] == sorted_z.z[pos]) ++stop;
    starts.push_back(pos);
    ends.push_back(stop);
    pos = stop;
  }
  const std::size_t blocks = starts.size();

  Eigen::MatrixXd w = sorted.w;
  std::vector<double> entries;
  for (std::size_t bi = 0; bi < blocks; ++bi) {
    for (std::size_t bj = bi; bj < blocks; ++bj) {
      entries.clear();
      if (bi == bj) {
        // symmetric diagonal block: permute its strict upper triangle
        for (Eigen::Index i = starts[bi]; i < ends[bi]; ++i) {
          for (Eigen::Index j = i + 1; j < ends[bi]; ++j) {
            entries.push_back(w(i, j));
          }
        }
        if (entries.size() < 2) continue;
        rng.shuffle(entries);
        std::size_t at = 0;
        for (Eigen::Index i = starts[bi]; i < ends[bi]; ++i) {
          for (Eigen::Index j = i + 1; j < ends[bi]; ++j) {
            w(i, j) = entries[at++];
          }
        }
      } else {
        // off-diagonal block above the diagonal: permute the full rectangle;
        // its mirror below the diagonal is overwritten by symmetrization
        for (Eigen::Index i = starts[bi]; i < ends[bi]; ++i) {
          for (Eigen::Index j = starts[bj]; j < ends[bj]; ++j) {
            entries.push_back(w(i, j));
          }
        }
        if (entries.size() < 2) continue;
        rng.shuffle(entries);
        std::size_t at = 0;
        for (Eigen::Index i = starts[bi]; i < ends[bi]; ++i) {
          for (Eigen::Index j = starts[bj]; j < ends[bj]; ++j) {
            w(i, j) = entries[at++];
          }
        }
      }
    }
  }

  // mirror the upper triangle
  for (Eigen::Index i = 0; i < n; ++i) {
    w(i, i) = 0.0;
    for (Eigen::Index j = i + 1; j < n; ++j) {
      w(j, i) = w(i, j);
    }
  }
  return AdjacencyMatrix{std::move(w), std::move(sorted.labels)};
}

}  // namespace gcorr
