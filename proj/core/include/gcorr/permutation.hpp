#pragma once

#include "gcorr/graph.hpp"
#include "gcorr/rng.hpp"

namespace gcorr {

/// Within-block shuffle of an adjacency matrix. Vertices are first sorted by
/// block label; every block region of the upper triangle is then permuted
/// independently: diagonal blocks shuffle only their strict upper triangle
/// (they are symmetric), off-diagonal blocks shuffle the full rectangle.
/// Finally the upper triangle is mirrored to keep the output symmetric.
///
/// The per-block entry multiset is preserved exactly, so an SBM's block
/// structure survives while edgewise pairing with a companion graph is
/// destroyed. The returned matrix is in sorted-vertex order; callers comparing
/// against a companion matrix must sort it with the same labels
/// (sort_vertices(y, z)).
AdjacencyMatrix block_permute(const AdjacencyMatrix& x,
                              const CommunityAssignment& z, Rng& rng);

}  // namespace gcorr
