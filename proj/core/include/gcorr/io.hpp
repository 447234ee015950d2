#pragma once

#include <filesystem>
#include <utility>

#include "gcorr/graph.hpp"

namespace gcorr {

/// Dense format: n rows of n comma-separated reals, no header.
AdjacencyMatrix read_dense_csv(const std::filesystem::path& file);
void write_dense_csv(const std::filesystem::path& file, const AdjacencyMatrix& x);

/// Directed weighted edge list straight from file: header `source,target,weight`,
/// string vertex names, absent pairs meaning weight 0.
struct EdgeListData {
  std::vector<std::string> names;  // lexicographically sorted
  Eigen::MatrixXd w;               // directed weights, w(i,j) = weight i -> j
};
EdgeListData read_edge_list_raw(const std::filesystem::path& file);

/// Edge list reader for general use: accepts directed input and symmetrizes
/// by averaging the two orientations.
AdjacencyMatrix read_edge_list_csv(const std::filesystem::path& file);
void write_edge_list_csv(const std::filesystem::path& file, const AdjacencyMatrix& x);

/// Reads either format, deciding by the `source,target,weight` header.
AdjacencyMatrix read_graph(const std::filesystem::path& file);

struct IngestOptions {
  bool binarize = false;  // after averaging, weights > 0 become 1
};

/// Pairs two directed edge lists into vertex-matched undirected graphs:
/// intersects the vertex name sets, orders both lexicographically, averages
/// the two directed weights of every pair.
std::pair<AdjacencyMatrix, AdjacencyMatrix> ingest_connectome(
    const std::filesystem::path& file_a, const std::filesystem::path& file_b,
    const IngestOptions& opts = {});

}  // namespace gcorr
