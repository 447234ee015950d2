#include "gcorr/io.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>

namespace gcorr {

namespace {

std::string format_double(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

std::ifstream open_input(const std::filesystem::path& file) {
  std::ifstream in(file);
  if (!in) throw ValidationError("cannot open " + file.string());
  return in;
}

std::ofstream open_output(const std::filesystem::path& file) {
  std::ofstream out(file);
  if (!out) throw ValidationError("cannot write " + file.string());
  return out;
}

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> fields;
  std::string field;
  std::stringstream ss(line);
  while (std::getline(ss, field, ',')) fields.push_back(field);
  if (!line.empty() && line.back() == ',') fields.emplace_back();
  return fields;
}

std::string strip(const std::string& s) {
  const auto begin = s.find_first_not_of(" \t\r\n");
  if (begin == std::string::npos) return "";
  const auto end = s.find_last_not_of(" \t\r\n");
  return s.substr(begin, end - begin + 1);
}

double parse_weight(const std::string& field, std::size_t line_number) {
  try {
    std::size_t used = 0;
    const double v = std::stod(field, &used);
    if (strip(field.substr(used)).empty()) return v;
  } catch (const std::exception&) {
  }
  throw ParseError("bad numeric field '" + field + "'", line_number);
}

bool looks_like_edge_list_header(const std::string& line) {
  const auto fields = split_csv_line(line);
  return fields.size() == 3 && strip(fields[0]) == "source" &&
         strip(fields[1]) == "target" && strip(fields[2]) == "weight";
}

}  // namespace

AdjacencyMatrix read_dense_csv(const std::filesystem::path& file) {
  std::ifstream in = open_input(file);
  std::vector<std::vector<double>> rows;
  std::string line;
  std::size_t line_number = 0;
  while (std::getline(in, line)) {
    ++line_number;
    if (strip(line).empty()) continue;
    const auto fields = split_csv_line(line);
    std::vector<double> row;
    row.reserve(fields.size());
    for (const auto& f : fields) row.push_back(parse_weight(f, line_number));
    if (!rows.empty() && row.size() != rows.front().size()) {
      throw ParseError("ragged row: expected " +
                           std::to_string(rows.front().size()) + " fields, got " +
                           std::to_string(row.size()),
                       line_number);
    }
    rows.push_back(std::move(row));
  }
  if (rows.empty()) throw ValidationError("empty graph file " + file.string());
  if (rows.size() != rows.front().size()) {
    throw ValidationError("dense matrix in " + file.string() + " is not square");
  }
  const Eigen::Index n = static_cast<Eigen::Index>(rows.size());
  Eigen::MatrixXd w(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < n; ++j) {
      w(i, j) = rows[i][j];
    }
  }
  return AdjacencyMatrix::checked(std::move(w));
}

void write_dense_csv(const std::filesystem::path& file, const AdjacencyMatrix& x) {
  std::ofstream out = open_output(file);
  const Eigen::Index n = x.n();
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < n; ++j) {
      if (j) out << ',';
      out << format_double(x.w(i, j));
    }
    out << '\n';
  }
}

EdgeListData read_edge_list_raw(const std::filesystem::path& file) {
  std::ifstream in = open_input(file);
  std::string line;
  std::size_t line_number = 0;
  if (!std::getline(in, line)) {
    throw ValidationError("empty edge list " + file.string());
  }
  ++line_number;
  if (!looks_like_edge_list_header(line)) {
    throw ParseError("expected header 'source,target,weight'", line_number);
  }
  struct Edge {
    std::string source, target;
    double weight;
  };
  std::vector<Edge> edges;
  std::map<std::string, int> name_index;
  while (std::getline(in, line)) {
    ++line_number;
    if (strip(line).empty()) continue;
    const auto fields = split_csv_line(line);
    if (fields.size() != 3) {
      throw ParseError("expected 3 fields, got " + std::to_string(fields.size()),
                       line_number);
    }
    Edge e{strip(fields[0]), strip(fields[1]), parse_weight(fields[2], line_number)};
    if (e.source.empty() || e.target.empty()) {
      throw ParseError("empty vertex name", line_number);
    }
    name_index.emplace(e.source, 0);
    name_index.emplace(e.target, 0);
    edges.push_back(std::move(e));
  }
  EdgeListData data;
  data.names.reserve(name_index.size());
  for (auto& [name, idx] : name_index) {
    idx = static_cast<int>(data.names.size());
    data.names.push_back(name);
  }
  const Eigen::Index n = static_cast<Eigen::Index>(data.names.size());
  data.w = Eigen::MatrixXd::Zero(n, n);
  for (const auto& e : edges) {
    data.w(name_index[e.source], name_index[e.target]) = e.weight;
  }
  return data;
}

AdjacencyMatrix read_edge_list_csv(const std::filesystem::path& file) {
  EdgeListData data = read_edge_list_raw(file);
  return symmetrize_directed(data.w, std::move(data.names));
}

void write_edge_list_csv(const std::filesystem::path& file, const AdjacencyMatrix& x) {
  std::ofstream out = open_output(file);
  out << "source,target,weight\n";
  const Eigen::Index n = x.n();
  auto name = [&](Eigen::Index i) {
    return x.labels.empty() ? "v" + std::to_string(i) : x.labels[i];
  };
  // both orientations are written so the averaging reader round-trips exactly
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = i + 1; j < n; ++j) {
      if (x.w(i, j) != 0.0) {
        out << name(i) << ',' << name(j) << ',' << format_double(x.w(i, j)) << '\n';
        out << name(j) << ',' << name(i) << ',' << format_double(x.w(i, j)) << '\n';
      }
    }
  }
}

AdjacencyMatrix read_graph(const std::filesystem::path& file) {
  {
    std::ifstream in = open_input(file);
    std::string first;
    std::getline(in, first);
    if (looks_like_edge_list_header(first)) return read_edge_list_csv(file);
  }
  return read_dense_csv(file);
}

std::pair<AdjacencyMatrix, AdjacencyMatrix> ingest_connectome(
    const std::filesystem::path& file_a, const std::filesystem::path& file_b,
    const IngestOptions& opts) {
  const EdgeListData a = read_edge_list_raw(file_a);
  const EdgeListData b = read_edge_list_raw(file_b);

  std::vector<std::string> shared;
  std::set_intersection(a.names.begin(), a.names.end(), b.names.begin(),
                        b.names.end(), std::back_inserter(shared));
  if (shared.empty()) {
    throw EmptyIntersectionError("the two edge lists share no vertex names");
  }

  auto restrict_to = [&](const EdgeListData& data) {
    std::map<std::string, int> index;
    for (std::size_t i = 0; i < data.names.size(); ++i) index[data.names[i]] = int(i);
    const Eigen::Index n = static_cast<Eigen::Index>(shared.size());
    Eigen::MatrixXd sub(n, n);
    for (Eigen::Index i = 0; i < n; ++i) {
      for (Eigen::Index j = 0; j < n; ++j) {
        sub(i, j) = data.w(index[shared[i]], index[shared[j]]);
      }
    }
    return sub;
  };

  AdjacencyMatrix ga = symmetrize_directed(restrict_to(a), shared);
  AdjacencyMatrix gb = symmetrize_directed(restrict_to(b), shared);
  if (opts.binarize) {
    ga.w = (ga.w.array() > 0.0).cast<double>();
    gb.w = (gb.w.array() > 0.0).cast<double>();
  }
  return {std::move(ga), std::move(gb)};
}

}  // namespace gcorr
