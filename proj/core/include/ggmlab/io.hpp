#pragma once

#include <filesystem>
#include <iosfwd>
#include <vector>

#include "ggmlab/common.hpp"
#include "ggmlab/graph.hpp"

namespace ggmlab::io {

// Edge list: a header line "n=<count>" then one "u v" line per edge
// (0-based). The reader treats the header as optional; without it n is one
// past the largest label.
void write_edge_list(std::ostream& os, int n, const std::vector<Edge>& edges);
void write_edge_list(const std::filesystem::path& path, int n,
                     const std::vector<Edge>& edges);

struct EdgeList {
  int n = 0;
  std::vector<Edge> edges;
};

EdgeList read_edge_list(std::istream& is);
EdgeList read_edge_list(const std::filesystem::path& path);

// Dense comma-separated values, one matrix row per line, %.17g.
void write_csv(std::ostream& os, const Matrix& m);
void write_csv(const std::filesystem::path& path, const Matrix& m);
Matrix read_csv(std::istream& is);
Matrix read_csv(const std::filesystem::path& path);

// Matrix Market exchange format. Writes "array real general" (column-major);
// reads both array and coordinate layouts, general or symmetric.
void write_matrix_market(std::ostream& os, const Matrix& m);
void write_matrix_market(const std::filesystem::path& path, const Matrix& m);
Matrix read_matrix_market(std::istream& is);
Matrix read_matrix_market(const std::filesystem::path& path);

// Dispatches on extension: ".mtx" -> Matrix Market, anything else -> CSV.
Matrix read_matrix(const std::filesystem::path& path);
void write_matrix(const std::filesystem::path& path, const Matrix& m);

}  // namespace ggmlab::io
