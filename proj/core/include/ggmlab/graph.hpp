#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "ggmlab/common.hpp"

namespace ggmlab {

using Edge = std::pair<int, int>;  // always stored with first < second

enum class Topology { kBinaryTree, kGrid, kErdosRenyi };

// Topology tag plus its parameters.
struct GraphSpec {
  Topology topology = Topology::kGrid;
  int height = 0;  // tree height, or grid rows
  int width = 0;   // grid columns
  int n = 0;       // Erdos-Renyi vertex count
  double p = 0.0;  // Erdos-Renyi edge probability

  static GraphSpec binary_tree(int height);
  static GraphSpec grid(int width, int height);
  static GraphSpec erdos_renyi(int n, double p);

  // Throws ParameterError on out-of-range parameters.
  void validate() const;
  int vertex_count() const;
  // Comma-free label, e.g. "grid-9x9", "tree-h5", "er-n15-p0.05".
  std::string tag() const;
};

struct GraphModel {
  int n = 0;
  std::vector<Edge> edges;  // sorted, unique, no self-loops
  GraphSpec spec;
  Matrix laplacian;  // normalized Laplacian
};

/// Builds the graph for `spec`. Trees and grids are deterministic; Erdos-Renyi
/// includes each unordered pair independently with probability p, drawn from
/// `seed`.
///
/// Labeling: tree root is 0 with children 2i+1, 2i+2; grid vertices are
/// row-major with 4-neighbour connectivity.
GraphModel generate_graph(const GraphSpec& spec, std::uint64_t seed = 0);

/// L = I - D^{-1/2} A D^{-1/2}. Rows and columns of isolated vertices are zero.
Matrix normalized_laplacian(int n, std::span<const Edge> edges);
Matrix normalized_laplacian(const GraphModel& g);

struct Partition {
  std::vector<int> v1;  // target vertices, ascending
  std::vector<int> v2;  // external vertices, ascending
  std::uint64_t seed = 0;

  int n1() const { return static_cast<int>(v1.size()); }
  int n2() const { return static_cast<int>(v2.size()); }
  // v1 followed by v2: position k in the reindexed model is vertex order()[k].
  std::vector<int> order() const;
};

// Uniformly random n1-subset of the vertices as V1; deterministic per seed.
Partition partition_vertices(const GraphModel& g, int n1, std::uint64_t seed);

/// Global precision with V1 occupying the leading block.
struct PartitionedPrecision {
  Matrix theta;
  double epsilon = 0.0;
  Matrix theta1;
  Matrix theta2;
  Matrix theta12;
  Matrix marginal_theta1;
  Matrix sigma;
  std::vector<int> permutation;  // reindexed position -> original label

  int n1() const { return static_cast<int>(theta1.rows()); }
  int n2() const { return static_cast<int>(theta2.rows()); }
  Matrix theta21() const { return theta12.transpose(); }
};

/// Theta = L + epsilon*I reindexed so that V1 precedes V2, with all blocks,
/// the marginal precision over V1 and Sigma = Theta^{-1} populated.
PartitionedPrecision build_ground_truth(const GraphModel& g, double epsilon,
                                        const Partition& part);

/// Splits an already-ordered PD matrix at n1. Epsilon is recorded as given.
PartitionedPrecision split_precision(const Matrix& theta, int n1,
                                     double epsilon = 0.0);

/// Schur complement Theta1 - Theta12 Theta2^{-1} Theta21 and its sparse /
/// low-rank split (C, M) = (Theta1, Theta12 Theta2^{-1} Theta21).
struct MarginalSplit {
  Matrix marginal;
  Matrix sparse;
  Matrix low_rank;
};

MarginalSplit marginal_precision(const PartitionedPrecision& pp);

// Edges of G restricted to V1, relabeled to positions within part.v1.
std::vector<Edge> target_edges(const GraphModel& g, const Partition& part);

}  // namespace ggmlab
