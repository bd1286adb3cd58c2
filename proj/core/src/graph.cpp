#include "ggmlab/graph.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

#include "ggmlab/linalg.hpp"

namespace ggmlab {

GraphSpec GraphSpec::binary_tree(int height) {
  GraphSpec s;
  s.topology = Topology::kBinaryTree;
  s.height = height;
  return s;
}

GraphSpec GraphSpec::grid(int width, int height) {
  GraphSpec s;
  s.topology = Topology::kGrid;
  s.width = width;
  s.height = height;
  return s;
}

GraphSpec GraphSpec::erdos_renyi(int n, double p) {
  GraphSpec s;
  s.topology = Topology::kErdosRenyi;
  s.n = n;
  s.p = p;
  return s;
}

void GraphSpec::validate() const {
  switch (topology) {
    case Topology::kBinaryTree:
      if (height < 1 || height > 20) {
        throw ParameterError("binary_tree: height must be in [1, 20]");
      }
      break;
    case Topology::kGrid:
      if (width < 2 || height < 2) {
        throw ParameterError("grid: width and height must be >= 2");
      }
      break;
    case Topology::kErdosRenyi:
      if (n < 2) throw ParameterError("erdos_renyi: n must be >= 2");
      if (!(p >= 0.0 && p <= 1.0)) {
        throw ParameterError("erdos_renyi: p must be in [0, 1]");
      }
      break;
  }
}

int GraphSpec::vertex_count() const {
  switch (topology) {
    case Topology::kBinaryTree:
      return (1 << (height + 1)) - 1;
    case Topology::kGrid:
      return width * height;
    case Topology::kErdosRenyi:
      return n;
  }
  return 0;
}

std::string GraphSpec::tag() const {
  std::ostringstream os;
  switch (topology) {
    case Topology::kBinaryTree:
      os << "tree-h" << height;
      break;
    case Topology::kGrid:
      os << "grid-" << width << "x" << height;
      break;
    case Topology::kErdosRenyi:
      os << "er-n" << n << "-p" << p;
      break;
  }
  return os.str();
}

GraphModel generate_graph(const GraphSpec& spec, std::uint64_t seed) {
  spec.validate();
  GraphModel g;
  g.spec = spec;
  g.n = spec.vertex_count();

  switch (spec.topology) {
    case Topology::kBinaryTree:
      for (int i = 1; i < g.n; ++i) g.edges.emplace_back((i - 1) / 2, i);
      break;
    case Topology::kGrid:
      for (int r = 0; r < spec.height; ++r) {
        for (int c = 0; c < spec.width; ++c) {
          const int v = r * spec.width + c;
          if (c + 1 < spec.width) g.edges.emplace_back(v, v + 1);
          if (r + 1 < spec.height) g.edges.emplace_back(v, v + spec.width);
        }
      }
      break;
    case Topology::kErdosRenyi: {
      Rng rng(seed);
      std::bernoulli_distribution coin(spec.p);
      for (int i = 0; i < g.n; ++i) {
        for (int j = i + 1; j < g.n; ++j) {
          if (coin(rng)) g.edges.emplace_back(i, j);
        }
      }
      break;
    }
  }
  std::sort(g.edges.begin(), g.edges.end());
  g.laplacian = normalized_laplacian(g.n, g.edges);
  return g;
}

Matrix normalized_laplacian(int n, std::span<const Edge> edges) {
  Vector degree = Vector::Zero(n);
  for (const auto& [u, v] : edges) {
    if (u == v || u < 0 || v < 0 || u >= n || v >= n) {
      throw ParameterError("normalized_laplacian: invalid edge");
    }
    degree(u) += 1.0;
    degree(v) += 1.0;
  }
  Matrix lap = Matrix::Zero(n, n);
  for (int i = 0; i < n; ++i) {
    if (degree(i) > 0.0) lap(i, i) = 1.0;
  }
  for (const auto& [u, v] : edges) {
    const double w = -1.0 / std::sqrt(degree(u) * degree(v));
    lap(u, v) += w;
    lap(v, u) += w;
  }
  return lap;
}

Matrix normalized_laplacian(const GraphModel& g) {
  return normalized_laplacian(g.n, g.edges);
}

std::vector<int> Partition::order() const {
  std::vector<int> out(v1);
  out.insert(out.end(), v2.begin(), v2.end());
  return out;
}

Partition partition_vertices(const GraphModel& g, int n1, std::uint64_t seed) {
  if (n1 < 1 || n1 >= g.n) {
    throw ParameterError("partition_vertices: n1 must satisfy 1 <= n1 < n");
  }
  std::vector<int> perm(g.n);
  std::iota(perm.begin(), perm.end(), 0);
  Rng rng(seed);
  // Fisher-Yates with an explicit uniform draw so the result does not depend
  // on the standard library's shuffle implementation.
  for (int i = g.n - 1; i > 0; --i) {
    std::uniform_int_distribution<int> pick(0, i);
    std::swap(perm[i], perm[pick(rng)]);
  }
  Partition part;
  part.seed = seed;
  part.v1.assign(perm.begin(), perm.begin() + n1);
  part.v2.assign(perm.begin() + n1, perm.end());
  std::sort(part.v1.begin(), part.v1.end());
  std::sort(part.v2.begin(), part.v2.end());
  return part;
}

PartitionedPrecision split_precision(const Matrix& theta, int n1,
                                     double epsilon) {
  const auto n = static_cast<int>(theta.rows());
  if (theta.cols() != n) throw ParameterError("precision must be square");
  if (n1 < 1 || n1 >= n) throw ParameterError("split: need 1 <= n1 < n");
  const int n2 = n - n1;

  PartitionedPrecision pp;
  pp.theta = symmetrize(theta);
  pp.epsilon = epsilon;
  pp.theta1 = pp.theta.topLeftCorner(n1, n1);
  pp.theta2 = pp.theta.bottomRightCorner(n2, n2);
  pp.theta12 = pp.theta.topRightCorner(n1, n2);
  pp.sigma = inverse_pd(pp.theta);
  pp.marginal_theta1 = marginal_precision(pp).marginal;
  pp.permutation.resize(n);
  std::iota(pp.permutation.begin(), pp.permutation.end(), 0);
  return pp;
}

PartitionedPrecision build_ground_truth(const GraphModel& g, double epsilon,
                                        const Partition& part) {
  if (!(epsilon > 0.0)) {
    throw ParameterError("build_ground_truth: epsilon must be > 0");
  }
  if (part.n1() + part.n2() != g.n) {
    throw ParameterError("build_ground_truth: partition does not cover graph");
  }
  const std::vector<int> order = part.order();
  Matrix theta(g.n, g.n);
  for (int i = 0; i < g.n; ++i) {
    for (int j = 0; j < g.n; ++j) {
      theta(i, j) = g.laplacian(order[i], order[j]);
    }
    theta(i, i) += epsilon;
  }
  PartitionedPrecision pp = split_precision(theta, part.n1(), epsilon);
  pp.permutation = order;
  return pp;
}

MarginalSplit marginal_precision(const PartitionedPrecision& pp) {
  Eigen::LLT<Matrix> llt(symmetrize(pp.theta2));
  if (llt.info() != Eigen::Success) {
    throw LinalgError("marginal_precision: Theta2 is singular or not PD");
  }
  MarginalSplit out;
  out.sparse = pp.theta1;
  out.low_rank = symmetrize(pp.theta12 * llt.solve(pp.theta12.transpose()));
  out.marginal = out.sparse - out.low_rank;
  return out;
}

std::vector<Edge> target_edges(const GraphModel& g, const Partition& part) {
  std::vector<int> local(g.n, -1);
  for (int k = 0; k < part.n1(); ++k) local[part.v1[k]] = k;
  std::vector<Edge> out;
  for (const auto& [u, v] : g.edges) {
    const int a = local[u];
    const int b = local[v];
    if (a >= 0 && b >= 0) out.emplace_back(std::min(a, b), std::max(a, b));
  }
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace ggmlab
