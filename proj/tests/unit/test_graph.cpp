#include <gtest/gtest.h>

#include <algorithm>
#include <numeric>
#include <set>

#include "ggmlab/graph.hpp"
#include "ggmlab/linalg.hpp"
#include "support/generators.hpp"

namespace ggmlab {
namespace {

using testing::random_pd;

TEST(GenerateGraph, BinaryTreeCounts) {
  const GraphModel g = generate_graph(GraphSpec::binary_tree(3));
  EXPECT_EQ(g.n, 15);
  EXPECT_EQ(g.edges.size(), 14u);
  // Root 0, children 2i+1, 2i+2.
  EXPECT_TRUE(std::binary_search(g.edges.begin(), g.edges.end(), Edge{0, 1}));
  EXPECT_TRUE(std::binary_search(g.edges.begin(), g.edges.end(), Edge{6, 14}));
}

TEST(GenerateGraph, GridCounts) {
  const GraphModel g = generate_graph(GraphSpec::grid(5, 5));
  EXPECT_EQ(g.n, 25);
  EXPECT_EQ(g.edges.size(), 40u);
  const GraphModel r = generate_graph(GraphSpec::grid(4, 3));
  EXPECT_EQ(r.edges.size(), static_cast<std::size_t>(4 * 2 + 3 * 3));
}

TEST(GenerateGraph, ErdosRenyiMeanEdgeCount) {
  const GraphSpec spec = GraphSpec::erdos_renyi(15, 0.05);
  double total = 0.0;
  const int seeds = 10000;
  for (int s = 0; s < seeds; ++s) {
    total += static_cast<double>(generate_graph(spec, s).edges.size());
  }
  const double expected = 105 * 0.05;  // C(15,2) p
  EXPECT_NEAR(total / seeds, expected, 0.15);
}

TEST(GenerateGraph, ErdosRenyiDeterministicPerSeed) {
  const GraphSpec spec = GraphSpec::erdos_renyi(30, 0.2);
  EXPECT_EQ(generate_graph(spec, 9).edges, generate_graph(spec, 9).edges);
  EXPECT_NE(generate_graph(spec, 9).edges, generate_graph(spec, 10).edges);
}

TEST(GenerateGraph, RejectsBadParameters) {
  EXPECT_THROW(generate_graph(GraphSpec::binary_tree(0)), ParameterError);
  EXPECT_THROW(generate_graph(GraphSpec::grid(1, 5)), ParameterError);
  EXPECT_THROW(generate_graph(GraphSpec::erdos_renyi(1, 0.5)), ParameterError);
  EXPECT_THROW(generate_graph(GraphSpec::erdos_renyi(5, 1.5)), ParameterError);
}

TEST(NormalizedLaplacian, SingleEdge) {
  const std::vector<Edge> e = {{0, 1}};
  const Matrix l = normalized_laplacian(2, e);
  Matrix expected(2, 2);
  expected << 1, -1, -1, 1;
  EXPECT_LT((l - expected).norm(), 1e-15);
}

TEST(NormalizedLaplacian, NoEdgesIsZero) {
  const Matrix l = normalized_laplacian(4, std::vector<Edge>{});
  EXPECT_EQ(l.norm(), 0.0);
}

TEST(NormalizedLaplacian, GridSpectrum) {
  const GraphModel g = generate_graph(GraphSpec::grid(3, 3));
  const SymmetricEigen eig = eigen_symmetric(g.laplacian);
  EXPECT_NEAR(eig.values(0), 0.0, 1e-12);
  EXPECT_LE(eig.values.maxCoeff(), 2.0 + 1e-10);
  EXPECT_GE(eig.values.minCoeff(), -1e-10);
}

TEST(NormalizedLaplacian, IsolatedVertexRowIsZero) {
  const std::vector<Edge> e = {{0, 1}, {1, 2}};
  const Matrix l = normalized_laplacian(4, e);
  EXPECT_EQ(l.row(3).norm(), 0.0);
  EXPECT_EQ(l.col(3).norm(), 0.0);
}

TEST(PartitionVertices, Sizes) {
  const GraphModel g = generate_graph(GraphSpec::binary_tree(3));
  const Partition p = partition_vertices(g, 10, 1);
  EXPECT_EQ(p.n1(), 10);
  EXPECT_EQ(p.n2(), 5);
  const Partition q = partition_vertices(g, 14, 1);
  EXPECT_EQ(q.n2(), 1);
}

TEST(PartitionVertices, DeterministicPerSeed) {
  const GraphModel g = generate_graph(GraphSpec::grid(4, 4));
  const Partition a = partition_vertices(g, 7, 42);
  const Partition b = partition_vertices(g, 7, 42);
  EXPECT_EQ(a.v1, b.v1);
  EXPECT_EQ(a.v2, b.v2);
}

TEST(PartitionVertices, RejectsOutOfRange) {
  const GraphModel g = generate_graph(GraphSpec::grid(3, 3));
  EXPECT_THROW(partition_vertices(g, 0, 1), ParameterError);
  EXPECT_THROW(partition_vertices(g, 9, 1), ParameterError);
}

TEST(MarginalPrecision, TwoByTwo) {
  Matrix theta(2, 2);
  theta << 2, 1, 1, 2;
  const PartitionedPrecision pp = split_precision(theta, 1);
  EXPECT_NEAR(pp.marginal_theta1(0, 0), 1.5, 1e-15);
  EXPECT_NEAR(marginal_precision(pp).marginal(0, 0), 1.5, 1e-15);
  EXPECT_NEAR(1.0 / pp.sigma(0, 0), 1.5, 1e-12);
}

TEST(MarginalPrecision, DisconnectedBlocks) {
  Matrix theta = Matrix::Zero(4, 4);
  theta.topLeftCorner(2, 2) << 3, 1, 1, 2;
  theta.bottomRightCorner(2, 2) << 2, -0.5, -0.5, 1;
  const MarginalSplit ms = marginal_precision(split_precision(theta, 2));
  EXPECT_LT((ms.marginal - theta.topLeftCorner(2, 2)).norm(), 1e-15);
  EXPECT_EQ(ms.low_rank.norm(), 0.0);
}

TEST(MarginalPrecision, MatchesDirectInversion) {
  Rng rng(3);
  const Matrix theta = random_pd(4, rng);
  const MarginalSplit ms = marginal_precision(split_precision(theta, 2));
  const Matrix sigma = theta.inverse();  // independent route: LU inverse
  const Matrix oracle = sigma.topLeftCorner(2, 2).inverse();
  EXPECT_LT((ms.marginal - oracle).cwiseAbs().maxCoeff(), 1e-10);
  EXPECT_LT((ms.marginal - (ms.sparse - ms.low_rank)).norm(), 1e-14);
}

TEST(MarginalPrecision, SingularTheta2Throws) {
  PartitionedPrecision pp;
  pp.theta1 = Matrix::Identity(2, 2);
  pp.theta2 = Matrix::Zero(2, 2);
  pp.theta12 = Matrix::Zero(2, 2);
  EXPECT_THROW(marginal_precision(pp), LinalgError);
}

TEST(BuildGroundTruth, RejectsNonPositiveEpsilon) {
  const GraphModel g = generate_graph(GraphSpec::grid(3, 3));
  const Partition p = partition_vertices(g, 4, 0);
  EXPECT_THROW(build_ground_truth(g, 0.0, p), ParameterError);
}

// ---- properties over randomly generated graphs --------------------------

GraphSpec random_spec(Rng& rng) {
  switch (testing::uniform_int(0, 2, rng)) {
    case 0:
      return GraphSpec::binary_tree(testing::uniform_int(1, 4, rng));
    case 1:
      return GraphSpec::grid(testing::uniform_int(2, 5, rng), testing::uniform_int(2, 5, rng));
    default:
      return GraphSpec::erdos_renyi(testing::uniform_int(3, 20, rng),
                                    testing::uniform(0.0, 0.5, rng));
  }
}

TEST(GraphProperties, InvariantsHoldOnRandomGraphs) {
  Rng rng(101);
  for (int trial = 0; trial < 60; ++trial) {
    SCOPED_TRACE(trial);
    const GraphSpec spec = random_spec(rng);
    const std::uint64_t seed = rng();
    const GraphModel g = generate_graph(spec, seed);

    for (const auto& [u, v] : g.edges) {
      ASSERT_LT(u, v);
      ASSERT_LT(v, g.n);
    }
    EXPECT_EQ(g.edges, generate_graph(spec, seed).edges);
    EXPECT_LT((g.laplacian - g.laplacian.transpose()).norm(), 1e-15);
    const SymmetricEigen eig = eigen_symmetric(g.laplacian);
    EXPECT_GE(eig.values.minCoeff(), -1e-10);
    EXPECT_LE(eig.values.maxCoeff(), 2.0 + 1e-10);

    const int n1 = testing::uniform_int(1, g.n - 1, rng);
    const Partition part = partition_vertices(g, n1, rng());
    std::vector<int> all = part.v1;
    all.insert(all.end(), part.v2.begin(), part.v2.end());
    std::sort(all.begin(), all.end());
    std::vector<int> expected(g.n);
    std::iota(expected.begin(), expected.end(), 0);
    EXPECT_EQ(all, expected);

    const double eps = testing::log_uniform(1e-3, 1.0, rng);
    const PartitionedPrecision pp = build_ground_truth(g, eps, part);
    EXPECT_GE(min_eigenvalue(pp.theta), eps - 1e-12);

    // Off-diagonal support of Theta, mapped back to labels, is the edge set.
    std::set<Edge> support;
    for (int i = 0; i < g.n; ++i) {
      for (int j = i + 1; j < g.n; ++j) {
        if (std::abs(pp.theta(i, j)) > 1e-12) {
          const int a = pp.permutation[i];
          const int b = pp.permutation[j];
          support.emplace(std::min(a, b), std::max(a, b));
        }
      }
    }
    EXPECT_EQ(std::vector<Edge>(support.begin(), support.end()), g.edges);

    const Matrix sigma_v1 = pp.sigma.topLeftCorner(n1, n1);
    EXPECT_LT((pp.marginal_theta1 * sigma_v1 - Matrix::Identity(n1, n1)).cwiseAbs().maxCoeff(),
              1e-8);
  }
}

TEST(TargetEdges, RelabelsWithinV1) {
  const GraphModel g = generate_graph(GraphSpec::binary_tree(2));
  Partition p;
  p.v1 = {0, 1, 3};
  p.v2 = {2, 4, 5, 6};
  const std::vector<Edge> e = target_edges(g, p);
  const std::vector<Edge> expected = {{0, 1}, {1, 2}};
  EXPECT_EQ(e, expected);
}

}  // namespace
}  // namespace ggmlab
