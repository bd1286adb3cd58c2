#include <gtest/gtest.h>

#include <sstream>

#include "ggmlab/io.hpp"
#include "support/generators.hpp"

namespace ggmlab {
namespace {

TEST(EdgeListIo, RoundTripWithHeader) {
  const std::vector<Edge> edges = {{0, 1}, {1, 4}, {2, 3}};
  std::stringstream ss;
  io::write_edge_list(ss, 5, edges);
  EXPECT_EQ(ss.str(), "n=5\n0 1\n1 4\n2 3\n");
  const io::EdgeList back = io::read_edge_list(ss);
  EXPECT_EQ(back.n, 5);
  EXPECT_EQ(back.edges, edges);
}

TEST(EdgeListIo, HeaderOptionalOnRead) {
  std::istringstream in("# comment\n3 1\n0 2\n1 3\n");
  const io::EdgeList e = io::read_edge_list(in);
  EXPECT_EQ(e.n, 4);
  const std::vector<Edge> expected = {{0, 2}, {1, 3}};
  EXPECT_EQ(e.edges, expected);
}

TEST(EdgeListIo, RejectsBadLines) {
  std::istringstream self("n=3\n1 1\n");
  EXPECT_THROW(io::read_edge_list(self), IoError);
  std::istringstream range("n=3\n0 3\n");
  EXPECT_THROW(io::read_edge_list(range), IoError);
  std::istringstream junk("n=3\nfoo\n");
  EXPECT_THROW(io::read_edge_list(junk), IoError);
}

TEST(MatrixIo, CsvRoundTripIsExact) {
  Rng rng(1);
  const Matrix m = testing::gaussian(4, 3, rng);
  std::stringstream ss;
  io::write_csv(ss, m);
  EXPECT_EQ(io::read_csv(ss), m);
}

TEST(MatrixIo, MatrixMarketRoundTripIsExact) {
  Rng rng(2);
  const Matrix m = testing::gaussian(3, 5, rng);
  std::stringstream ss;
  io::write_matrix_market(ss, m);
  EXPECT_EQ(io::read_matrix_market(ss), m);
}

TEST(MatrixIo, MatrixMarketCoordinateSymmetric) {
  std::istringstream in(
      "%%MatrixMarket matrix coordinate real symmetric\n"
      "% comment\n"
      "3 3 3\n"
      "1 1 2.0\n"
      "2 1 -1.0\n"
      "3 3 4.0\n");
  Matrix expected = Matrix::Zero(3, 3);
  expected << 2, -1, 0, -1, 0, 0, 0, 0, 4;
  EXPECT_EQ(io::read_matrix_market(in), expected);
}

TEST(MatrixIo, RejectsMalformed) {
  std::istringstream bad_header("%%MatrixMarket matrix array complex general\n1 1\n1\n");
  EXPECT_THROW(io::read_matrix_market(bad_header), IoError);
  std::istringstream ragged("1,2\n3\n");
  EXPECT_THROW(io::read_csv(ragged), IoError);
  EXPECT_THROW(io::read_matrix("/nonexistent/x.mtx"), IoError);
}

}  // namespace
}  // namespace ggmlab
