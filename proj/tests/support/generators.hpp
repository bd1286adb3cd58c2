#pragma once

#include <cmath>
#include <filesystem>
#include <fstream>
#include <random>
#include <string>

#include <nlohmann/json.hpp>

#include "ggmlab/common.hpp"

namespace ggmlab::testing {

// Hand-rolled generators for the property tests. Each takes the RNG by
// reference so a test case is reproducible from its seed alone.

inline Matrix gaussian(int rows, int cols, Rng& rng, double scale = 1.0) {
  std::normal_distribution<double> nd(0.0, scale);
  Matrix m(rows, cols);
  for (Eigen::Index j = 0; j < m.cols(); ++j) {
    for (Eigen::Index i = 0; i < m.rows(); ++i) m(i, j) = nd(rng);
  }
  return m;
}

inline Matrix random_symmetric(int n, Rng& rng, double scale = 1.0) {
  const Matrix a = gaussian(n, n, rng, scale);
  return (a + a.transpose()) / 2.0;
}

// A A^T / n + floor * I.
inline Matrix random_pd(int n, Rng& rng, double floor = 0.5) {
  const Matrix a = gaussian(n, n, rng);
  return a * a.transpose() / n + floor * Matrix::Identity(n, n);
}

// Sample covariance of m draws from N(0, random PD covariance).
inline Matrix random_sample_cov(int n, int m, Rng& rng) {
  const Matrix cov = random_pd(n, rng);
  const Eigen::LLT<Matrix> llt(cov);
  const Matrix x = llt.matrixL() * gaussian(n, m, rng);
  return x * x.transpose() / m;
}

inline int uniform_int(int lo, int hi, Rng& rng) {
  return std::uniform_int_distribution<int>(lo, hi)(rng);
}

inline double uniform(double lo, double hi, Rng& rng) {
  return std::uniform_real_distribution<double>(lo, hi)(rng);
}

inline double log_uniform(double lo, double hi, Rng& rng) {
  return std::exp(uniform(std::log(lo), std::log(hi), rng));
}

// ---- fixtures -------------------------------------------------------------

inline std::filesystem::path fixture_path(const std::string& name) {
  return std::filesystem::path(GGMLAB_FIXTURE_DIR) / name;
}

inline nlohmann::json load_fixture(const std::string& name) {
  std::ifstream in(fixture_path(name));
  if (!in) throw IoError("missing fixture " + name);
  return nlohmann::json::parse(in);
}

inline Matrix to_matrix(const nlohmann::json& rows) {
  const auto n = static_cast<Eigen::Index>(rows.size());
  const auto m = static_cast<Eigen::Index>(rows.at(0).size());
  Matrix out(n, m);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < m; ++j) out(i, j) = rows.at(i).at(j).get<double>();
  }
  return out;
}

}  // namespace ggmlab::testing
