#pragma once

#include <cstdint>
#include <random>
#include <stdexcept>
#include <string>

#include <Eigen/Dense>

namespace ggmlab {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;
using Rng = std::mt19937_64;

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Invalid argument ranges, dimension mismatches.
class ParameterError : public Error {
 public:
  using Error::Error;
};

// Factorization or eigendecomposition failure.
class LinalgError : public Error {
 public:
  using Error::Error;
};

// Point outside the domain of an objective (e.g. C - B*Theta2*B^T not PD).
class DomainError : public Error {
 public:
  DomainError(const std::string& what, double min_eigenvalue)
      : Error(what), min_eigenvalue_(min_eigenvalue) {}
  double min_eigenvalue() const { return min_eigenvalue_; }

 private:
  double min_eigenvalue_;
};

// The external precision summary is not positive definite.
class DegenerateSummaryError : public Error {
 public:
  using Error::Error;
};

class InitError : public Error {
 public:
  using Error::Error;
};

class IoError : public Error {
 public:
  using Error::Error;
};

// Mixes a base seed with a stream index (splitmix64 finalizer). Used to give
// every run / task an independent, schedule-free RNG stream.
constexpr std::uint64_t derive_seed(std::uint64_t base, std::uint64_t stream) {
  std::uint64_t z = base + 0x9E3779B97F4A7C15ULL * (stream + 1);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

}  // namespace ggmlab
