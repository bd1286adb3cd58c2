#pragma once

#include <cstdint>

#include "ggmlab/common.hpp"
#include "ggmlab/graph.hpp"

namespace ggmlab {

/// n x m matrix whose columns are i.i.d. N(0, theta^{-1}). Uses Theta = R^T R
/// and solves R x = z for standard-normal z. Throws LinalgError if theta is
/// not PD.
Matrix sample_gaussian(const Matrix& theta, int m, std::uint64_t seed);

/// X X^T / m. With `center`, the row means are removed first.
Matrix sample_covariance(const Matrix& x, bool center = false);

struct SampleSet {
  Matrix x1;          // n1 x m
  int m = 0;
  Matrix sigma1_hat;  // n1 x n1
};

// Samples the full model and keeps the V1 rows.
SampleSet draw_internal_samples(const PartitionedPrecision& pp, int m,
                                std::uint64_t seed, bool center = false);

/// Noisy summary Theta2_hat = L2_hat + sigma_l^2 G, G = H H^T / n2^2.
struct ExternalSummary {
  Matrix theta2_hat;
  Matrix l2_hat;
  double sigma_l = 0.0;
  double snr = 0.0;  // ||L2_hat||_F^2 / sigma_l^2, +inf when sigma_l == 0
  std::uint64_t seed = 0;

  double snr_db() const;
};

ExternalSummary make_external_summary(const Matrix& l2_hat, double sigma_l,
                                      std::uint64_t seed);

/// The Gram noise matrix G for a given size and seed.
Matrix gram_noise(int n2, std::uint64_t seed);

// Which matrix plays the role of L2_hat.
enum class SummaryBase {
  kPrecisionBlock,     // Theta2, the V2 block of the global precision
  kMarginalPrecision,  // (Sigma2)^{-1}, the marginal precision of x2
};

Matrix summary_base(const PartitionedPrecision& pp, SummaryBase base);

// sigma_l giving the requested SNR for this base matrix.
double sigma_for_snr(const Matrix& l2_hat, double snr);

}  // namespace ggmlab
