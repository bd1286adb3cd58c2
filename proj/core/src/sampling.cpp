#include "ggmlab/sampling.hpp"

#include <cmath>
#include <limits>

#include "ggmlab/linalg.hpp"

namespace ggmlab {

namespace {

Matrix standard_normal(Eigen::Index rows, Eigen::Index cols,
                       std::uint64_t seed) {
  Rng rng(seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  Matrix z(rows, cols);
  for (Eigen::Index j = 0; j < cols; ++j) {
    for (Eigen::Index i = 0; i < rows; ++i) z(i, j) = normal(rng);
  }
  return z;
}

}  // namespace

Matrix sample_gaussian(const Matrix& theta, int m, std::uint64_t seed) {
  if (m < 1) throw ParameterError("sample_gaussian: m must be >= 1");
  if (theta.rows() != theta.cols()) {
    throw ParameterError("sample_gaussian: precision must be square");
  }
  Eigen::LLT<Matrix> llt(symmetrize(theta));
  if (llt.info() != Eigen::Success) {
    throw LinalgError("sample_gaussian: precision is not positive definite");
  }
  Matrix x = standard_normal(theta.rows(), m, seed);
  // theta = L L^T = R^T R with R = L^T.
  llt.matrixU().solveInPlace(x);
  return x;
}

Matrix sample_covariance(const Matrix& x, bool center) {
  const auto m = static_cast<double>(x.cols());
  if (x.cols() < 1) throw ParameterError("sample_covariance: m must be >= 1");
  if (center) {
    const Matrix xc = x.colwise() - x.rowwise().mean();
    return symmetrize(xc * xc.transpose() / m);
  }
  return symmetrize(x * x.transpose() / m);
}

SampleSet draw_internal_samples(const PartitionedPrecision& pp, int m,
                                std::uint64_t seed, bool center) {
  const Matrix x = sample_gaussian(pp.theta, m, seed);
  SampleSet s;
  s.x1 = x.topRows(pp.n1());
  s.m = m;
  s.sigma1_hat = sample_covariance(s.x1, center);
  return s;
}

double ExternalSummary::snr_db() const { return 10.0 * std::log10(snr); }

Matrix gram_noise(int n2, std::uint64_t seed) {
  const Matrix h = standard_normal(n2, n2, seed);
  const double scale = 1.0 / (static_cast<double>(n2) * n2);
  return symmetrize(h * h.transpose() * scale);
}

ExternalSummary make_external_summary(const Matrix& l2_hat, double sigma_l,
                                      std::uint64_t seed) {
  if (!(sigma_l >= 0.0)) {
    throw ParameterError("make_external_summary: sigma_l must be >= 0");
  }
  if (l2_hat.rows() != l2_hat.cols() || l2_hat.rows() < 1) {
    throw ParameterError("make_external_summary: base must be square");
  }
  ExternalSummary out;
  out.l2_hat = symmetrize(l2_hat);
  out.sigma_l = sigma_l;
  out.seed = seed;
  out.theta2_hat = out.l2_hat;
  if (sigma_l > 0.0) {
    out.theta2_hat +=
        sigma_l * sigma_l * gram_noise(static_cast<int>(l2_hat.rows()), seed);
    out.snr = out.l2_hat.squaredNorm() / (sigma_l * sigma_l);
  } else {
    out.snr = std::numeric_limits<double>::infinity();
  }
  if (!is_positive_definite(out.theta2_hat)) {
    throw DegenerateSummaryError("external summary is not positive definite");
  }
  return out;
}

Matrix summary_base(const PartitionedPrecision& pp, SummaryBase base) {
  switch (base) {
    case SummaryBase::kPrecisionBlock:
      return pp.theta2;
    case SummaryBase::kMarginalPrecision: {
      const int n1 = pp.n1();
      const int n2 = pp.n2();
      return inverse_pd(pp.sigma.block(n1, n1, n2, n2));
    }
  }
  return pp.theta2;
}

double sigma_for_snr(const Matrix& l2_hat, double snr) {
  if (!(snr > 0.0)) throw ParameterError("sigma_for_snr: snr must be > 0");
  if (std::isinf(snr)) return 0.0;
  return std::sqrt(l2_hat.squaredNorm() / snr);
}

}  // namespace ggmlab
