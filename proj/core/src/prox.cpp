#include "ggmlab/prox.hpp"

#include <cmath>

namespace ggmlab {

ProxWorkspace::ProxWorkspace(Eigen::Index max_dim)
    : solver_(max_dim), scratch_(max_dim, max_dim), last_values_(max_dim) {}

Matrix soft_threshold(const Matrix& z, double t, bool skip_diagonal) {
  if (t < 0.0) throw ParameterError("soft_threshold: t must be >= 0");
  Matrix out = z.unaryExpr([t](double v) {
    const double a = std::abs(v) - t;
    return a > 0.0 ? std::copysign(a, v) : 0.0;
  });
  if (skip_diagonal && z.rows() == z.cols()) out.diagonal() = z.diagonal();
  return out;
}

Matrix prox_logdet(const Matrix& z, const Matrix& s, double xi,
                   ProxWorkspace& ws) {
  if (!(xi > 0.0)) throw ParameterError("prox_logdet: xi must be > 0");
  if (z.rows() != z.cols() || s.rows() != z.rows() || s.cols() != z.cols()) {
    throw ParameterError("prox_logdet: dimension mismatch");
  }
  Matrix& a = ws.scratch();
  a.noalias() = xi * s - z;
  a = 0.5 * (a + a.transpose()).eval();
  auto& solver = ws.solver();
  solver.compute(a);
  if (solver.info() != Eigen::Success) {
    throw LinalgError("prox_logdet: eigendecomposition failed");
  }
  const Vector& sigma = solver.eigenvalues();
  Vector& gamma = ws.last_values();
  gamma.resize(sigma.size());
  for (Eigen::Index i = 0; i < sigma.size(); ++i) {
    const double root = std::sqrt(sigma(i) * sigma(i) + 4.0 * xi);
    // Rationalized form for sigma > 0 avoids cancellation.
    gamma(i) = sigma(i) > 0.0 ? 2.0 * xi / (sigma(i) + root)
                              : 0.5 * (root - sigma(i));
  }
  const Matrix& u = solver.eigenvectors();
  return u * gamma.asDiagonal() * u.transpose();
}

Matrix prox_logdet(const Matrix& z, const Matrix& s, double xi) {
  ProxWorkspace ws(z.rows());
  return prox_logdet(z, s, xi, ws);
}

Matrix group_row_shrink(const Matrix& z, double t) {
  if (t < 0.0) throw ParameterError("group_row_shrink: t must be >= 0");
  Matrix out = z;
  for (Eigen::Index i = 0; i < z.rows(); ++i) {
    const double norm = z.row(i).norm();
    const double factor = norm > t ? 1.0 - t / norm : 0.0;
    out.row(i) *= factor;
  }
  return out;
}

Matrix prox_p21_coupled(const Matrix& z, const Matrix& z2, double xi,
                        double xi_w, const SymmetricEigen& theta2) {
  if (!(xi > 0.0) || !(xi_w > 0.0)) {
    throw ParameterError("prox_p21_coupled: steps must be > 0");
  }
  const Matrix& u = theta2.vectors;
  if (z.rows() != u.rows() || z2.rows() != u.rows() || z.cols() != z2.cols()) {
    throw ParameterError("prox_p21_coupled: dimension mismatch");
  }
  const Vector& lambda = theta2.values;
  Vector f1(lambda.size());
  Vector f2(lambda.size());
  for (Eigen::Index i = 0; i < lambda.size(); ++i) {
    const double denom = xi_w + xi * lambda(i) * lambda(i);
    f1(i) = xi_w / denom;
    f2(i) = xi * lambda(i) / denom;
  }
  Matrix rotated = f1.asDiagonal() * (u.transpose() * z);
  rotated.noalias() += f2.asDiagonal() * (u.transpose() * z2);
  return u * rotated;
}

Matrix weighted_row_shrink(const Matrix& z, double beta_xi,
                           const Vector& diag_theta) {
  if (beta_xi < 0.0) {
    throw ParameterError("weighted_row_shrink: beta_xi must be >= 0");
  }
  if (diag_theta.size() != z.rows()) {
    throw ParameterError("weighted_row_shrink: dimension mismatch");
  }
  Matrix out = z;
  for (Eigen::Index i = 0; i < z.rows(); ++i) {
    const double t = beta_xi * diag_theta(i);
    const double norm = z.row(i).norm();
    out.row(i) *= norm > t ? 1.0 - t / norm : 0.0;
  }
  return out;
}

Matrix psd_eig_shrink(const Matrix& z, double t, ProxWorkspace& ws) {
  if (t < 0.0) throw ParameterError("psd_eig_shrink: t must be >= 0");
  if (z.rows() != z.cols()) {
    throw ParameterError("psd_eig_shrink: matrix must be square");
  }
  auto& solver = ws.solver();
  solver.compute(0.5 * (z + z.transpose()));
  if (solver.info() != Eigen::Success) {
    throw LinalgError("psd_eig_shrink: eigendecomposition failed");
  }
  Vector& shrunk = ws.last_values();
  shrunk = (solver.eigenvalues().array() - t).max(0.0).matrix();
  const Matrix& u = solver.eigenvectors();
  return u * shrunk.asDiagonal() * u.transpose();
}

Matrix psd_eig_shrink(const Matrix& z, double t) {
  ProxWorkspace ws(z.rows());
  return psd_eig_shrink(z, t, ws);
}

}  // namespace ggmlab
