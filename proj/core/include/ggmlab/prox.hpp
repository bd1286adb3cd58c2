#pragma once

#include "ggmlab/common.hpp"
#include "ggmlab/linalg.hpp"

namespace ggmlab {

/// Scratch space for the eigen-based kernels. Holds no state that carries
/// meaning between calls, except `last_values`, which exposes the eigenvalues
/// of the most recent prox_logdet / psd_eig_shrink result (callers use it to
/// get log det for free).
///
/// A workspace is single-caller; use one per thread.
class ProxWorkspace {
 public:
  ProxWorkspace() = default;
  explicit ProxWorkspace(Eigen::Index max_dim);

  Eigen::SelfAdjointEigenSolver<Matrix>& solver() { return solver_; }
  Matrix& scratch() { return scratch_; }
  Vector& last_values() { return last_values_; }
  const Vector& last_values() const { return last_values_; }

 private:
  Eigen::SelfAdjointEigenSolver<Matrix> solver_;
  Matrix scratch_;
  Vector last_values_;
};

/// Entrywise sign(z) * max(|z| - t, 0). With `skip_diagonal`, the diagonal
/// of a square input is copied through unshrunk.
Matrix soft_threshold(const Matrix& z, double t, bool skip_diagonal = false);

/// argmin_{R > 0} (1/2xi)||R - Z||_F^2 - logdet R + tr(S R).
///
/// With xi*S - Z = U diag(sigma) U^T the minimizer is U diag(gamma) U^T where
/// gamma_i = (-sigma_i + sqrt(sigma_i^2 + 4 xi)) / 2. Every gamma_i is
/// strictly positive, so the result is PD.
Matrix prox_logdet(const Matrix& z, const Matrix& s, double xi);
Matrix prox_logdet(const Matrix& z, const Matrix& s, double xi,
                   ProxWorkspace& ws);

/// Row i -> (1 - t / ||z_i||)_+ z_i. Zero rows stay zero.
Matrix group_row_shrink(const Matrix& z, double t);

/// argmin_P (1/2xi)||P - Z||^2 + (1/2xi_w)||Theta2 P - Z'||^2, evaluated in
/// the eigenbasis of Theta2 = U diag(lambda) U^T.
Matrix prox_p21_coupled(const Matrix& z, const Matrix& z2, double xi,
                        double xi_w, const SymmetricEigen& theta2);

/// Row i -> (1 - beta_xi * theta_ii / ||z_i||)_+ z_i: the prox of
/// beta * sum_i theta_ii ||P_i|| with step xi (beta_xi = beta * xi).
Matrix weighted_row_shrink(const Matrix& z, double beta_xi,
                           const Vector& diag_theta);

/// Eigenvalues lambda -> max(lambda - t, 0): projection-shrink onto the PSD
/// cone, i.e. argmin_{M >= 0} (1/2)||M - Z||^2 + t tr(M).
Matrix psd_eig_shrink(const Matrix& z, double t);
Matrix psd_eig_shrink(const Matrix& z, double t, ProxWorkspace& ws);

}  // namespace ggmlab
