#pragma once

#include "ggmlab/common.hpp"

namespace ggmlab {

// Eigenpairs of a symmetric matrix, eigenvalues ascending.
struct SymmetricEigen {
  Vector values;
  Matrix vectors;

  Matrix reconstruct() const;
};

Matrix symmetrize(const Matrix& a);

// Symmetrizes before decomposing. Throws LinalgError on failure.
SymmetricEigen eigen_symmetric(const Matrix& a);

double min_eigenvalue(const Matrix& a);

bool is_positive_definite(const Matrix& a);

// log det of a symmetric positive-definite matrix via Cholesky.
// Throws DomainError (with the smallest eigenvalue) when not PD.
double logdet_pd(const Matrix& a);

// Inverse of a symmetric positive-definite matrix via Cholesky.
// Throws LinalgError when not PD.
Matrix inverse_pd(const Matrix& a);

// Entrywise l1 norm; optionally skipping the diagonal.
double l1_norm(const Matrix& a, bool include_diagonal = true);

// Sum of row-wise Euclidean norms.
double l21_norm(const Matrix& a);

}  // namespace ggmlab
