#include "ggmlab/linalg.hpp"

#include <cmath>

namespace ggmlab {

Matrix SymmetricEigen::reconstruct() const {
  return vectors * values.asDiagonal() * vectors.transpose();
}

Matrix symmetrize(const Matrix& a) { return 0.5 * (a + a.transpose()); }

SymmetricEigen eigen_symmetric(const Matrix& a) {
  if (a.rows() != a.cols()) {
    throw ParameterError("eigen_symmetric: matrix is not square");
  }
  Eigen::SelfAdjointEigenSolver<Matrix> solver(symmetrize(a));
  if (solver.info() != Eigen::Success) {
    throw LinalgError("symmetric eigendecomposition failed");
  }
  return {solver.eigenvalues(), solver.eigenvectors()};
}

double min_eigenvalue(const Matrix& a) {
  if (a.size() == 0) return 0.0;
  Eigen::SelfAdjointEigenSolver<Matrix> solver(symmetrize(a),
                                               Eigen::EigenvaluesOnly);
  if (solver.info() != Eigen::Success) {
    throw LinalgError("symmetric eigendecomposition failed");
  }
  return solver.eigenvalues()(0);
}

bool is_positive_definite(const Matrix& a) {
  Eigen::LLT<Matrix> llt(symmetrize(a));
  return llt.info() == Eigen::Success;
}

double logdet_pd(const Matrix& a) {
  Eigen::LLT<Matrix> llt(symmetrize(a));
  if (llt.info() != Eigen::Success) {
    throw DomainError("logdet of a matrix that is not positive definite",
                      min_eigenvalue(a));
  }
  const Matrix& l = llt.matrixLLT();
  double sum = 0.0;
  for (Eigen::Index i = 0; i < l.rows(); ++i) sum += std::log(l(i, i));
  return 2.0 * sum;
}

Matrix inverse_pd(const Matrix& a) {
  Eigen::LLT<Matrix> llt(symmetrize(a));
  if (llt.info() != Eigen::Success) {
    throw LinalgError("matrix is not positive definite");
  }
  return llt.solve(Matrix::Identity(a.rows(), a.cols()));
}

double l1_norm(const Matrix& a, bool include_diagonal) {
  double s = a.cwiseAbs().sum();
  if (!include_diagonal) s -= a.diagonal().cwiseAbs().sum();
  return s;
}

double l21_norm(const Matrix& a) { return a.rowwise().norm().sum(); }

}  // namespace ggmlab
