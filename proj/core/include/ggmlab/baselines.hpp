#pragma once

#include <vector>

#include "ggmlab/common.hpp"

namespace ggmlab {

// ADMM controls shared by all solvers.
struct SolverOptions {
  int max_iter = 5000;
  double eps_abs = 1e-6;
  double eps_rel = 1e-4;
  double rho = 1.0;  // penalty; the step is mu = 1 / rho
  bool penalize_diagonal = true;
  // Residual balancing (rho doubled/halved when one residual dominates the
  // other by 10x). Deterministic, but off by default.
  bool adaptive_rho = false;
  bool record_objective = true;

  void validate() const;
};

struct AdmmDiagnostics {
  int iterations = 0;
  double primal_residual = 0.0;
  double dual_residual = 0.0;
  double primal_tolerance = 0.0;  // thresholds at the last iteration
  double dual_tolerance = 0.0;
  bool converged = false;
  double objective = 0.0;
  std::vector<double> objective_trace;
};

struct GlassoEstimate {
  Matrix theta;   // PD iterate
  Matrix sparse;  // soft-thresholded iterate (exact zeros)
  AdmmDiagnostics diagnostics;
};

/// -logdet(Theta) + tr(S Theta) + alpha ||Theta||_1. Throws DomainError when
/// Theta is not PD.
double glasso_objective(const Matrix& theta, const Matrix& sigma_hat,
                        double alpha, bool penalize_diagonal = true);

/// Graphical lasso by two-block ADMM (prox_logdet + soft_threshold).
/// Non-convergence is reported in the diagnostics, never thrown.
GlassoEstimate glasso_fit(const Matrix& sigma_hat, double alpha,
                          const SolverOptions& opts = {});

struct LvggmEstimate {
  Matrix c_hat;  // sparse component
  Matrix m_hat;  // low-rank PSD component
  AdmmDiagnostics diagnostics;
};

/// -logdet(C - M) + tr(S (C - M)) + alpha ||C||_1 + beta tr(M), M PSD.
double lvggm_objective(const Matrix& c, const Matrix& m,
                       const Matrix& sigma_hat, double alpha, double beta,
                       bool penalize_diagonal = true);

/// Sparse-plus-low-rank latent-variable GGM by three-block ADMM over
/// R = C - M (prox_logdet), C (soft_threshold) and M (psd_eig_shrink).
LvggmEstimate lvggm_fit(const Matrix& sigma1_hat, double alpha, double beta,
                        const SolverOptions& opts = {});

}  // namespace ggmlab
