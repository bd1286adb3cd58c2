#include "ggmlab/baselines.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "ggmlab/linalg.hpp"
#include "ggmlab/prox.hpp"

namespace ggmlab {

void SolverOptions::validate() const {
  if (max_iter < 1) throw ParameterError("max_iter must be >= 1");
  if (!(eps_abs > 0.0) || !(eps_rel > 0.0)) {
    throw ParameterError("ADMM tolerances must be > 0");
  }
  if (!(rho > 0.0)) throw ParameterError("ADMM penalty rho must be > 0");
}

namespace {

void check_covariance(const Matrix& s, const char* who) {
  if (s.rows() != s.cols() || s.rows() < 1) {
    throw ParameterError(std::string(who) + ": covariance must be square");
  }
}

Matrix diagonal_start(const Matrix& s, double alpha) {
  Vector d = s.diagonal().array() + alpha;
  for (Eigen::Index i = 0; i < d.size(); ++i) {
    if (!(d(i) > 1e-12)) d(i) = 1.0;
  }
  return d.cwiseInverse().asDiagonal();
}

double sum_log(const Vector& v) { return v.array().log().sum(); }

// Residual balancing. Returns the factor the scaled dual must be multiplied by.
double rebalance(double& rho, double primal, double dual) {
  if (primal > 10.0 * dual) {
    rho *= 2.0;
    return 0.5;
  }
  if (dual > 10.0 * primal) {
    rho *= 0.5;
    return 2.0;
  }
  return 1.0;
}

}  // namespace

double glasso_objective(const Matrix& theta, const Matrix& sigma_hat,
                        double alpha, bool penalize_diagonal) {
  return -logdet_pd(theta) + (sigma_hat.cwiseProduct(theta)).sum() +
         alpha * l1_norm(theta, penalize_diagonal);
}

GlassoEstimate glasso_fit(const Matrix& sigma_hat, double alpha,
                          const SolverOptions& opts) {
  check_covariance(sigma_hat, "glasso_fit");
  if (alpha < 0.0) throw ParameterError("glasso_fit: alpha must be >= 0");
  opts.validate();

  const Eigen::Index n = sigma_hat.rows();
  const Matrix s = symmetrize(sigma_hat);
  ProxWorkspace ws(n);

  double rho = opts.rho;
  Matrix z = diagonal_start(s, alpha);
  Matrix u = Matrix::Zero(n, n);  // scaled dual
  Matrix x = z;
  Matrix z_old;

  GlassoEstimate out;
  auto& diag = out.diagnostics;
  for (int it = 1; it <= opts.max_iter; ++it) {
    x = prox_logdet(z - u, s, 1.0 / rho, ws);
    const double logdet_x = sum_log(ws.last_values());
    z_old = z;
    z = soft_threshold(x + u, alpha / rho, !opts.penalize_diagonal);
    u += x - z;

    diag.iterations = it;
    diag.primal_residual = (x - z).norm();
    diag.dual_residual = rho * (z - z_old).norm();
    if (opts.record_objective) {
      diag.objective_trace.push_back(-logdet_x + s.cwiseProduct(x).sum() +
                                     alpha * l1_norm(x, opts.penalize_diagonal));
    }
    const double tol_pri =
        opts.eps_abs + opts.eps_rel * std::max(x.norm(), z.norm());
    const double tol_dual = opts.eps_abs + opts.eps_rel * rho * u.norm();
    diag.primal_tolerance = tol_pri;
    diag.dual_tolerance = tol_dual;
    if (diag.primal_residual < tol_pri && diag.dual_residual < tol_dual) {
      diag.converged = true;
      break;
    }
    if (opts.adaptive_rho) {
      u *= rebalance(rho, diag.primal_residual, diag.dual_residual);
    }
  }
  out.theta = symmetrize(x);
  out.sparse = symmetrize(z);
  diag.objective =
      glasso_objective(out.theta, s, alpha, opts.penalize_diagonal);
  return out;
}

double lvggm_objective(const Matrix& c, const Matrix& m,
                       const Matrix& sigma_hat, double alpha, double beta,
                       bool penalize_diagonal) {
  const Matrix r = c - m;
  return -logdet_pd(r) + sigma_hat.cwiseProduct(r).sum() +
         alpha * l1_norm(c, penalize_diagonal) + beta * m.trace();
}

LvggmEstimate lvggm_fit(const Matrix& sigma1_hat, double alpha, double beta,
                        const SolverOptions& opts) {
  check_covariance(sigma1_hat, "lvggm_fit");
  if (alpha < 0.0 || beta < 0.0) {
    throw ParameterError("lvggm_fit: alpha and beta must be >= 0");
  }
  opts.validate();

  const Eigen::Index n = sigma1_hat.rows();
  const Matrix s = symmetrize(sigma1_hat);
  ProxWorkspace ws(n);

  double rho = opts.rho;
  Matrix c = diagonal_start(s, alpha);
  Matrix m = Matrix::Zero(n, n);
  Matrix u = Matrix::Zero(n, n);  // scaled dual of R = C - M
  Matrix r = c;
  Matrix c_old;
  Matrix m_old;

  LvggmEstimate out;
  auto& diag = out.diagnostics;
  for (int it = 1; it <= opts.max_iter; ++it) {
    r = prox_logdet(c - m - u, s, 1.0 / rho, ws);
    const double logdet_r = sum_log(ws.last_values());
    c_old = c;
    m_old = m;
    c = soft_threshold(r + m + u, alpha / rho, !opts.penalize_diagonal);
    m = psd_eig_shrink(c - r - u, beta / rho, ws);
    u += r - c + m;

    diag.iterations = it;
    diag.primal_residual = (r - c + m).norm();
    diag.dual_residual =
        rho * std::sqrt((c - c_old).squaredNorm() + (m - m_old).squaredNorm());
    if (opts.record_objective) {
      diag.objective_trace.push_back(
          -logdet_r + s.cwiseProduct(r).sum() +
          alpha * l1_norm(c, opts.penalize_diagonal) + beta * m.trace());
    }
    const double tol_pri =
        opts.eps_abs + opts.eps_rel * std::max(r.norm(), (c - m).norm());
    const double tol_dual = opts.eps_abs + opts.eps_rel * rho * u.norm();
    diag.primal_tolerance = tol_pri;
    diag.dual_tolerance = tol_dual;
    if (diag.primal_residual < tol_pri && diag.dual_residual < tol_dual) {
      diag.converged = true;
      break;
    }
    if (opts.adaptive_rho) {
      u *= rebalance(rho, diag.primal_residual, diag.dual_residual);
    }
  }
  out.c_hat = symmetrize(c);
  out.m_hat = symmetrize(m);
  try {
    diag.objective = lvggm_objective(out.c_hat, out.m_hat, s, alpha, beta,
                                     opts.penalize_diagonal);
  } catch (const DomainError&) {
    diag.objective = std::numeric_limits<double>::infinity();
    diag.converged = false;
  }
  return out;
}

}  // namespace ggmlab
