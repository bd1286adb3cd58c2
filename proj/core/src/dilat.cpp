#include "ggmlab/dilat.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "ggmlab/prox.hpp"

namespace ggmlab {

DilatProblem::DilatProblem(Matrix sigma1_hat, Matrix theta2_hat, double alpha,
                           double beta, double gamma_t)
    : sigma1_hat_(symmetrize(sigma1_hat)),
      theta2_hat_(symmetrize(theta2_hat)),
      alpha_(alpha),
      beta_(beta),
      gamma_t_(gamma_t) {
  if (sigma1_hat_.rows() != sigma1_hat_.cols() || sigma1_hat_.rows() < 1) {
    throw ParameterError("DilatProblem: sigma1_hat must be square");
  }
  if (theta2_hat_.rows() != theta2_hat_.cols() || theta2_hat_.rows() < 1) {
    throw ParameterError("DilatProblem: theta2_hat must be square");
  }
  if (!(alpha_ >= 0.0) || !(beta_ >= 0.0)) {
    throw ParameterError("DilatProblem: alpha and beta must be >= 0");
  }
  Eigen::LLT<Matrix> llt(theta2_hat_);
  if (llt.info() != Eigen::Success) {
    throw DegenerateSummaryError("summary not PD");
  }
  t_inv_ = symmetrize(llt.solve(Matrix::Identity(n2(), n2())));
  theta2_eigen_ = eigen_symmetric(theta2_hat_);
  if (!(theta2_eigen_.values(0) > 0.0)) {
    throw DegenerateSummaryError("summary not PD");
  }
  const Matrix off = theta2_hat_ - Matrix(theta2_hat_.diagonal().asDiagonal());
  theta2_diagonal_ = off.cwiseAbs().maxCoeff() == 0.0;
}

double dilat_objective(const Matrix& c, const Matrix& b,
                       const DilatProblem& prob, bool penalize_diagonal) {
  if (c.rows() != prob.n1() || c.cols() != prob.n1() || b.rows() != prob.n1() ||
      b.cols() != prob.n2()) {
    throw ParameterError("dilat_objective: dimension mismatch");
  }
  const Matrix& th2 = prob.theta2_hat();
  const Matrix schur = c - b * th2 * b.transpose();
  return -logdet_pd(schur) + prob.sigma1_hat().cwiseProduct(schur).sum() +
         prob.alpha() * l1_norm(c, penalize_diagonal) +
         prob.beta() * l21_norm(th2 * b.transpose());
}

double concave_part(const Matrix& b, const DilatProblem& prob) {
  return prob.sigma1_hat()
      .cwiseProduct(b * prob.theta2_hat() * b.transpose())
      .sum();
}

Linearization linearize_concave(const Matrix& b_prev,
                                const DilatProblem& prob) {
  const int n1 = prob.n1();
  const int n2 = prob.n2();
  if (b_prev.rows() != n1 || b_prev.cols() != n2) {
    throw ParameterError("linearize_concave: dimension mismatch");
  }
  Linearization lin;
  lin.d = b_prev * prob.theta2_hat();
  const Matrix sd = prob.sigma1_hat() * lin.d;
  lin.s.resize(n1 + n2, n1 + n2);
  lin.s.topLeftCorner(n1, n1) = prob.sigma1_hat();
  lin.s.topRightCorner(n1, n2) = -sd;
  lin.s.bottomLeftCorner(n2, n1) = -sd.transpose();
  lin.s.bottomRightCorner(n2, n2) =
      prob.gamma_t() * Matrix::Identity(n2, n2);
  return lin;
}

double subproblem_objective(const Matrix& r, const Matrix& s,
                            const DilatProblem& prob, bool penalize_diagonal) {
  const int n1 = prob.n1();
  const int n2 = prob.n2();
  return -logdet_pd(r) + s.cwiseProduct(r).sum() +
         prob.alpha() * l1_norm(r.topLeftCorner(n1, n1), penalize_diagonal) +
         prob.beta() * l21_norm(prob.theta2_hat() * r.bottomLeftCorner(n2, n1));
}

AdmmState AdmmState::from_iterate(const Matrix& c, const Matrix& b,
                                  const DilatProblem& prob, double mu,
                                  double mu_w) {
  const int n1 = prob.n1();
  const int n2 = prob.n2();
  AdmmState st;
  st.r.resize(n1 + n2, n1 + n2);
  st.r.topLeftCorner(n1, n1) = c;
  st.r.topRightCorner(n1, n2) = b;
  st.r.bottomLeftCorner(n2, n1) = b.transpose();
  st.r.bottomRightCorner(n2, n2) = prob.t_inv();
  st.p = st.r;
  st.w = prob.theta2_hat() * b.transpose();
  st.lambda = Matrix::Zero(n1 + n2, n1 + n2);
  st.lambda_w = Matrix::Zero(n2, n1);
  st.mu = mu;
  st.mu_w = mu_w;
  return st;
}

void DilatOptions::validate() const {
  inner.validate();
  if (!(mu > 0.0) || !(mu_w > 0.0)) {
    throw ParameterError("DiLat: mu and mu_w must be > 0");
  }
  if (!(ccp_tol > 0.0)) throw ParameterError("DiLat: ccp_tol must be > 0");
  if (max_outer < 1) throw ParameterError("DiLat: max_outer must be >= 1");
}

AdmmDiagnostics solve_subproblem(const DilatProblem& prob,
                                 const Linearization& lin,
                                 const DilatOptions& opts, AdmmState& st) {
  const int n1 = prob.n1();
  const int n2 = prob.n2();
  const int n = n1 + n2;
  if (st.r.rows() != n || st.p.rows() != n || lin.s.rows() != n) {
    throw ParameterError("solve_subproblem: state dimension mismatch");
  }
  const Matrix& th2 = prob.theta2_hat();
  const bool diagonal_path =
      prob.theta2_is_diagonal() && !opts.force_general_path;
  const Vector th2_diag = th2.diagonal();
  const bool penalize_diag = opts.inner.penalize_diagonal;
  st.s = lin.s;

  ProxWorkspace ws(n);
  Matrix p_old;
  Matrix p21 = st.p.bottomLeftCorner(n2, n1);
  Matrix p21_old;
  AdmmDiagnostics diag;

  for (int it = 1; it <= opts.inner.max_iter; ++it) {
    const double mu = st.mu;
    const double mu_w = st.mu_w;
    // P appears symmetrically, so the V2 x V1 block enters ||P - Z||^2 twice:
    // the exact P21 step is mu / 2.
    const double xi_p21 = 0.5 * mu;
    p_old = st.p;
    p21_old = p21;

    const Matrix z = st.r + mu * st.lambda;
    const Matrix p1 =
        soft_threshold(z.topLeftCorner(n1, n1), mu * prob.alpha(), !penalize_diag);
    const Matrix z21 = 0.5 * (z.bottomLeftCorner(n2, n1) +
                              z.topRightCorner(n1, n2).transpose());
    if (diagonal_path) {
      p21 = weighted_row_shrink(z21, prob.beta() * xi_p21, th2_diag);
    } else {
      st.w = group_row_shrink(th2 * p21_old - mu_w * st.lambda_w,
                              mu_w * prob.beta());
      p21 = prox_p21_coupled(z21, st.w + mu_w * st.lambda_w, xi_p21, mu_w,
                             prob.theta2_eigen());
      st.lambda_w += (st.w - th2 * p21) / mu_w;
    }
    st.p.topLeftCorner(n1, n1) = symmetrize(p1);
    st.p.bottomLeftCorner(n2, n1) = p21;
    st.p.topRightCorner(n1, n2) = p21.transpose();
    st.p.bottomRightCorner(n2, n2) = prob.t_inv();

    st.r = prox_logdet(st.p - mu * st.lambda, st.s, mu, ws);
    st.lambda += (st.r - st.p) / mu;

    double primal_sq = (st.r - st.p).squaredNorm();
    double dual_sq = (st.p - p_old).squaredNorm() / (mu * mu);
    if (!diagonal_path) {
      primal_sq += (st.w - th2 * p21).squaredNorm();
      dual_sq += (th2 * (p21 - p21_old)).squaredNorm() / (mu_w * mu_w);
    }
    diag.iterations = it;
    diag.primal_residual = std::sqrt(primal_sq);
    diag.dual_residual = std::sqrt(dual_sq);

    const double tol_pri =
        opts.inner.eps_abs + opts.inner.eps_rel * std::max(st.r.norm(), st.p.norm());
    const double tol_dual =
        opts.inner.eps_abs +
        opts.inner.eps_rel * std::sqrt(st.lambda.squaredNorm() +
                                       st.lambda_w.squaredNorm());
    diag.primal_tolerance = tol_pri;
    diag.dual_tolerance = tol_dual;
    if (diag.primal_residual < tol_pri && diag.dual_residual < tol_dual) {
      diag.converged = true;
      break;
    }
    // Lambda is unscaled, so mu can change without rescaling the multiplier.
    if (opts.inner.adaptive_rho) {
      if (diag.primal_residual > 10.0 * diag.dual_residual) {
        st.mu *= 0.5;
      } else if (diag.dual_residual > 10.0 * diag.primal_residual) {
        st.mu *= 2.0;
      }
    }
  }
  if (diagonal_path) st.w = th2 * p21;
  try {
    diag.objective = subproblem_objective(st.r, st.s, prob, penalize_diag);
  } catch (const DomainError&) {
    diag.objective = std::numeric_limits<double>::infinity();
  }
  return diag;
}

std::string to_string(InitMode mode) {
  switch (mode) {
    case InitMode::kGlassoWarm:
      return "glasso_warm";
    case InitMode::kRandom:
      return "random";
    case InitMode::kZeroB:
      return "zero_b";
    case InitMode::kLvggmWarm:
      return "lvggm_warm";
  }
  return "unknown";
}

InitMode init_mode_from_string(const std::string& name) {
  if (name == "glasso_warm") return InitMode::kGlassoWarm;
  if (name == "random") return InitMode::kRandom;
  if (name == "zero_b") return InitMode::kZeroB;
  if (name == "lvggm_warm") return InitMode::kLvggmWarm;
  throw ParameterError("unknown init mode '" + name + "'");
}

namespace {

bool feasible(const Matrix& c, const Matrix& b, const DilatProblem& prob) {
  return is_positive_definite(c - b * prob.theta2_hat() * b.transpose());
}

Matrix diagonal_precision(const DilatProblem& prob, double delta) {
  const Vector d = prob.sigma1_hat().diagonal().array() + delta;
  if (!(d.minCoeff() > 0.0)) {
    throw InitError("initialize: diag(sigma1_hat) + delta must be positive");
  }
  return d.cwiseInverse().asDiagonal();
}

// Shrinks B until C - B Th2 B^T is PD.
void rescale_until_feasible(const Matrix& c, Matrix& b,
                            const DilatProblem& prob, int max_rescales,
                            double factor) {
  for (int k = 0; k <= max_rescales; ++k) {
    if (feasible(c, b, prob)) return;
    b *= factor;
  }
  throw InitError("initialize: no feasible B0 after rescaling");
}

// B with B Th2 B^T equal to the rank <= n2 part of `m`: B = U L^{1/2} Th2^{-1/2}
// restricted to the leading eigen-directions of Th2.
Matrix factor_low_rank(const Matrix& m, const DilatProblem& prob) {
  const int n1 = prob.n1();
  const int n2 = prob.n2();
  const SymmetricEigen em = eigen_symmetric(m);
  const SymmetricEigen& et = prob.theta2_eigen();
  const int rank = std::min(n1, n2);
  Matrix b = Matrix::Zero(n1, n2);
  for (int k = 0; k < rank; ++k) {
    const double lm = em.values(n1 - 1 - k);
    if (!(lm > 1e-12)) break;
    const double lt = et.values(n2 - 1 - k);
    b += std::sqrt(lm / lt) * em.vectors.col(n1 - 1 - k) *
         et.vectors.col(n2 - 1 - k).transpose();
  }
  return b;
}

}  // namespace

InitialPoint initialize(const DilatProblem& prob, InitMode mode,
                        const InitOptions& opts) {
  const int n1 = prob.n1();
  const int n2 = prob.n2();
  InitialPoint init;
  switch (mode) {
    case InitMode::kZeroB:
      init.c0 = diagonal_precision(prob, opts.delta);
      init.b0 = Matrix::Zero(n1, n2);
      break;
    case InitMode::kGlassoWarm: {
      const Matrix ridge =
          prob.sigma1_hat() + opts.delta * Matrix::Identity(n1, n1);
      init.c0 = glasso_fit(ridge, prob.alpha(), opts.solver).theta;
      init.b0 = Matrix::Zero(n1, n2);
      break;
    }
    case InitMode::kRandom: {
      init.c0 = diagonal_precision(prob, opts.delta);
      Rng rng(opts.seed);
      std::normal_distribution<double> normal(0.0, opts.random_scale);
      init.b0.resize(n1, n2);
      for (Eigen::Index j = 0; j < n2; ++j) {
        for (Eigen::Index i = 0; i < n1; ++i) init.b0(i, j) = normal(rng);
      }
      rescale_until_feasible(init.c0, init.b0, prob, opts.max_rescales, 0.5);
      break;
    }
    case InitMode::kLvggmWarm: {
      const Matrix ridge =
          prob.sigma1_hat() + opts.delta * Matrix::Identity(n1, n1);
      const double beta_lv = opts.lvggm_beta > 0.0 ? opts.lvggm_beta : prob.beta();
      const LvggmEstimate lv =
          lvggm_fit(ridge, prob.alpha(), beta_lv, opts.solver);
      init.c0 = lv.c_hat;
      init.b0 = factor_low_rank(lv.m_hat, prob);
      if (!is_positive_definite(init.c0)) {
        init.c0 = glasso_fit(ridge, prob.alpha(), opts.solver).theta;
      }
      rescale_until_feasible(init.c0, init.b0, prob, opts.max_rescales, 0.9);
      break;
    }
  }
  if (!feasible(init.c0, init.b0, prob)) {
    throw InitError("initialize: C0 - B0 Th2 B0^T is not PD");
  }
  return init;
}

namespace {

double try_objective(const Matrix& c, const Matrix& b, const DilatProblem& prob,
                     bool penalize_diag) {
  try {
    return dilat_objective(c, b, prob, penalize_diag);
  } catch (const DomainError&) {
    return std::numeric_limits<double>::infinity();
  }
}

}  // namespace

DilatEstimate dilat_fit(const DilatProblem& prob, const DilatOptions& opts,
                        const InitialPoint& init) {
  opts.validate();
  if (init.c0.rows() != prob.n1() || init.b0.rows() != prob.n1() ||
      init.b0.cols() != prob.n2()) {
    throw InitError("dilat_fit: initial point has wrong dimensions");
  }
  const bool penalize_diag = opts.inner.penalize_diagonal;
  DilatEstimate out;
  CcpState& state = out.state;
  state.c = init.c0;
  state.b = init.b0;
  double objective = 0.0;
  try {
    objective = dilat_objective(state.c, state.b, prob, penalize_diag);
  } catch (const DomainError& e) {
    throw InitError(std::string("dilat_fit: infeasible initialization (") +
                    e.what() + ")");
  }
  state.objective_trace.push_back(objective);
  state.stop_reason = "max_outer";

  AdmmState admm =
      AdmmState::from_iterate(state.c, state.b, prob, opts.mu, opts.mu_w);
  const int n1 = prob.n1();
  const int n2 = prob.n2();
  for (int t = 1; t <= opts.max_outer; ++t) {
    const Linearization lin = linearize_concave(state.b, prob);
    const AdmmDiagnostics inner = solve_subproblem(prob, lin, opts, admm);
    state.inner_iterations += inner.iterations;
    state.inner_converged = state.inner_converged && inner.converged;

    // The split iterate P carries the exact zeros of C and the zero rows of
    // Th2 B^T; R is the fallback when P is not yet feasible.
    Matrix c_next = symmetrize(admm.p.topLeftCorner(n1, n1));
    Matrix b_next = admm.p.topRightCorner(n1, n2);
    double next = try_objective(c_next, b_next, prob, penalize_diag);
    if (!(next <= objective + opts.descent_slack)) {
      const Matrix c_r = symmetrize(admm.r.topLeftCorner(n1, n1));
      const Matrix b_r = 0.5 * (admm.r.topRightCorner(n1, n2) +
                                admm.r.bottomLeftCorner(n2, n1).transpose());
      const double next_r = try_objective(c_r, b_r, prob, penalize_diag);
      if (next_r < next) {
        c_next = c_r;
        b_next = b_r;
        next = next_r;
      }
    }
    if (std::isinf(next)) {
      state.stop_reason = "infeasible_step";
      state.converged = inner.converged;
      break;
    }
    if (next > objective + opts.descent_slack) {
      state.stop_reason = "ascent_rejected";
      state.converged = inner.converged;
      break;
    }
    state.t = t;
    state.d = lin.d;
    state.c = c_next;
    state.b = b_next;
    state.objective_trace.push_back(next);
    const double change = std::abs(next - objective) / std::max(1.0, std::abs(objective));
    objective = next;
    if (change < opts.ccp_tol) {
      state.converged = true;
      state.stop_reason = "ccp_tol";
      break;
    }
  }
  out.c_hat = state.c;
  out.b_hat = state.b;
  return out;
}

DilatEstimate dilat_fit(const DilatProblem& prob, const DilatOptions& opts) {
  InitOptions init_opts = opts.init_options;
  return dilat_fit(prob, opts, initialize(prob, opts.init, init_opts));
}

Vector infer_latent_mean(const Matrix& b_hat, const Vector& x1) {
  if (b_hat.rows() != x1.size()) {
    throw ParameterError("infer_latent_mean: dimension mismatch");
  }
  return b_hat.transpose() * x1;
}

}  // namespace ggmlab
