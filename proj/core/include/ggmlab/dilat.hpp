#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "ggmlab/baselines.hpp"
#include "ggmlab/common.hpp"
#include "ggmlab/linalg.hpp"

namespace ggmlab {

/// One semiblind estimation instance: internal sample covariance, external
/// precision summary and the two regularization weights.
///
/// The constructor validates the inputs, factors Theta2_hat once and caches
/// T = Theta2_hat^{-1} and the eigendecomposition of Theta2_hat. Throws
/// DegenerateSummaryError ("summary not PD") when Theta2_hat is not positive
/// definite.
class DilatProblem {
 public:
  DilatProblem(Matrix sigma1_hat, Matrix theta2_hat, double alpha, double beta,
               double gamma_t = 0.0);

  const Matrix& sigma1_hat() const { return sigma1_hat_; }
  const Matrix& theta2_hat() const { return theta2_hat_; }
  double alpha() const { return alpha_; }
  double beta() const { return beta_; }
  double gamma_t() const { return gamma_t_; }
  const Matrix& t_inv() const { return t_inv_; }
  const SymmetricEigen& theta2_eigen() const { return theta2_eigen_; }
  bool theta2_is_diagonal() const { return theta2_diagonal_; }

  int n1() const { return static_cast<int>(sigma1_hat_.rows()); }
  int n2() const { return static_cast<int>(theta2_hat_.rows()); }
  int n() const { return n1() + n2(); }

 private:
  Matrix sigma1_hat_;
  Matrix theta2_hat_;
  double alpha_;
  double beta_;
  double gamma_t_;
  Matrix t_inv_;
  SymmetricEigen theta2_eigen_;
  bool theta2_diagonal_ = false;
};

/// -logdet(C - B Th2 B^T) + tr(S1 (C - B Th2 B^T)) + alpha ||C||_1
///   + beta ||Th2 B^T||_{2,1}.
/// Throws DomainError (carrying the smallest eigenvalue) when
/// C - B Th2 B^T is not PD.
double dilat_objective(const Matrix& c, const Matrix& b,
                       const DilatProblem& prob, bool penalize_diagonal = true);

// g(B) = tr(S1 B Th2 B^T), the concave part's negation.
double concave_part(const Matrix& b, const DilatProblem& prob);

struct Linearization {
  Matrix d;  // D = B_prev Th2
  Matrix s;  // [[S1, -S1 D], [-D^T S1, gamma_t I]]
};

Linearization linearize_concave(const Matrix& b_prev, const DilatProblem& prob);

/// Convex surrogate objective over the stacked variable
/// R = [[C, B], [B^T, R2]]:
/// -logdet R + tr(S R) + alpha ||R1||_1 + beta ||Th2 R21||_{2,1}.
double subproblem_objective(const Matrix& r, const Matrix& s,
                            const DilatProblem& prob,
                            bool penalize_diagonal = true);

/// Iterate state of the inner ADMM. Lambda and lambda_w are the (unscaled)
/// multipliers; mu = 1/rho and mu_w = 1/rho_w are the steps.
struct AdmmState {
  Matrix r;
  Matrix p;
  Matrix w;  // n2 x n1
  Matrix lambda;
  Matrix lambda_w;
  double mu = 1.0;
  double mu_w = 1.0;
  Matrix s;

  // R = P = [[C, B], [B^T, T]], W = Th2 B^T, zero multipliers.
  static AdmmState from_iterate(const Matrix& c, const Matrix& b,
                                const DilatProblem& prob, double mu,
                                double mu_w);
};

enum class InitMode { kGlassoWarm, kRandom, kZeroB, kLvggmWarm };

std::string to_string(InitMode mode);
InitMode init_mode_from_string(const std::string& name);

struct InitOptions {
  double delta = 1e-6;           // ridge added to S1 before the warm fits
  std::uint64_t seed = 0;        // random mode
  double random_scale = 0.1;     // initial entry scale of B0 in random mode
  int max_rescales = 60;
  double lvggm_beta = 0.0;       // <= 0: use the problem's beta
  SolverOptions solver;          // for the warm-start fits
};

struct DilatOptions {
  SolverOptions inner{.max_iter = 5000, .eps_abs = 1e-6, .eps_rel = 1e-4};
  double mu = 1.0;
  double mu_w = 1.0;
  double ccp_tol = 1e-4;
  int max_outer = 20;
  // Slack allowed on the outer descent check before a step is rejected.
  double descent_slack = 1e-8;
  bool force_general_path = false;  // use the W-splitting even for diagonal Th2
  // gamma_t used when the experiment harness builds problems.
  double gamma_t = 0.0;
  InitMode init = InitMode::kLvggmWarm;
  InitOptions init_options;

  void validate() const;
};

/// Runs the inner ADMM on the surrogate defined by `lin`, starting from
/// (and updating) `state`.
AdmmDiagnostics solve_subproblem(const DilatProblem& prob,
                                 const Linearization& lin,
                                 const DilatOptions& opts, AdmmState& state);

struct InitialPoint {
  Matrix c0;
  Matrix b0;
};

/// Feasible starting point: C0 - B0 Th2 B0^T is PD. Throws InitError
/// otherwise.
InitialPoint initialize(const DilatProblem& prob, InitMode mode,
                        const InitOptions& opts = {});

struct CcpState {
  Matrix c;
  Matrix b;
  Matrix d;
  std::vector<double> objective_trace;  // trace[0] is the initial point
  int t = 0;
  bool converged = false;
  bool inner_converged = true;  // every inner solve met its tolerance
  int inner_iterations = 0;     // summed over outer steps
  std::string stop_reason;
};

struct DilatEstimate {
  Matrix c_hat;
  Matrix b_hat;
  CcpState state;
};

/// Convex-concave procedure. Each outer step linearizes g at B_{t-1}, solves
/// the surrogate by ADMM (warm-started), and takes C_t, B_t from the V1 x V1
/// and V1 x V2 blocks of R. A step whose true objective increases by more
/// than `descent_slack` is rejected and the loop stops.
DilatEstimate dilat_fit(const DilatProblem& prob, const DilatOptions& opts,
                        const InitialPoint& init);
DilatEstimate dilat_fit(const DilatProblem& prob, const DilatOptions& opts = {});

/// mu_{2|1} = B^T x1.
Vector infer_latent_mean(const Matrix& b_hat, const Vector& x1);

}  // namespace ggmlab
