#pragma once

#include <algorithm>
#include <vector>

#include "ggmlab/dilat.hpp"
#include "support/generators.hpp"

namespace ggmlab::testing {

// One stored convex surrogate instance with its interior-point optimum.
struct SubproblemCase {
  Matrix sigma1;
  Matrix theta2;
  Matrix b_prev;
  double alpha = 0.0;
  double beta = 0.0;
  double gamma_t = 0.0;
  double objective = 0.0;
  Matrix r;
};

inline std::vector<SubproblemCase> load_subproblem_cases() {
  std::vector<SubproblemCase> out;
  const nlohmann::json doc = load_fixture("dilat_subproblem.json");
  for (const auto& c : doc.at("cases")) {
    SubproblemCase k;
    k.sigma1 = to_matrix(c.at("sigma1"));
    k.theta2 = to_matrix(c.at("theta2"));
    k.b_prev = to_matrix(c.at("b_prev"));
    k.alpha = c.at("alpha").get<double>();
    k.beta = c.at("beta").get<double>();
    k.gamma_t = c.at("gamma_t").get<double>();
    k.objective = c.at("objective").get<double>();
    k.r = to_matrix(c.at("r"));
    out.push_back(std::move(k));
  }
  return out;
}

struct SubproblemSolution {
  AdmmDiagnostics diagnostics;
  AdmmState state;
  double objective = 0.0;
  double r_minus_p = 0.0;    // ||R - P||_max
  double p2_minus_t = 0.0;   // ||P2 - Theta2^{-1}||_max
  double w_residual = 0.0;   // ||W - Theta2 P21||_max
};

inline DilatOptions tight_inner(bool general_path = false) {
  DilatOptions o;
  o.inner.max_iter = 200000;
  o.inner.eps_abs = 1e-10;
  o.inner.eps_rel = 1e-10;
  o.force_general_path = general_path;
  return o;
}

inline SubproblemSolution solve_case(const SubproblemCase& k, const DilatOptions& opts,
                                     double gamma_t) {
  const DilatProblem prob(k.sigma1, k.theta2, k.alpha, k.beta, gamma_t);
  const Linearization lin = linearize_concave(k.b_prev, prob);
  SubproblemSolution sol;
  sol.state = AdmmState::from_iterate(Matrix::Identity(prob.n1(), prob.n1()), k.b_prev,
                                      prob, opts.mu, opts.mu_w);
  sol.diagnostics = solve_subproblem(prob, lin, opts, sol.state);
  const int n1 = prob.n1();
  const int n2 = prob.n2();
  const AdmmState& st = sol.state;
  // The surrogate is scored with gamma_t = 0 so different gamma_t runs are
  // comparable: the gamma_t block only adds gamma_t tr(T) at feasibility.
  const Linearization lin0 = linearize_concave(k.b_prev, DilatProblem(k.sigma1, k.theta2, k.alpha, k.beta, 0.0));
  sol.objective = subproblem_objective(st.r, lin0.s, prob);
  sol.r_minus_p = (st.r - st.p).cwiseAbs().maxCoeff();
  sol.p2_minus_t = (st.p.bottomRightCorner(n2, n2) - prob.t_inv()).cwiseAbs().maxCoeff();
  sol.w_residual = (st.w - k.theta2 * st.p.bottomLeftCorner(n2, n1)).cwiseAbs().maxCoeff();
  return sol;
}

}  // namespace ggmlab::testing
