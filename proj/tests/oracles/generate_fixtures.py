#!/usr/bin/env python3
"""Interior-point reference solutions for the solver tests.

Run once; the JSON written to tests/fixtures/ is committed and read by the
C++ tests. Requires numpy and cvxpy (Clarabel backend).

    python3 tests/oracles/generate_fixtures.py
"""
import json
import pathlib

import cvxpy as cp
import numpy as np

OUT = pathlib.Path(__file__).resolve().parent.parent / "fixtures"
SOLVER_OPTS = dict(
    solver=cp.CLARABEL,
    tol_gap_abs=1e-11,
    tol_gap_rel=1e-11,
    tol_feas=1e-11,
    max_iter=500,
)


def sample_cov(rng, n, m):
    a = rng.standard_normal((n, n))
    theta = a @ a.T / n + 0.5 * np.eye(n)
    x = np.linalg.cholesky(np.linalg.inv(theta)) @ rng.standard_normal((n, m))
    return x @ x.T / m


def l1(x):
    return cp.sum(cp.abs(x))


def solve(problem):
    problem.solve(**SOLVER_OPTS)
    if problem.status != cp.OPTIMAL:
        raise RuntimeError(f"oracle status {problem.status}")
    return problem.value


def glasso_cases(rng, count=5, n=5, alpha=0.3):
    cases = []
    for _ in range(count):
        s = sample_cov(rng, n, 3 * n)
        th = cp.Variable((n, n), symmetric=True)
        obj = -cp.log_det(th) + cp.trace(s @ th) + alpha * l1(th)
        value = solve(cp.Problem(cp.Minimize(obj)))
        cases.append(
            dict(sigma=s.tolist(), alpha=alpha, objective=value,
                 theta=th.value.tolist()))
    return cases


def lvggm_cases(rng, count=5, n=4):
    cases = []
    for k in range(count):
        s = sample_cov(rng, n, 4 * n)
        alpha = [0.05, 0.1, 0.2][k % 3]
        beta = [0.1, 0.3, 1.0][k % 3]
        c = cp.Variable((n, n), symmetric=True)
        m = cp.Variable((n, n), PSD=True)
        obj = (-cp.log_det(c - m) + cp.trace(s @ (c - m)) + alpha * l1(c) +
               beta * cp.trace(m))
        value = solve(cp.Problem(cp.Minimize(obj)))
        cases.append(
            dict(sigma=s.tolist(), alpha=alpha, beta=beta, objective=value,
                 c=c.value.tolist(), m=m.value.tolist()))
    return cases


def dilat_subproblem_cases(rng, count=20):
    """Convex surrogate over R = [[C, B], [B^T, R2]] with R2 pinned to
    inv(theta2):  -logdet R + tr(S R) + alpha ||R1||_1 + beta ||theta2 R21||_{2,1},
    S = [[S1, -S1 D], [-D^T S1, gamma I]], D = B_prev theta2."""
    cases = []
    for k in range(count):
        n1 = n2 = 2 if k < count // 2 else 3
        n = n1 + n2
        s1 = sample_cov(rng, n1, 10 * n1)
        a = rng.standard_normal((n2, n2))
        theta2 = a @ a.T / n2 + 0.5 * np.eye(n2)
        if k % 4 == 3:
            theta2 = np.diag(np.diag(theta2))
        t_inv = np.linalg.inv(theta2)
        b_prev = 0.1 * rng.standard_normal((n1, n2))
        alpha = float(rng.choice([0.05, 0.1, 0.3]))
        beta = float(rng.choice([0.05, 0.2, 1.0]))
        gamma_t = 0.0
        d = b_prev @ theta2
        s = np.block([[s1, -s1 @ d], [-d.T @ s1, gamma_t * np.eye(n2)]])

        r = cp.Variable((n, n), symmetric=True)
        obj = (-cp.log_det(r) + cp.trace(s @ r) + alpha * l1(r[:n1, :n1]) +
               beta * cp.sum(cp.norm(theta2 @ r[n1:, :n1], 2, axis=1)))
        value = solve(cp.Problem(cp.Minimize(obj), [r[n1:, n1:] == t_inv]))
        cases.append(
            dict(n1=n1, n2=n2, sigma1=s1.tolist(), theta2=theta2.tolist(),
                 b_prev=b_prev.tolist(), alpha=alpha, beta=beta,
                 gamma_t=gamma_t, objective=value, r=r.value.tolist()))
    return cases


def main():
    OUT.mkdir(parents=True, exist_ok=True)
    rng = np.random.default_rng(20240611)
    fixtures = {
        "glasso_5x5.json": glasso_cases(rng),
        "lvggm_4x4.json": lvggm_cases(rng),
        "dilat_subproblem.json": dilat_subproblem_cases(rng),
    }
    for name, cases in fixtures.items():
        (OUT / name).write_text(json.dumps({"cases": cases}, indent=1) + "\n")
        print(f"wrote {len(cases)} cases to {OUT / name}")


if __name__ == "__main__":
    main()
