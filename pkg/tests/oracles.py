"""Independent brute-force references for the test suite.

Nothing here calls the implementation it is used to check: the routines
work from numpy primitives only, so agreement between an oracle and the
library is evidence rather than tautology.  These are deliberately slow
and meant for instances with n, p up to a few tens.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass

import numpy as np

INV_GOLDEN = (np.sqrt(5.0) - 1.0) / 2.0  # 1/phi


@dataclass(frozen=True)
class OracleReport:
    """Side-by-side record of an oracle value and an implementation value."""

    quantity: str
    oracle_value: float
    impl_value: float

    @property
    def abs_gap(self) -> float:
        return abs(self.oracle_value - self.impl_value)

    @property
    def rel_gap(self) -> float:
        scale = max(abs(self.oracle_value), abs(self.impl_value), 1e-300)
        return self.abs_gap / scale


def grid_argmax_1d(f, lo: float, hi: float, n_grid: int = 2001, refine_iters: int = 80):
    """Argmax of a concave scalar function: grid scan + golden-section refinement."""
    if not lo < hi:
        raise ValueError("need lo < hi")
    xs = np.linspace(lo, hi, n_grid)
    vals = np.array([f(x) for x in xs])
    k = int(np.argmax(vals))
    a = xs[max(k - 1, 0)]
    b = xs[min(k + 1, n_grid - 1)]

    x1 = b - INV_GOLDEN * (b - a)
    x2 = a + INV_GOLDEN * (b - a)
    f1, f2 = f(x1), f(x2)
    for _ in range(refine_iters):
        if f1 >= f2:
            b, x2, f2 = x2, x1, f1
            x1 = b - INV_GOLDEN * (b - a)
            f1 = f(x1)
        else:
            a, x1, f1 = x1, x2, f2
            x2 = a + INV_GOLDEN * (b - a)
            f2 = f(x2)
    return (a + b) / 2.0


def finite_diff_gradient(F, beta, step: float = 1e-6) -> np.ndarray:
    """Central-difference gradient of a scalar function of a vector."""
    if not step > 0.0:
        raise ValueError("step must be positive")
    beta = np.asarray(beta, dtype=float)
    grad = np.zeros_like(beta)
    for j in range(beta.size):
        up = beta.copy()
        dn = beta.copy()
        up[j] += step
        dn[j] -= step
        grad[j] = (F(up) - F(dn)) / (2.0 * step)
    return grad


def _sigmoid(eta):
    out = np.empty_like(eta)
    pos = eta >= 0
    out[pos] = 1.0 / (1.0 + np.exp(-eta[pos]))
    e = np.exp(eta[~pos])
    out[~pos] = e / (1.0 + e)
    return out


def _ridge_objective(X, y, lam, beta, first_penalized):
    eta = X @ beta
    ll = float(y @ eta - np.sum(np.logaddexp(0.0, eta)))
    start = 0 if first_penalized else 1
    return ll - 0.5 * lam * float(beta[start:] @ beta[start:])


def reference_newton_ridge(
    X,
    y,
    lam,
    tol: float = 1e-10,
    max_iter: int = 200,
    beta0=None,
    penalize_intercept: bool = False,
):
    """Damped Newton maximizer of the ridge-penalized logistic log-likelihood.

    By default the intercept (column 0) is unpenalized, matching the
    library objective; ``penalize_intercept=True`` ridges every
    coefficient, which is required for a finite optimum in degenerate
    cases such as all-ones responses on an intercept-only design.  Stops
    when the sup-norm of the gradient reaches ``tol``; raises if step
    halving cannot make progress.  Starting at an optimum returns it
    unchanged.
    """
    X = np.asarray(X, dtype=float)
    y = np.asarray(y, dtype=float)
    n, p = X.shape
    start = 0 if penalize_intercept else 1
    beta = np.zeros(p) if beta0 is None else np.asarray(beta0, dtype=float).copy()
    f_cur = _ridge_objective(X, y, lam, beta, penalize_intercept)

    def grad(b):
        g = X.T @ (y - _sigmoid(X @ b))
        g[start:] -= lam * b[start:]
        return g

    for _ in range(max_iter):
        g = grad(beta)
        if np.max(np.abs(g)) <= tol:
            return beta
        pi = _sigmoid(X @ beta)
        s = pi * (1.0 - pi)
        H = X.T @ (s[:, None] * X)
        H[start:, start:] += lam * np.eye(p - start)
        direction = np.linalg.solve(H, g)
        step = 1.0
        for _ in range(60):
            candidate = beta + step * direction
            f_new = _ridge_objective(X, y, lam, candidate, penalize_intercept)
            if f_new >= f_cur - 1e-14 * (1.0 + abs(f_cur)):
                beta, f_cur = candidate, f_new
                break
            step /= 2.0
        else:
            raise RuntimeError("reference Newton diverged: step halving exhausted")
    if np.max(np.abs(grad(beta))) <= tol:
        return beta
    raise RuntimeError("reference Newton did not reach tolerance")


def active_set_box_qp(M, q, bound: float = 1.0) -> np.ndarray:
    """Exhaustive minimizer of ``0.5 u'Mu - q'u`` over ``|u_i| <= bound``.

    Enumerates all 3^n lower/free/upper patterns, solves every
    equality-constrained subproblem, and returns the feasible candidate
    with the smallest objective.  Limited to n <= 8.
    """
    M = np.asarray(M, dtype=float)
    q = np.asarray(q, dtype=float)
    n = q.shape[0]
    if n > 8:
        raise ValueError("active-set enumeration is limited to n <= 8")

    best_u = None
    best_val = np.inf
    for pattern in itertools.product((-1, 0, 1), repeat=n):
        pattern = np.array(pattern)
        u = bound * pattern.astype(float)
        free = np.nonzero(pattern == 0)[0]
        if free.size:
            fixed = np.nonzero(pattern != 0)[0]
            rhs = q[free] - M[np.ix_(free, fixed)] @ u[fixed]
            Mff = M[np.ix_(free, free)]
            try:
                u_free = np.linalg.solve(Mff, rhs)
            except np.linalg.LinAlgError:
                u_free, *_ = np.linalg.lstsq(Mff, rhs, rcond=None)
                if not np.allclose(Mff @ u_free, rhs, atol=1e-9):
                    continue
            if np.any(np.abs(u_free) > bound + 1e-12):
                continue
            u[free] = np.clip(u_free, -bound, bound)
        val = 0.5 * u @ M @ u - q @ u
        if val < best_val - 0.0:
            best_val = val
            best_u = u
    return best_u
