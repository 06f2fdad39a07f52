"""Box-constrained convex quadratic programming by cyclic coordinate descent.

Solves ``min_u 0.5 u'Mu - q'u`` subject to ``|u_i| <= bound`` for symmetric
positive semi-definite ``M``.  This is the dual problem of each piece-wise
quadratic ridge update, where warm starts across outer iterations make
coordinate descent particularly effective.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

__all__ = ["BoxQpProblem", "BoxQpDiagnostics", "BoxQpError", "solve_box_qp"]


class BoxQpError(RuntimeError):
    """Raised when the sweep budget is exhausted before reaching tolerance."""

    def __init__(self, message: str, dual_residual: float):
        super().__init__(message)
        self.dual_residual = dual_residual


@dataclass(frozen=True)
class BoxQpProblem:
    """Quadratic ``0.5 u'Mu - q'u`` over the box ``|u_i| <= bound``."""

    M: np.ndarray
    q: np.ndarray
    bound: float = 1.0

    def __post_init__(self):
        M = np.asarray(self.M, dtype=float)
        q = np.asarray(self.q, dtype=float)
        if M.ndim != 2 or M.shape[0] != M.shape[1]:
            raise ValueError("M must be a square matrix")
        if q.shape != (M.shape[0],):
            raise ValueError("q must match the dimension of M")
        scale = max(1.0, float(np.max(np.abs(M))) if M.size else 1.0)
        if M.size and float(np.max(np.abs(M - M.T))) > 1e-12 * scale:
            raise ValueError("M must be symmetric (within 1e-12)")
        if np.any(np.diag(M) < -1e-12 * scale):
            raise ValueError("M must have a non-negative diagonal")
        if not (np.isfinite(self.bound) and self.bound > 0.0):
            raise ValueError("bound must be positive")
        object.__setattr__(self, "M", (M + M.T) / 2.0)
        object.__setattr__(self, "q", q)


@dataclass
class BoxQpDiagnostics:
    n_sweeps: int
    max_violation: float
    converged: bool
    objective_trace: list = field(default_factory=list)


def _projected_gradient_violation(g: np.ndarray, u: np.ndarray, bound: float) -> float:
    """Largest first-order optimality violation over the box."""
    at_lo = u <= -bound
    at_hi = u >= bound
    viol = np.abs(g)
    viol = np.where(at_lo, np.maximum(0.0, -g), viol)
    viol = np.where(at_hi, np.maximum(0.0, g), viol)
    return float(np.max(viol)) if viol.size else 0.0


def solve_box_qp(
    problem: BoxQpProblem,
    tol: float = 1e-10,
    max_sweeps: int = 10_000,
    u0: np.ndarray | None = None,
):
    """Minimize the boxed quadratic; returns ``(u, diagnostics)``.

    Each coordinate is minimized exactly, ``u_i <- clip((q_i - sum_{j!=i}
    M_ij u_j) / M_ii, -bound, bound)``; a coordinate with ``M_ii = 0``
    (necessarily a zero row for PSD ``M``) is set to ``bound * sign(q_i)``,
    the limit of the clipped update.  Convergence is declared when the
    projected-gradient violation drops to ``tol``.
    """
    M, q, bound = problem.M, problem.q, problem.bound
    n = q.shape[0]
    if n == 0:
        return np.zeros(0), BoxQpDiagnostics(0, 0.0, True)

    if u0 is None:
        u = np.zeros(n)
    else:
        u = np.clip(np.asarray(u0, dtype=float).copy(), -bound, bound)
        if u.shape != (n,):
            raise ValueError("u0 must match the dimension of q")

    diag = np.diag(M).copy()
    positive = diag > 0.0
    diagnostics = BoxQpDiagnostics(0, np.inf, False)

    for sweep in range(1, max_sweeps + 1):
        for i in range(n):
            c = q[i] - (M[i] @ u - diag[i] * u[i])
            if positive[i]:
                u[i] = min(bound, max(-bound, c / diag[i]))
            else:
                u[i] = bound * np.sign(c)
        g = M @ u - q
        diagnostics.n_sweeps = sweep
        diagnostics.max_violation = _projected_gradient_violation(g, u, bound)
        diagnostics.objective_trace.append(float(0.5 * u @ M @ u - q @ u))
        if diagnostics.max_violation <= tol:
            diagnostics.converged = True
            return u, diagnostics

    raise BoxQpError(
        f"box QP did not reach tolerance {tol} in {max_sweeps} sweeps "
        f"(projected-gradient violation {diagnostics.max_violation:.3e})",
        dual_residual=diagnostics.max_violation,
    )
