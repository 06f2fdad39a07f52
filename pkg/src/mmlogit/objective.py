"""Logistic log-likelihood, penalized objective, and tangent surrogates.

The full-data objective is ``F(beta) = loglik(beta) - penalty(beta[1:])``
where the intercept (column 0 of the design) is never penalized.  A
:class:`TangentState` freezes the per-observation minorizer coefficients at
an expansion point ``beta_tilde`` so that the surrogate can be evaluated
and maximized by the solvers.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
from scipy.special import expit

from .bounds import BoundKind, eval_bound, pg_weight, pq_coeffs

__all__ = [
    "Dataset",
    "PenaltyConfig",
    "TangentState",
    "sigmoid",
    "log_likelihood",
    "penalized_objective",
    "make_tangent_state",
    "surrogate_value",
    "gradient",
]


def sigmoid(eta):
    """Overflow-free logistic function ``1 / (1 + exp(-eta))``."""
    return expit(eta)


@dataclass(frozen=True)
class Dataset:
    """Binary responses ``y`` and design matrix ``X`` with intercept column.

    ``X`` is ``n x p`` with ``X[:, 0] == 1`` (the intercept); ``y`` holds
    0/1 values.  All entries must be finite.
    """

    y: np.ndarray
    X: np.ndarray
    meta: dict = field(default_factory=dict, compare=False)

    def __post_init__(self):
        y = np.asarray(self.y, dtype=float)
        X = np.asarray(self.X, dtype=float)
        if X.ndim != 2:
            raise ValueError("X must be a 2-d array")
        if y.shape != (X.shape[0],):
            raise ValueError(
                f"y has shape {y.shape}, expected ({X.shape[0]},) to match X"
            )
        if X.shape[0] < 1 or X.shape[1] < 1:
            raise ValueError("need at least one observation and one column")
        if not np.all(np.isfinite(X)):
            raise ValueError("X contains non-finite entries")
        if not np.all((y == 0.0) | (y == 1.0)):
            raise ValueError("y must contain only 0/1 values")
        if not np.all(X[:, 0] == 1.0):
            raise ValueError("X[:, 0] must be an all-ones intercept column")
        object.__setattr__(self, "y", y)
        object.__setattr__(self, "X", X)

    @property
    def n(self) -> int:
        return self.X.shape[0]

    @property
    def p(self) -> int:
        return self.X.shape[1]


@dataclass(frozen=True)
class PenaltyConfig:
    """Elastic-net penalty ``lam * ((1-alpha)/2 ||b||_2^2 + alpha ||b||_1)``.

    ``alpha = 0`` is ridge, ``alpha = 1`` lasso.  The intercept coefficient
    is excluded from the penalty.
    """

    lam: float
    alpha: float = 0.0

    def __post_init__(self):
        if not (np.isfinite(self.lam) and self.lam >= 0.0):
            raise ValueError(f"lam must be finite and >= 0, got {self.lam}")
        if not (0.0 <= self.alpha <= 1.0):
            raise ValueError(f"alpha must lie in [0, 1], got {self.alpha}")


@dataclass(frozen=True)
class TangentState:
    """Surrogate coefficients frozen at an expansion point.

    ``zeta`` are the linear predictors at the expansion point, ``w`` the
    per-observation curvatures, ``nu`` the absolute-value coefficients
    (zero except for PQ), and ``y_eff`` the effective responses such that
    the surrogate's linear term is ``sum_i w_i y_eff_i x_i' beta`` for all
    three bound kinds.  ``offset`` calibrates the surrogate so that its
    value at the expansion point equals the log-likelihood there.
    """

    kind: BoundKind
    zeta: np.ndarray
    w: np.ndarray
    nu: np.ndarray
    y_eff: np.ndarray
    offset: float


def _check_beta(beta, data: Dataset) -> np.ndarray:
    beta = np.asarray(beta, dtype=float)
    if beta.shape != (data.p,):
        raise ValueError(f"beta has shape {beta.shape}, expected ({data.p},)")
    return beta


def log_likelihood(beta, data: Dataset) -> float:
    """``sum_i [y_i x_i'beta - log(1 + exp(x_i'beta))]``, overflow-safe."""
    beta = _check_beta(beta, data)
    eta = data.X @ beta
    return float(data.y @ eta - np.sum(np.logaddexp(0.0, eta)))


def penalized_objective(beta, data: Dataset, penalty: PenaltyConfig) -> float:
    """Log-likelihood minus the elastic-net penalty on the non-intercept part."""
    beta = _check_beta(beta, data)
    tail = beta[1:]
    pen = penalty.lam * (
        (1.0 - penalty.alpha) * 0.5 * float(tail @ tail)
        + penalty.alpha * float(np.sum(np.abs(tail)))
    )
    return log_likelihood(beta, data) - pen


def _surrogate_nonconstant(state: TangentState, eta: np.ndarray) -> float:
    # Shared by construction (calibration) and evaluation so that the
    # value at the expansion point reproduces the log-likelihood bitwise.
    val = state.w @ (state.y_eff * eta - 0.5 * eta * eta)
    if state.kind is BoundKind.PQ:
        val -= state.nu @ np.abs(eta)
    return float(val)


def make_tangent_state(kind, beta_tilde, data: Dataset) -> TangentState:
    """Build the tangent surrogate of the log-likelihood at ``beta_tilde``.

    Weights are 0.25 for BL, ``pg_weight(zeta_i)`` for PG, and the
    piece-wise quadratic coefficients for PQ.  Effective responses are
    ``(y_i - 1/2)/w_i`` for PG/PQ and ``4 (y_i - pi_i) + zeta_i`` for BL.
    """
    kind = BoundKind(kind)
    beta_tilde = _check_beta(beta_tilde, data)
    with np.errstate(over="ignore"):
        zeta = data.X @ beta_tilde
    if not np.all(np.isfinite(zeta)):
        raise ValueError("non-finite linear predictors at the expansion point")

    n = data.n
    if kind is BoundKind.BL:
        w = np.full(n, 0.25)
        nu = np.zeros(n)
        y_eff = 4.0 * (data.y - sigmoid(zeta)) + zeta
    elif kind is BoundKind.PG:
        w = np.asarray(pg_weight(zeta))
        nu = np.zeros(n)
        y_eff = (data.y - 0.5) / w
    else:
        coeffs = pq_coeffs(zeta)
        w = np.asarray(coeffs.w_pq)
        nu = np.asarray(coeffs.nu_pq)
        y_eff = (data.y - 0.5) / w

    state = TangentState(kind=kind, zeta=zeta, w=w, nu=nu, y_eff=y_eff, offset=0.0)
    offset = log_likelihood(beta_tilde, data) - _surrogate_nonconstant(state, zeta)
    return TangentState(kind=kind, zeta=zeta, w=w, nu=nu, y_eff=y_eff, offset=offset)


def surrogate_value(state: TangentState, beta, data: Dataset) -> float:
    """Value of the tangent minorizer of the log-likelihood at ``beta``.

    Touches ``log_likelihood`` at the expansion point and never exceeds it
    elsewhere; PQ dominates PG dominates BL pointwise.
    """
    beta = _check_beta(beta, data)
    eta = data.X @ beta
    return _surrogate_nonconstant(state, eta) + state.offset


def gradient(beta, data: Dataset, penalty: PenaltyConfig) -> np.ndarray:
    """Gradient of the penalized objective; smooth (``alpha = 0``) case only."""
    if penalty.alpha != 0.0:
        raise ValueError(
            "gradient is defined for alpha = 0 only; use coord.kkt_check for "
            "the non-smooth penalties"
        )
    beta = _check_beta(beta, data)
    g = data.X.T @ (data.y - sigmoid(data.X @ beta))
    g[1:] -= penalty.lam * beta[1:]
    return g


def surrogate_scalar_sum(state: TangentState, beta, data: Dataset) -> float:
    """Per-observation form of the surrogate, ``sum_i [(y_i-1/2) eta_i + hbar(eta_i | zeta_i)]``.

    Algebraically identical to :func:`surrogate_value`; kept separate as a
    cross-check of the matrix-form assembly.
    """
    beta = _check_beta(beta, data)
    eta = data.X @ beta
    vals = eval_bound(state.kind, eta, state.zeta)
    return float((data.y - 0.5) @ eta + np.sum(vals))
