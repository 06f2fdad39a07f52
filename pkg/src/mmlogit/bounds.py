"""Scalar kernels for tangent minorization of the logistic log-likelihood.

Every per-observation term of a logistic log-likelihood can be written as
``(y - 0.5) * r + h(r)`` with ``h(r) = -log(exp(r/2) + exp(-r/2))`` and
``r`` the linear predictor.  This module implements ``h``, its derivative,
and three families of tangent lower bounds of ``h`` indexed by the tangent
location ``zeta``:

* ``BL``  -- quadratic with the uniform worst-case curvature 1/4,
* ``PG``  -- quadratic with curvature ``w_pg(zeta) = tanh(zeta/2)/(2*zeta)``,
  the tightest possible tangent quadratic,
* ``PQ``  -- piece-wise quadratic, adding an ``|r|`` correction term that
  makes the bound tighter than any tangent quadratic.

All functions are pure, accept scalars or ndarrays, and broadcast.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum

import numpy as np

__all__ = [
    "BoundKind",
    "PqCoefficients",
    "h",
    "h_prime",
    "pg_weight",
    "pq_coeffs",
    "eval_bound",
    "eval_transformed",
]

LOG2 = float(np.log(2.0))

# Below this |zeta| the closed forms suffer 0/0 cancellation; Taylor
# expansions keep the switching error under 1e-16.
SMALL_ZETA = 1e-4


class BoundKind(Enum):
    """The three tangent minorizer families."""

    BL = "bl"
    PG = "pg"
    PQ = "pq"


@dataclass(frozen=True)
class PqCoefficients:
    """Coefficients of the piece-wise quadratic bound at a tangent location.

    For finite ``zeta`` the curvature ``w_pq`` is strictly positive, the
    absolute-value coefficient ``nu_pq`` is non-negative, and the slope
    condition ``w_pg(zeta) = w_pq + nu_pq/|zeta|`` holds whenever
    ``zeta != 0``.  As ``zeta -> 0``, ``w_pq -> 1/4`` and ``nu_pq -> 0``.
    """

    w_pq: np.ndarray | float
    nu_pq: np.ndarray | float
    zeta: np.ndarray | float


def _finite_array(x, name):
    arr = np.asarray(x, dtype=float)
    if not np.all(np.isfinite(arr)):
        raise ValueError(f"{name} must be finite, got {x!r}")
    return arr


def _match(value, template):
    """Return a Python float when the input was scalar."""
    if np.ndim(template) == 0:
        return float(value)
    return value


def h(r):
    """Negative log of the symmetrized logistic partition, ``-log(e^{r/2}+e^{-r/2})``.

    Even in ``r`` with maximum ``-log 2`` at 0.  Computed as
    ``-|r|/2 - log1p(exp(-|r|))`` so it never overflows, even for
    predictors of magnitude well beyond 700.
    """
    arr = _finite_array(r, "r")
    a = np.abs(arr)
    return _match(-(a / 2.0 + np.log1p(np.exp(-a))), r)


def h_prime(r):
    """First derivative ``h'(r) = -tanh(r/2)/2``; odd, with range (-1/2, 1/2)."""
    arr = _finite_array(r, "r")
    return _match(-np.tanh(arr / 2.0) / 2.0, r)


def _log_cosh(x):
    """Overflow-free ``log(cosh(x))``, accurate down to x = 0.

    For small ``x`` the naive ``|x| + log1p(e^{-2|x|}) - log 2`` loses all
    significant digits (the result is O(x^2) from terms of size log 2), so
    we use ``cosh(x) - 1 = 2 sinh(x/2)^2`` there instead.
    """
    a = np.abs(x)
    small = a < 1.0
    out = np.where(
        small,
        np.log1p(2.0 * np.sinh(np.where(small, a, 0.0) / 2.0) ** 2),
        a - LOG2 + np.log1p(np.exp(-2.0 * np.where(small, 1.0, a))),
    )
    return out


def pg_weight(zeta):
    """Curvature of the tightest tangent quadratic, ``tanh(zeta/2)/(2 zeta)``.

    Even in ``zeta`` with values in (0, 0.25]; the supremum 0.25 is the
    limit at 0, evaluated through the series ``1/4 - zeta^2/48`` below
    ``|zeta| < 1e-4``.
    """
    z = _finite_array(zeta, "zeta")
    small = np.abs(z) < SMALL_ZETA
    z_safe = np.where(small, 1.0, z)
    direct = np.tanh(z_safe / 2.0) / (2.0 * z_safe)
    series = 0.25 - z * z / 48.0
    return _match(np.where(small, series, direct), zeta)


def pq_coeffs(zeta):
    """Curvature and absolute-value coefficients of the piece-wise bound.

    ``w_pq(zeta) = 2 w_pg(zeta) - 2 log cosh(zeta/2) / zeta^2`` and
    ``nu_pq(zeta) = |zeta| (w_pg(zeta) - w_pq(zeta))``, with Taylor
    expansions ``1/4 - zeta^2/32`` and ``|zeta| zeta^2 / 96`` below
    ``|zeta| < 1e-4``.
    """
    z = _finite_array(zeta, "zeta")
    a = np.abs(z)
    small = a < SMALL_ZETA
    z_safe = np.where(small, 1.0, z)

    wpg = np.tanh(z_safe / 2.0) / (2.0 * z_safe)
    w_direct = 2.0 * wpg - 2.0 * _log_cosh(z_safe / 2.0) / (z_safe * z_safe)
    nu_direct = np.abs(z_safe) * (wpg - w_direct)

    w = np.where(small, 0.25 - z * z / 32.0, w_direct)
    nu = np.where(small, a * z * z / 96.0, nu_direct)
    return PqCoefficients(w_pq=_match(w, zeta), nu_pq=_match(nu, zeta), zeta=zeta)


def eval_bound(kind, r, zeta):
    """Evaluate the tangent lower bound ``kind`` of ``h`` at ``r``.

    ``zeta`` is the tangent location: the bound touches ``h`` at
    ``r = zeta`` and lies below it everywhere else.  Pointwise the three
    families satisfy ``h >= PQ >= PG >= BL``.
    """
    kind = BoundKind(kind)
    rr = _finite_array(r, "r")
    zz = _finite_array(zeta, "zeta")
    rr, zz = np.broadcast_arrays(rr, zz)
    hz = -(np.abs(zz) / 2.0 + np.log1p(np.exp(-np.abs(zz))))

    if kind is BoundKind.BL:
        d = rr - zz
        out = hz + (-np.tanh(zz / 2.0) / 2.0) * d - 0.125 * d * d
    elif kind is BoundKind.PG:
        out = hz - pg_weight(zz) * (rr * rr - zz * zz) / 2.0
    else:
        c = pq_coeffs(zz)
        out = (
            hz
            - c.w_pq * (rr * rr - zz * zz) / 2.0
            - c.nu_pq * (np.abs(rr) - np.abs(zz))
        )
    if np.ndim(r) == 0 and np.ndim(zeta) == 0:
        return float(out)
    return out


def eval_transformed(kind, rho, phi):
    """Evaluate the PG or PQ bound in the squared-predictor parametrization.

    With ``rho = r^2`` and ``phi = zeta^2``, ``h~(rho) = h(sqrt(rho))`` is
    convex, the PG bound is its tangent line at ``phi``, and the PQ bound
    adds a concave ``sqrt(rho)`` correction pinned so the two functions
    also touch at ``rho = 0``.  Equals ``eval_bound(kind, sqrt(rho),
    sqrt(phi))``.
    """
    kind = BoundKind(kind)
    if kind is BoundKind.BL:
        raise ValueError("the transformed parametrization is defined for PG and PQ only")
    rho_arr = _finite_array(rho, "rho")
    phi_arr = _finite_array(phi, "phi")
    if np.any(rho_arr < 0.0):
        raise ValueError("rho must be non-negative")
    if np.any(phi_arr < 0.0):
        raise ValueError("phi must be non-negative")
    rho_arr, phi_arr = np.broadcast_arrays(rho_arr, phi_arr)

    z = np.sqrt(phi_arr)
    hz = -(z / 2.0 + np.log1p(np.exp(-z)))
    if kind is BoundKind.PG:
        out = hz - pg_weight(z) * (rho_arr - phi_arr) / 2.0
    else:
        c = pq_coeffs(z)
        out = hz - c.w_pq * (rho_arr - phi_arr) / 2.0 - c.nu_pq * (np.sqrt(rho_arr) - z)
    if np.ndim(rho) == 0 and np.ndim(phi) == 0:
        return float(out)
    return out
