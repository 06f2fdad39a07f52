"""CSV ingestion, standardization, synthetic data, and the penalty heuristic.

Input tables carry a binary response column named ``y`` followed by numeric
predictor columns.  :func:`standardize` turns a table into a model-ready
:class:`~mmlogit.objective.Dataset`: predictors are centered and scaled to
standard deviation 0.5 (population convention, divide by n) and an
intercept column of ones is prepended.  :func:`synth` generates sparse
logistic-model data in the same standardized form, deterministic in the
seed.
"""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass

import numpy as np

from .objective import Dataset, sigmoid

__all__ = [
    "RawTable",
    "load_csv",
    "save_csv",
    "standardize",
    "lambda_heuristic",
    "synth",
]


@dataclass(frozen=True)
class RawTable:
    """Parsed CSV contents: response values plus named predictor columns."""

    predictor_names: tuple
    y: np.ndarray
    predictors: np.ndarray

    @property
    def n(self) -> int:
        return self.y.shape[0]


def load_csv(path) -> RawTable:
    """Read a header-and-rows CSV whose first column is the 0/1 response ``y``.

    Raises ``ValueError`` with the offending line number for ragged rows,
    non-numeric cells, or non-binary responses.  A file with only the
    response column is valid and yields an intercept-only dataset after
    :func:`standardize`.
    """
    with open(path, newline="", encoding="utf-8") as fh:
        reader = csv.reader(fh)
        try:
            header = next(reader)
        except StopIteration:
            raise ValueError(f"{path}: empty file") from None
        if not header or header[0].strip() != "y":
            raise ValueError(f"{path}: first column must be named 'y'")
        names = tuple(name.strip() for name in header[1:])

        ys = []
        rows = []
        for lineno, row in enumerate(reader, start=2):
            if len(row) != len(header):
                raise ValueError(
                    f"{path}: line {lineno}: expected {len(header)} cells, got {len(row)}"
                )
            try:
                values = [float(cell) for cell in row]
            except ValueError:
                raise ValueError(
                    f"{path}: line {lineno}: non-numeric cell"
                ) from None
            if not all(math.isfinite(v) for v in values):
                raise ValueError(f"{path}: line {lineno}: non-finite cell")
            if values[0] not in (0.0, 1.0):
                raise ValueError(
                    f"{path}: line {lineno}: response must be 0 or 1, got {row[0]}"
                )
            ys.append(values[0])
            rows.append(values[1:])

    if not ys:
        raise ValueError(f"{path}: no data rows")
    return RawTable(
        predictor_names=names,
        y=np.asarray(ys, dtype=float),
        predictors=np.asarray(rows, dtype=float).reshape(len(ys), len(names)),
    )


def save_csv(table: RawTable, path) -> None:
    """Write a table back to CSV with 17 significant digits (round-trip exact)."""
    with open(path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(("y",) + tuple(table.predictor_names))
        for i in range(table.n):
            writer.writerow(
                [f"{table.y[i]:.17g}"] + [f"{v:.17g}" for v in table.predictors[i]]
            )


def _standardize_columns(cols: np.ndarray, names=None):
    """Center each column and scale to population standard deviation 0.5."""
    mean = cols.mean(axis=0)
    sd = cols.std(axis=0)  # ddof=0: a two-point +/-0.5 column is a fixed point
    bad = np.nonzero(sd == 0.0)[0]
    if bad.size:
        label = names[bad[0]] if names is not None else f"column {bad[0]}"
        raise ValueError(f"constant predictor column cannot be standardized: {label}")
    return (cols - mean) * (0.5 / sd)


def standardize(table: RawTable) -> Dataset:
    """Standardized design with intercept: mean-0, sd-0.5 predictors behind a ones column."""
    if table.predictors.shape[1]:
        scaled = _standardize_columns(table.predictors, table.predictor_names)
    else:
        scaled = table.predictors
    X = np.column_stack([np.ones(table.n), scaled])
    meta = {
        "n": int(table.n),
        "p": int(X.shape[1]),
        "standardized": True,
        "sd_convention": "population (ddof=0), target sd 0.5",
        "predictor_names": list(table.predictor_names),
    }
    return Dataset(y=table.y, X=X, meta=meta)


def lambda_heuristic(p: int, sigma0: float = 5.0) -> float:
    """Dimension-dependent ridge strength ``p / (sigma0^2 * 100)``.

    Under the Bayesian reading of the ridge penalty this keeps the prior
    variance of a linear predictor built from mean-0/sd-0.5 predictors in
    the same sensible range regardless of dimension.
    """
    if p < 1:
        raise ValueError("p must be at least 1")
    if not sigma0 > 0.0:
        raise ValueError("sigma0 must be positive")
    return p / (sigma0 * sigma0 * 100.0)


def synth(
    n: int,
    p: int,
    seed: int,
    coef_sparsity: float = 0.1,
    coef_scale: float = 1.0,
) -> Dataset:
    """Sparse logistic-model data in the standardized design convention.

    ``p`` counts design columns including the intercept.  Predictors are
    standard normal draws, standardized to mean 0 / sd 0.5; the true
    coefficient vector has ``ceil(coef_sparsity * p)`` nonzero entries
    (capped at ``p - 1``) of magnitude ``coef_scale`` with random signs on
    randomly chosen predictor coordinates, and zero intercept.  Responses
    are Bernoulli draws from the logistic model.  Deterministic given
    ``seed`` (numpy ``default_rng``, PCG64); the recipe is recorded in the
    dataset metadata.
    """
    if n < 2 or p < 2:
        raise ValueError("need n >= 2 and p >= 2")
    if not 0.0 <= coef_sparsity <= 1.0:
        raise ValueError("coef_sparsity must lie in [0, 1]")
    rng = np.random.default_rng(seed)
    Z = _standardize_columns(rng.standard_normal((n, p - 1)))
    X = np.column_stack([np.ones(n), Z])

    beta_true = np.zeros(p)
    k = min(math.ceil(coef_sparsity * p), p - 1)
    if k > 0:
        support = rng.choice(p - 1, size=k, replace=False)
        signs = rng.choice([-1.0, 1.0], size=k)
        beta_true[1 + support] = signs * coef_scale

    y = (rng.random(n) < sigmoid(X @ beta_true)).astype(float)
    meta = {
        "generator": "numpy default_rng (PCG64)",
        "seed": int(seed),
        "n": int(n),
        "p": int(p),
        "coef_sparsity": float(coef_sparsity),
        "coef_scale": float(coef_scale),
        "standardized": True,
        "sd_convention": "population (ddof=0), target sd 0.5",
        "beta_true": beta_true.tolist(),
    }
    return Dataset(y=y, X=X, meta=meta)
