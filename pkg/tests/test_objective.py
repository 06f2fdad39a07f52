"""Tests for the likelihood, penalty, and tangent-surrogate machinery."""

import numpy as np
import pytest

from mmlogit.bounds import BoundKind, eval_bound, h, h_prime, pg_weight
from mmlogit.objective import (
    Dataset,
    PenaltyConfig,
    gradient,
    log_likelihood,
    make_tangent_state,
    penalized_objective,
    surrogate_scalar_sum,
    surrogate_value,
)
from oracles import finite_diff_gradient

KINDS = [BoundKind.BL, BoundKind.PG, BoundKind.PQ]


def random_dataset(rng, n=8, p=3):
    X = np.column_stack([np.ones(n), rng.standard_normal((n, p - 1))])
    y = (rng.random(n) < 0.5).astype(float)
    return Dataset(y=y, X=X)


# ---------------------------------------------------------------- types


def test_dataset_validation():
    ones = np.ones((3, 1))
    Dataset(y=np.array([0.0, 1.0, 1.0]), X=ones)  # intercept-only is fine
    with pytest.raises(ValueError):
        Dataset(y=np.array([0.0, 2.0, 1.0]), X=ones)
    with pytest.raises(ValueError):
        Dataset(y=np.array([0.0, 1.0]), X=ones)
    with pytest.raises(ValueError):
        Dataset(y=np.array([0.0, 1.0, 1.0]), X=np.zeros((3, 1)))
    bad = np.ones((3, 2))
    bad[1, 1] = np.nan
    with pytest.raises(ValueError):
        Dataset(y=np.array([0.0, 1.0, 1.0]), X=bad)


def test_penalty_validation():
    PenaltyConfig(lam=0.0, alpha=0.0)
    PenaltyConfig(lam=2.0, alpha=1.0)
    with pytest.raises(ValueError):
        PenaltyConfig(lam=-1.0)
    with pytest.raises(ValueError):
        PenaltyConfig(lam=1.0, alpha=1.5)


# ---------------------------------------------------------------- likelihood


def test_log_likelihood_at_zero(rng):
    data = random_dataset(rng, n=11)
    beta = np.zeros(data.p)
    assert log_likelihood(beta, data) == pytest.approx(-11 * np.log(2.0), rel=1e-14)


def test_log_likelihood_scalar_case():
    data = Dataset(y=np.array([1.0]), X=np.ones((1, 1)))
    # 2 - log(1 + e^2), evaluated at 60-digit precision
    assert log_likelihood(np.array([2.0]), data) == pytest.approx(
        -0.12692801104297250, abs=1e-14
    )


def test_log_likelihood_two_forms_agree(rng):
    for _ in range(20):
        data = random_dataset(rng, n=9, p=4)
        beta = rng.standard_normal(4) * 3.0
        eta = data.X @ beta
        alt = float((data.y - 0.5) @ eta + np.sum(h(eta)))
        ll = log_likelihood(beta, data)
        assert ll == pytest.approx(alt, rel=1e-10)


def test_log_likelihood_overflow_safe(rng):
    data = random_dataset(rng, n=6, p=2)
    beta = np.array([800.0, -900.0])
    assert np.isfinite(log_likelihood(beta, data))


def test_log_likelihood_shape_check(rng):
    data = random_dataset(rng)
    with pytest.raises(ValueError):
        log_likelihood(np.zeros(data.p + 1), data)


# ---------------------------------------------------------------- penalty


def test_penalized_objective_reduces_to_likelihood(rng):
    data = random_dataset(rng)
    beta = rng.standard_normal(data.p)
    pen = PenaltyConfig(lam=0.0, alpha=0.3)
    assert penalized_objective(beta, data, pen) == log_likelihood(beta, data)


def test_penalized_objective_at_origin(rng):
    data = random_dataset(rng, n=10)
    for lam, alpha in [(0.5, 0.0), (2.0, 0.7), (3.0, 1.0)]:
        val = penalized_objective(np.zeros(data.p), data, PenaltyConfig(lam, alpha))
        assert val == pytest.approx(-10 * np.log(2.0), rel=1e-14)


def test_penalized_objective_ridge_recomputation(rng):
    data = random_dataset(rng, p=4)
    beta = rng.standard_normal(4)
    lam = 1.7
    expected = log_likelihood(beta, data) - 0.5 * lam * np.sum(beta[1:] ** 2)
    got = penalized_objective(beta, data, PenaltyConfig(lam=lam, alpha=0.0))
    assert got == pytest.approx(expected, rel=1e-14)


# ---------------------------------------------------------------- tangent state


def test_state_at_origin_collapses(rng):
    data = random_dataset(rng)
    for kind in KINDS:
        state = make_tangent_state(kind, np.zeros(data.p), data)
        assert np.all(state.zeta == 0.0)
        assert np.all(state.w == 0.25)
        assert np.all(state.nu == 0.0)


def test_pg_effective_response_formula(rng):
    data = random_dataset(rng)
    beta = rng.standard_normal(data.p)
    state = make_tangent_state(BoundKind.PG, beta, data)
    expected = (data.y - 0.5) / np.asarray(pg_weight(data.X @ beta))
    assert np.allclose(state.y_eff, expected, rtol=1e-14)


def test_bl_effective_response_formula(rng):
    data = random_dataset(rng)
    beta = rng.standard_normal(data.p)
    state = make_tangent_state(BoundKind.BL, beta, data)
    zeta = data.X @ beta
    pi = 1.0 / (1.0 + np.exp(-zeta))
    assert np.allclose(state.w * state.y_eff, data.y - pi + 0.25 * zeta, atol=1e-14)


def test_pq_state_tangency_identity(rng):
    data = random_dataset(rng, n=15)
    beta = rng.standard_normal(data.p) * 2.0
    state = make_tangent_state(BoundKind.PQ, beta, data)
    nonzero = state.zeta != 0.0
    lhs = state.w[nonzero] + state.nu[nonzero] / np.abs(state.zeta[nonzero])
    assert np.allclose(lhs, np.asarray(pg_weight(state.zeta[nonzero])), rtol=1e-12)


def test_state_rejects_overflowing_predictors(rng):
    data = random_dataset(rng)
    with pytest.raises(ValueError):
        make_tangent_state(BoundKind.PG, np.full(data.p, 1e308), data)


# ---------------------------------------------------------------- surrogate


def test_surrogate_tangency_all_kinds(rng):
    for _ in range(10):
        data = random_dataset(rng, n=7, p=3)
        beta = rng.standard_normal(3) * 2.0
        ll = log_likelihood(beta, data)
        for kind in KINDS:
            state = make_tangent_state(kind, beta, data)
            assert surrogate_value(state, beta, data) == pytest.approx(
                ll, abs=1e-12 * (1.0 + abs(ll))
            )


def test_surrogate_dominance_chain(rng):
    for _ in range(10):
        data = random_dataset(rng, n=7, p=3)
        tangent = rng.standard_normal(3) * 2.0
        beta = rng.standard_normal(3) * 2.0
        states = {k: make_tangent_state(k, tangent, data) for k in KINDS}
        vals = {k: surrogate_value(states[k], beta, data) for k in KINDS}
        slack = 1e-12 * (1.0 + abs(vals[BoundKind.BL]))
        assert vals[BoundKind.PQ] >= vals[BoundKind.PG] - slack
        assert vals[BoundKind.PG] >= vals[BoundKind.BL] - slack


def test_surrogate_minorizes_likelihood(rng):
    data = random_dataset(rng, n=5, p=3)
    for _ in range(1000):
        tangent = rng.standard_normal(3) * 3.0
        beta = rng.standard_normal(3) * 3.0
        ll = log_likelihood(beta, data)
        for kind in KINDS:
            state = make_tangent_state(kind, tangent, data)
            assert surrogate_value(state, beta, data) <= ll + 1e-10


def test_surrogate_matrix_and_scalar_forms_agree(rng):
    for _ in range(10):
        data = random_dataset(rng, n=9, p=4)
        tangent = rng.standard_normal(4)
        beta = rng.standard_normal(4)
        for kind in KINDS:
            state = make_tangent_state(kind, tangent, data)
            a = surrogate_value(state, beta, data)
            b = surrogate_scalar_sum(state, beta, data)
            assert a == pytest.approx(b, rel=1e-9, abs=1e-9)


def test_pg_dominates_any_valid_separable_quadratic(rng):
    # Any per-observation tangent quadratic needs curvature >= w_pg, and
    # then lies below the PG surrogate pointwise.
    data = random_dataset(rng, n=8, p=3)
    tangent = rng.standard_normal(3)
    zeta = data.X @ tangent
    pg_state = make_tangent_state(BoundKind.PG, tangent, data)
    for _ in range(25):
        w = np.asarray(pg_weight(zeta)) * (1.0 + rng.uniform(0.0, 3.0, size=data.n))
        beta = rng.standard_normal(3) * 2.0
        eta = data.X @ beta
        d = eta - zeta
        per_obs = h(zeta) + h_prime(zeta) * d - w * d * d / 2.0
        competitor = float((data.y - 0.5) @ eta + np.sum(per_obs))
        pg_val = surrogate_value(pg_state, beta, data)
        assert pg_val >= competitor - 1e-10


# ---------------------------------------------------------------- gradient


def test_gradient_at_origin(rng):
    data = random_dataset(rng)
    g = gradient(np.zeros(data.p), data, PenaltyConfig(lam=0.0))
    assert np.allclose(g, data.X.T @ (data.y - 0.5), atol=1e-14)


def test_gradient_matches_finite_differences(rng):
    data = random_dataset(rng, n=12, p=4)
    pen = PenaltyConfig(lam=0.8, alpha=0.0)
    beta = rng.standard_normal(4)
    fd = finite_diff_gradient(lambda b: penalized_objective(b, data, pen), beta)
    assert np.allclose(gradient(beta, data, pen), fd, atol=1e-6)


def test_gradient_intercept_unpenalized(rng):
    data = random_dataset(rng)
    beta = rng.standard_normal(data.p)
    g0 = gradient(beta, data, PenaltyConfig(lam=0.0))
    g5 = gradient(beta, data, PenaltyConfig(lam=5.0))
    assert g0[0] == g5[0]
    assert not np.allclose(g0[1:], g5[1:])


def test_gradient_rejects_nonsmooth_penalty(rng):
    data = random_dataset(rng)
    with pytest.raises(ValueError):
        gradient(np.zeros(data.p), data, PenaltyConfig(lam=1.0, alpha=0.5))
