import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from hypothesis.extra.numpy import arrays
from scipy.optimize import minimize

from tsclust.errors import DataError, NumericalError
from tsclust.transform import (
    Hyperparams,
    Variant,
    joint_objective,
    objective_terms,
    soft_threshold,
    transform_gradient,
    transform_objective,
    update_transform,
    update_z,
    z_objective,
)


# ---------------------------------------------------------------- soft threshold

def test_soft_threshold_small_matrix():
    m = np.array([[3.0, -0.05], [-2.0, 0.05]])
    np.testing.assert_allclose(soft_threshold(m, 0.1), [[2.9, 0.0], [-1.9, 0.0]], atol=1e-15)


def test_soft_threshold_zero_tau_is_identity():
    m = np.random.default_rng(0).standard_normal((7, 5))
    np.testing.assert_array_equal(soft_threshold(m, 0.0), m)


def test_soft_threshold_matches_scalar_loop():
    m = np.random.default_rng(1).standard_normal((100, 100))
    tau = 0.5
    expected = np.empty_like(m)
    for i in range(m.shape[0]):
        for j in range(m.shape[1]):
            v = m[i, j]
            mag = max(0.0, abs(v) - tau)
            expected[i, j] = mag if v > 0 else -mag
    np.testing.assert_array_equal(soft_threshold(m, tau), expected)


def test_soft_threshold_rejects_nonfinite():
    with pytest.raises(DataError):
        soft_threshold(np.array([1.0, np.nan]), 0.1)


@settings(max_examples=50, deadline=None)
@given(
    arrays(np.float64, (6, 4), elements=st.floats(-1e6, 1e6)),
    st.floats(0, 1e3),
)
def test_soft_threshold_contracts_toward_zero(m, tau):
    out = soft_threshold(m, tau)
    assert np.all(np.abs(out) <= np.abs(m))
    assert np.all((out == 0) | (np.sign(out) == np.sign(m)))


# ---------------------------------------------------------------- transform update

def _p1_minimum_by_search(x, z, lam, starts=10, seed=0):
    """Numerical minimization of the transform subproblem from random starts."""
    d = x.shape[0]
    rng = np.random.default_rng(seed)

    def f(v):
        t = v.reshape(d, d)
        sign, logdet = np.linalg.slogdet(t)
        if sign <= 0:
            return np.inf
        r = t @ x - z
        return np.sum(r * r) + lam * (np.sum(t * t) - logdet)

    def g(v):
        return transform_gradient(v.reshape(d, d), x, z, lam).ravel()

    best = None
    for _ in range(starts):
        t0 = np.eye(d) + 0.3 * rng.standard_normal((d, d))
        if np.linalg.det(t0) <= 0:
            t0[0] *= -1
        res = minimize(f, t0.ravel(), jac=g, method="BFGS", options={"gtol": 1e-12, "maxiter": 10000})
        if best is None or res.fun < best.fun:
            best = res
    return best.x.reshape(d, d), best.fun


def test_update_transform_identity_case_matches_search():
    x = np.eye(3)
    z = np.eye(3)
    t = update_transform(x, z, 1.0)
    t_ref, f_ref = _p1_minimum_by_search(x, z, 1.0)
    # closed form on the diagonal: 0.5 (s + sqrt(s^2 + 2)) / sqrt(2) with s = 1/sqrt(2)
    s = 1 / np.sqrt(2)
    c = 0.5 * (s + np.sqrt(s * s + 2.0)) / np.sqrt(2)
    np.testing.assert_allclose(t, c * np.eye(3), atol=1e-12)
    np.testing.assert_allclose(t, t_ref, atol=1e-6)
    assert transform_objective(t, x, z, 1.0) <= f_ref + 1e-10


def test_update_transform_stationary_with_zero_coefficients():
    rng = np.random.default_rng(2)
    x = rng.standard_normal((5, 20))
    t = update_transform(x, np.zeros((5, 20)), 0.1)
    grad = transform_gradient(t, x, np.zeros((5, 20)), 0.1)
    assert np.linalg.norm(grad) <= 1e-8 * (1 + np.linalg.norm(t))
    assert np.linalg.det(t) > 0


def test_update_transform_beats_random_perturbations():
    rng = np.random.default_rng(3)
    x = rng.standard_normal((8, 40))
    z = rng.standard_normal((8, 40))
    t = update_transform(x, z, 0.1)
    f0 = transform_objective(t, x, z, 0.1)
    for _ in range(100):
        delta = rng.standard_normal(t.shape)
        delta /= np.linalg.norm(delta)
        assert f0 <= transform_objective(t + 1e-3 * delta, x, z, 0.1)


def test_update_transform_matches_search_on_random_instance():
    rng = np.random.default_rng(4)
    x = rng.standard_normal((3, 12))
    z = rng.standard_normal((3, 12))
    t = update_transform(x, z, 0.5)
    _, f_ref = _p1_minimum_by_search(x, z, 0.5)
    assert transform_objective(t, x, z, 0.5) <= f_ref + 1e-8


def test_update_transform_positive_determinant_when_reflection_needed():
    # z = -x flips an odd number of axes, so det(V U^T) < 0 for the unconstrained fit
    rng = np.random.default_rng(5)
    x = rng.standard_normal((4, 30))
    z = x.copy()
    z[0] *= -1
    t = update_transform(x, z, 0.1)
    assert np.linalg.det(t) > 0
    grad = transform_gradient(t, x, z, 0.1)
    assert np.linalg.norm(grad) <= 1e-8 * (1 + np.linalg.norm(t))
    _, f_ref = _p1_minimum_by_search(x, z, 0.1, starts=10, seed=1)
    assert transform_objective(t, x, z, 0.1) <= f_ref + 1e-8


@settings(max_examples=30, deadline=None)
@given(
    st.integers(1, 8),
    st.integers(2, 30),
    st.floats(1e-3, 10.0),
    st.integers(0, 2**32 - 1),
)
def test_update_transform_stationarity_property(d, n, lam, seed):
    rng = np.random.default_rng(seed)
    x = rng.standard_normal((d, n))
    z = rng.standard_normal((d, n)) * rng.uniform(0, 3)
    t = update_transform(x, z, lam)
    assert np.linalg.slogdet(t)[0] > 0
    grad = transform_gradient(t, x, z, lam)
    assert np.linalg.norm(grad) <= 1e-8 * (1 + np.linalg.norm(t))


def test_update_transform_shape_mismatch():
    with pytest.raises(DataError):
        update_transform(np.ones((3, 4)), np.ones((3, 5)), 0.1)


# ---------------------------------------------------------------- coefficient update

def _random_c(n, rng):
    c = rng.standard_normal((n, n)) * 0.2
    np.fill_diagonal(c, 0.0)
    return c


def test_update_z_exact_fit_without_penalties():
    rng = np.random.default_rng(6)
    t, x = rng.standard_normal((4, 4)), rng.standard_normal((4, 9))
    hp = Hyperparams(mu=0.0, gamma=0.0)
    np.testing.assert_array_equal(update_z(t, x, _random_c(9, rng), hp), t @ x)


def test_update_z_gamma_zero_is_prox():
    rng = np.random.default_rng(7)
    t, x = rng.standard_normal((4, 4)), rng.standard_normal((4, 9))
    hp = Hyperparams(mu=0.3, gamma=0.0)
    z = update_z(t, x, _random_c(9, rng), hp)
    np.testing.assert_array_equal(z, soft_threshold(t @ x, 0.15))
    # elementwise check of optimality: min (a - z)^2 + mu |z|
    tx = t @ x
    grid = np.linspace(-6, 6, 24001)
    for a, zz in zip(tx.ravel()[:10], z.ravel()[:10]):
        vals = (a - grid) ** 2 + 0.3 * np.abs(grid)
        assert abs(grid[np.argmin(vals)] - zz) <= 1e-3


def _ista_oracle(tx, c, mu, gamma, iters):
    n = tx.shape[1]
    m = np.eye(n) - c
    lip = 2 * (1 + gamma * np.linalg.norm(m, 2) ** 2)
    z = np.zeros_like(tx)
    for _ in range(iters):
        g = 2 * (z - tx) + 2 * gamma * z @ m @ m.T
        v = z - g / lip
        z = np.sign(v) * np.maximum(np.abs(v) - mu / lip, 0)
    return z


def test_update_z_matches_long_run_oracle():
    rng = np.random.default_rng(8)
    t, x = rng.standard_normal((6, 6)), rng.standard_normal((6, 15))
    c = _random_c(15, rng)
    hp = Hyperparams(mu=0.1, gamma=1.0)
    z = update_z(t, x, c, hp)
    z_ref = _ista_oracle(t @ x, c, 0.1, 1.0, 100_000)
    f, f_ref = z_objective(t, x, z, c, 0.1, 1.0), z_objective(t, x, z_ref, c, 0.1, 1.0)
    assert abs(f - f_ref) <= 1e-4 * abs(f_ref)


@settings(max_examples=25, deadline=None)
@given(st.integers(0, 2**32 - 1), st.floats(0, 1), st.floats(0, 5))
def test_update_z_never_increases_from_warm_start(seed, mu, gamma):
    rng = np.random.default_rng(seed)
    t, x = rng.standard_normal((5, 5)), rng.standard_normal((5, 10))
    c = _random_c(10, rng)
    z0 = rng.standard_normal((5, 10))
    hp = Hyperparams(mu=mu, gamma=gamma, inner_iters=20)
    z = update_z(t, x, c, hp, z0=z0) if gamma > 0 else update_z(t, x, c, hp)
    f0 = z_objective(t, x, z0, c, mu, gamma)
    assert z_objective(t, x, z, c, mu, gamma) <= f0 * (1 + 1e-12) + 1e-12


# ---------------------------------------------------------------- joint objective

def test_joint_objective_identity_state():
    eye = np.eye(3)
    hp = Hyperparams(lam=1.0, mu=0.0, gamma=0.0)
    assert joint_objective(eye, eye, eye, np.zeros((3, 3)), hp, "TLLMC") == pytest.approx(3.0, abs=1e-14)


def test_joint_objective_rejects_nonpositive_determinant():
    t = np.diag([1.0, -1.0, 1.0])
    with pytest.raises(NumericalError):
        joint_objective(t, np.eye(3), np.eye(3), np.zeros((3, 3)), Hyperparams(), "TSSC")


def _objective_by_terms(t, x, z, c, hp, variant):
    d, n = x.shape
    fid = 0.0
    tx = t @ x
    for i in range(d):
        for j in range(n):
            fid += (tx[i, j] - z[i, j]) ** 2
    tnorm = sum(t[i, j] ** 2 for i in range(d) for j in range(d))
    logdet = np.log(np.prod(np.linalg.eigvals(t)).real)
    l1 = sum(abs(z[i, j]) for i in range(d) for j in range(n))
    se = 0.0
    for i in range(n):
        rec = np.zeros(d)
        for j in range(n):
            if j != i:
                rec += z[:, j] * c[j, i]
        se += np.sum((z[:, i] - rec) ** 2)
    cz = c.copy()
    np.fill_diagonal(cz, 0)
    if variant == "TLLMC":
        reg = 0.0
    elif variant == "TSSC":
        reg = hp.mu_c * sum(abs(v) for v in cz.ravel())
    else:
        reg = hp.mu_c * np.sum(np.sqrt(np.clip(np.linalg.eigvalsh(cz.T @ cz), 0, None)))
    return fid + hp.lam * (tnorm - logdet) + hp.mu * l1 + hp.gamma * se + reg


@pytest.mark.parametrize("variant", ["TLLMC", "TSSC", "TLRR"])
def test_joint_objective_term_by_term(variant):
    rng = np.random.default_rng(9)
    d, n = 4, 7
    t = np.eye(d) + 0.2 * rng.standard_normal((d, d))
    x, z = rng.standard_normal((d, n)), rng.standard_normal((d, n))
    c = rng.standard_normal((n, n))  # nonzero diagonal must be ignored
    hp = Hyperparams(lam=0.3, mu=0.2, gamma=1.5, mu_c=0.4)
    expected = _objective_by_terms(t, x, z, c, hp, variant)
    got = joint_objective(t, x, z, c, hp, Variant(variant))
    assert got == pytest.approx(expected, rel=1e-10)
    assert sum(objective_terms(t, x, z, c, hp, variant).values()) == got
