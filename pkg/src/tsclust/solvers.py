"""Subspace-coefficient solvers and the alternating-minimization driver."""

from dataclasses import dataclass, field

import numpy as np

from .errors import DataError, NumericalError
from .kernels import KernelSpec, gram_matrix
from .transform import (
    Hyperparams,
    Variant,
    as_data_matrix,
    joint_objective,
    soft_threshold,
    transform_objective,
    update_transform,
    update_z,
)

__all__ = [
    "TscModel",
    "update_c_llmc",
    "update_c_ssc",
    "update_c_lrr",
    "svt",
    "ssc_objective",
    "lrr_objective",
    "fit",
    "fit_piecemeal",
]


def _check_z(z, min_cols=3):
    z = np.asarray(z, dtype=np.float64)
    if z.ndim != 2:
        raise DataError(f"coefficient matrix must be 2-D, got shape {z.shape}")
    if z.shape[1] < min_cols:
        raise DataError(f"need at least {min_cols} samples, got {z.shape[1]}")
    return z


def update_c_llmc(z):
    """Unregularized self-expression, one least-squares problem per column.

    Column ``i`` of the result is the minimum-norm least-squares solution of
    ``z_i ~ Z_{-i} c`` with a zero inserted at position ``i``.
    """
    z = _check_z(z)
    n = z.shape[1]
    c = np.zeros((n, n))
    idx = np.arange(n)
    for i in range(n):
        others = idx != i
        coef, *_ = np.linalg.lstsq(z[:, others], z[:, i], rcond=None)
        c[others, i] = coef
    return c


def ssc_objective(z, c, mu_c):
    """``||Z - Z C||_F^2 + mu_c ||C||_1``."""
    e = z - z @ c
    return float(np.sum(e * e) + mu_c * np.abs(c).sum())


def lrr_objective(z, c, mu_c):
    """``||Z - Z C||_F^2 + mu_c ||C||_*``."""
    e = z - z @ c
    return float(np.sum(e * e) + mu_c * np.linalg.svd(c, compute_uv=False).sum())


def _start(c0, n):
    if c0 is None:
        return np.zeros((n, n))
    c = np.array(c0, dtype=np.float64, copy=True)
    if c.shape != (n, n):
        raise DataError(f"warm start must be {n}x{n}, got {c.shape}")
    np.fill_diagonal(c, 0.0)
    return c


def update_c_ssc(z, mu_c, inner=100, tol=1e-6, c0=None, return_history=False):
    """Sparse self-expression by ISTA.

    Minimizes ``||Z - Z C||_F^2 + mu_c ||C||_1`` subject to ``diag(C) = 0``.
    The l1 prox is separable, so zeroing the diagonal after each
    soft-thresholding step is the exact prox of the constrained problem and
    the iteration is monotone.

    Parameters
    ----------
    z : ndarray, shape (d, n)
    mu_c : float
    inner : int
        Iteration cap.
    tol : float
        Stop once ``||C_new - C||_F <= tol * max(1, ||C_new||_F)``.
    c0 : ndarray, optional
        Warm start; zeros by default.
    return_history : bool
        Also return the objective after every iteration (entry 0 is the start).
    """
    z = _check_z(z)
    n = z.shape[1]
    c = _start(c0, n)
    gram = z.T @ z
    lip = 2.0 * np.linalg.norm(z, 2) ** 2
    history = [ssc_objective(z, c, mu_c)] if return_history else None
    if lip > 0:
        step = 1.0 / lip
        for _ in range(inner):
            grad = 2.0 * (gram @ c - gram)
            c_new = soft_threshold(c - step * grad, step * mu_c)
            np.fill_diagonal(c_new, 0.0)
            delta = np.linalg.norm(c_new - c)
            c = c_new
            if history is not None:
                history.append(ssc_objective(z, c, mu_c))
            if delta <= tol * max(1.0, np.linalg.norm(c)):
                break
    return (c, history) if return_history else c


def svt(m, tau):
    """Singular value thresholding, the prox of ``tau * ||.||_*``."""
    m = np.asarray(m, dtype=np.float64)
    if tau < 0:
        raise ValueError(f"tau must be nonnegative, got {tau}")
    try:
        u, s, vt = np.linalg.svd(m, full_matrices=False)
    except np.linalg.LinAlgError as exc:
        raise NumericalError(f"SVD failed: {exc}") from exc
    s = np.maximum(s - tau, 0.0)
    return (u * s) @ vt


def update_c_lrr(z, mu_c, inner=100, tol=1e-6, c0=None, return_history=False):
    """Low-rank self-expression by proximal gradient.

    Minimizes ``||Z - Z C||_F^2 + mu_c ||C||_*`` with the diagonal of ``C`` zeroed
    after every singular value thresholding step. The zeroing is a projection
    heuristic (the constrained nuclear-norm prox has no closed form), so each
    candidate is accepted only if it does not raise the objective; the solver
    stops at the first rejected step.

    Parameters are as in :func:`update_c_ssc`.
    """
    z = _check_z(z)
    n = z.shape[1]
    c = _start(c0, n)
    gram = z.T @ z
    lip = 2.0 * np.linalg.norm(z, 2) ** 2
    obj = lrr_objective(z, c, mu_c)
    history = [obj] if return_history else None
    if lip > 0:
        step = 1.0 / lip
        for _ in range(inner):
            grad = 2.0 * (gram @ c - gram)
            c_new = svt(c - step * grad, step * mu_c)
            np.fill_diagonal(c_new, 0.0)
            obj_new = lrr_objective(z, c_new, mu_c)
            if obj_new > obj:
                break
            delta = np.linalg.norm(c_new - c)
            c, obj = c_new, obj_new
            if history is not None:
                history.append(obj)
            if delta <= tol * max(1.0, np.linalg.norm(c)):
                break
    return (c, history) if return_history else c


def _c_update(variant, z, mu_c, inner, tol, c0):
    if variant is Variant.TLLMC:
        return update_c_llmc(z)
    if variant is Variant.TSSC:
        return update_c_ssc(z, mu_c, inner=inner, tol=tol, c0=c0)
    return update_c_lrr(z, mu_c, inner=inner, tol=tol, c0=c0)


@dataclass
class TscModel:
    """Fitted state of the joint solver.

    ``transform`` is the ``d x d`` transform in linear mode and the ``n x n``
    kernel weight matrix in kernel mode. ``trace`` holds
    ``(iteration, objective / initial objective)`` pairs, starting at ``(0, 1.0)``.
    """

    transform: np.ndarray
    z: np.ndarray
    c: np.ndarray
    variant: Variant
    hp: Hyperparams
    trace: list = field(default_factory=list)
    kernel: KernelSpec | None = None
    objective: list = field(default_factory=list)
    converged: bool = False
    piecemeal: bool = False

    @property
    def n_iter(self):
        return len(self.trace) - 1


def _prepare(x, variant, hp, kernel):
    variant = Variant.parse(variant)
    hp = (hp or Hyperparams()).resolved(variant)
    x = as_data_matrix(x, min_samples=3)
    data = gram_matrix(x, kernel) if kernel is not None else x
    return data, variant, hp


def _init_state(data, hp, seed):
    rng = np.random.default_rng(seed)
    d, n = data.shape
    t = np.eye(d) + 1e-3 * rng.standard_normal((d, d))
    z = soft_threshold(t @ data, hp.mu / 2.0)
    return t, z, np.zeros((n, n))


def fit(x, variant="TSSC", hp=None, kernel=None, seed=0):
    """Jointly learn the transform, coefficients and self-expression matrix.

    Each outer iteration updates ``C`` (variant solver), then ``Z``
    (:func:`update_z`), then ``T`` (:func:`update_transform`), and records the
    normalized objective. The loop ends when the relative objective change is
    at most ``hp.tol_rel`` or after ``hp.max_outer_iters`` rounds.

    Parameters
    ----------
    x : array_like, shape (d, n)
        Samples as columns, ``n >= 3``.
    variant : Variant or str
    hp : Hyperparams, optional
    kernel : KernelSpec, optional
        If given, the ``n x n`` Gram matrix of ``x`` is used as the data.
    seed : int
        Seeds the transform initialization.

    Returns
    -------
    TscModel
    """
    data, variant, hp = _prepare(x, variant, hp, kernel)
    t, z, c = _init_state(data, hp, seed)
    # P3 is taken with the same weighting as the joint objective:
    # gamma * SE + mu_c * R  ~  SE + (mu_c / gamma) * R
    mu_c = hp.mu_c / hp.gamma if hp.gamma > 0 else hp.mu_c

    obj0 = joint_objective(t, data, z, c, hp, variant)
    objective = [obj0]
    trace = [(0, 1.0)]
    converged = False
    for it in range(1, hp.max_outer_iters + 1):
        c = _c_update(variant, z, mu_c, hp.inner_iters, hp.inner_tol, c)
        z = update_z(t, data, c, hp, z0=z)
        t = update_transform(data, z, hp.lam)
        obj = joint_objective(t, data, z, c, hp, variant)
        if not np.isfinite(obj):
            raise NumericalError(f"objective became non-finite at iteration {it}")
        trace.append((it, obj / obj0))
        prev = objective[-1]
        objective.append(obj)
        if abs(prev - obj) <= hp.tol_rel * abs(prev):
            converged = True
            break
    return TscModel(t, z, c, variant, hp, trace, kernel, objective, converged)


def fit_piecemeal(x, variant="TSSC", hp=None, seed=0, kernel=None):
    """Two-stage baseline: plain transform learning, then one C-update.

    Transform learning alternates ``Z = soft_threshold(TX, mu/2)`` and the
    closed-form transform update until the relative change of
    ``||TX - Z||^2 + lam (||T||^2 - log det T) + mu ||Z||_1`` is at most
    ``hp.tol_rel``. The variant's C-update then runs once on the frozen ``Z``
    from ``C = 0`` with a budget of ``inner_iters * max_outer_iters``
    iterations, matching the total the joint solver can spend on ``C``.
    """
    data, variant, hp = _prepare(x, variant, hp, kernel)
    t, z, _ = _init_state(data, hp, seed)

    def tl_objective(t, z):
        return transform_objective(t, data, z, hp.lam) + hp.mu * np.abs(z).sum()

    obj0 = tl_objective(t, z)
    objective = [obj0]
    trace = [(0, 1.0)]
    converged = False
    for it in range(1, hp.max_outer_iters + 1):
        z = soft_threshold(t @ data, hp.mu / 2.0)
        t = update_transform(data, z, hp.lam)
        obj = tl_objective(t, z)
        trace.append((it, obj / obj0))
        prev = objective[-1]
        objective.append(obj)
        if abs(prev - obj) <= hp.tol_rel * abs(prev):
            converged = True
            break
    budget = hp.inner_iters * hp.max_outer_iters
    c = _c_update(variant, z, hp.mu_c, budget, hp.inner_tol, None)
    return TscModel(t, z, c, variant, hp, trace, kernel, objective, converged, piecemeal=True)
