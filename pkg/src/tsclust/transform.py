"""Transform-learning primitives.

Data are stored column-major: ``x`` has shape ``(d, n)`` with one sample per
column. The transform ``t`` is square ``(d, d)`` and the coefficients
``z = t @ x`` (approximately) have the same shape as ``x``.
"""

from dataclasses import dataclass, replace
from enum import Enum

import numpy as np
from scipy import linalg

from .errors import ConfigError, DataError, NumericalError

__all__ = [
    "Variant",
    "Hyperparams",
    "as_data_matrix",
    "soft_threshold",
    "transform_objective",
    "transform_gradient",
    "update_transform",
    "z_objective",
    "update_z",
    "joint_objective",
    "objective_terms",
]


class Variant(str, Enum):
    """Self-expression regularizer used for the subspace coefficients."""

    TLLMC = "TLLMC"
    TSSC = "TSSC"
    TLRR = "TLRR"

    @classmethod
    def parse(cls, value):
        if isinstance(value, cls):
            return value
        try:
            return cls(str(value).upper())
        except ValueError:
            names = ", ".join(v.value for v in cls)
            raise ConfigError(f"unknown variant {value!r}; expected one of {names}") from None


# mu_c used when the caller leaves it unset
DEFAULT_MU_C = {Variant.TLLMC: 0.0, Variant.TSSC: 0.1, Variant.TLRR: 0.01}


@dataclass(frozen=True)
class Hyperparams:
    """Weights and stopping rules for the joint solver.

    Parameters
    ----------
    lam : float
        Weight of the ``||T||_F^2 - log det T`` transform regularizer. Must be > 0.
    mu : float
        l1 weight on the coefficients ``Z``.
    gamma : float
        Weight of the self-expression coupling ``sum_i ||z_i - Z c_i||^2``.
    mu_c : float or None
        Weight of the regularizer on ``C`` (l1 for TSSC, nuclear norm for TLRR).
        ``None`` picks the variant default through :meth:`resolved`.
    max_outer_iters, tol_rel :
        Outer loop stops after ``max_outer_iters`` rounds or once the relative
        objective change drops to ``tol_rel``.
    inner_iters, inner_tol :
        Iteration cap and relative-step tolerance of the inner proximal solvers.
    """

    lam: float = 0.1
    mu: float = 0.1
    gamma: float = 1.0
    mu_c: float | None = None
    max_outer_iters: int = 50
    tol_rel: float = 1e-4
    inner_iters: int = 100
    inner_tol: float = 1e-6

    def __post_init__(self):
        if not (np.isfinite(self.lam) and self.lam > 0):
            raise ConfigError(f"lam must be positive, got {self.lam}")
        for name in ("mu", "gamma"):
            v = getattr(self, name)
            if not (np.isfinite(v) and v >= 0):
                raise ConfigError(f"{name} must be nonnegative, got {v}")
        if self.mu_c is not None and not (self.mu_c >= 0):
            raise ConfigError(f"mu_c must be nonnegative, got {self.mu_c}")
        for name in ("max_outer_iters", "inner_iters"):
            v = getattr(self, name)
            if int(v) != v or v < 1:
                raise ConfigError(f"{name} must be a positive integer, got {v}")
        for name in ("tol_rel", "inner_tol"):
            v = getattr(self, name)
            if not v > 0:
                raise ConfigError(f"{name} must be positive, got {v}")

    def resolved(self, variant):
        """Return a copy with ``mu_c`` filled in from the variant default."""
        if self.mu_c is not None:
            return self
        return replace(self, mu_c=DEFAULT_MU_C[Variant.parse(variant)])

    def as_dict(self):
        return {
            "lam": self.lam,
            "mu": self.mu,
            "gamma": self.gamma,
            "mu_c": self.mu_c,
            "max_outer_iters": self.max_outer_iters,
            "tol_rel": self.tol_rel,
            "inner_iters": self.inner_iters,
            "inner_tol": self.inner_tol,
        }


def as_data_matrix(x, min_samples=2):
    """Validate a ``(d, n)`` sample matrix and return it as float64."""
    x = np.asarray(x, dtype=np.float64)
    if x.ndim != 2:
        raise DataError(f"data matrix must be 2-D (features x samples), got shape {x.shape}")
    d, n = x.shape
    if d < 1 or n < min_samples:
        raise DataError(f"need d >= 1 and n >= {min_samples}, got d={d}, n={n}")
    if not np.all(np.isfinite(x)):
        raise DataError("data matrix contains non-finite entries")
    return x


def soft_threshold(m, tau):
    """Elementwise soft thresholding ``sign(m) * max(|m| - tau, 0)``."""
    m = np.asarray(m, dtype=np.float64)
    if tau < 0:
        raise ConfigError(f"threshold must be nonnegative, got {tau}")
    if not np.all(np.isfinite(m)):
        raise DataError("soft_threshold input contains non-finite entries")
    return np.sign(m) * np.maximum(np.abs(m) - tau, 0.0)


def _logdet_positive(t):
    sign, logdet = np.linalg.slogdet(t)
    if sign <= 0:
        raise NumericalError("transform has nonpositive determinant; log det undefined")
    return logdet


def transform_objective(t, x, z, lam):
    """``||TX - Z||_F^2 + lam * (||T||_F^2 - log det T)``."""
    r = t @ x - z
    return float(np.sum(r * r) + lam * (np.sum(t * t) - _logdet_positive(t)))


def transform_gradient(t, x, z, lam):
    """Gradient of :func:`transform_objective` with respect to ``T``."""
    return 2.0 * (t @ x - z) @ x.T + 2.0 * lam * t - lam * np.linalg.inv(t).T


def update_transform(x, z, lam):
    """Closed-form minimizer of the transform subproblem.

    With ``X X^T + lam I = L L^T`` and ``L^{-1} X Z^T = U S V^T``, the minimizer
    is ``T = 0.5 V (S + (S^2 + 2 lam I)^{1/2}) U^T L^{-1}``.

    When ``det(V U^T) < 0`` that matrix would have a negative determinant, so the
    entry belonging to the smallest singular value takes the other root
    ``0.5 (s - sqrt(s^2 + 2 lam))``. It is still a stationary point and keeps
    ``det T > 0``.
    """
    x = np.asarray(x, dtype=np.float64)
    z = np.asarray(z, dtype=np.float64)
    if x.shape[1] != z.shape[1]:
        raise DataError(f"x and z must have equal column counts, got {x.shape} and {z.shape}")
    if z.shape[0] != x.shape[0]:
        raise DataError(f"square transform needs z with {x.shape[0]} rows, got {z.shape[0]}")
    if not lam > 0:
        raise ConfigError(f"lam must be positive, got {lam}")
    d = x.shape[0]
    try:
        chol = linalg.cholesky(x @ x.T + lam * np.eye(d), lower=True)
        b = linalg.solve_triangular(chol, x @ z.T, lower=True)
        u, s, vt = linalg.svd(b)
    except (linalg.LinAlgError, ValueError) as exc:
        raise NumericalError(f"transform update failed: {exc}") from exc
    root = np.sqrt(s * s + 2.0 * lam)
    diag = 0.5 * (s + root)
    if np.linalg.det(vt.T @ u.T) < 0:
        diag[-1] = 0.5 * (s[-1] - root[-1])
    w = (vt.T * diag) @ u.T
    # T = W L^{-1}  <=>  L^T T^T = W^T
    t = linalg.solve_triangular(chol, w.T, lower=True, trans="T").T
    return t


def _zero_diag(c):
    c = np.array(c, dtype=np.float64, copy=True)
    np.fill_diagonal(c, 0.0)
    return c


def z_objective(t, x, z, c, mu, gamma):
    """Objective of the coefficient subproblem.

    ``||TX - Z||_F^2 + mu ||Z||_1 + gamma ||Z - Z C||_F^2`` with ``diag(C) = 0``.
    """
    c = _zero_diag(c)
    r = t @ x - z
    e = z - z @ c
    return float(np.sum(r * r) + mu * np.abs(z).sum() + gamma * np.sum(e * e))


def update_z(t, x, c, hp, z0=None):
    """Coefficient update with the self-expression coupling.

    Solves ``min_Z ||TX - Z||^2 + mu ||Z||_1 + gamma ||Z (I - C)||^2`` by ISTA,
    warm-started from ``z0`` (``soft_threshold(TX, mu/2)`` if omitted). The step
    is the inverse Lipschitz constant ``1 / (2 (1 + gamma ||I - C||_2^2))``, so the
    objective never increases. For ``gamma == 0`` the exact proximal solution
    ``soft_threshold(TX, mu/2)`` is returned directly.
    """
    tx = np.asarray(t, dtype=np.float64) @ np.asarray(x, dtype=np.float64)
    if not np.all(np.isfinite(tx)):
        raise NumericalError("T X contains non-finite entries")
    n = tx.shape[1]
    c = np.asarray(c, dtype=np.float64)
    if c.shape != (n, n):
        raise DataError(f"C must be {n}x{n}, got {c.shape}")
    mu, gamma = hp.mu, hp.gamma
    if gamma == 0:
        return soft_threshold(tx, mu / 2.0)

    m = np.eye(n) - _zero_diag(c)
    try:
        spec_norm = np.linalg.norm(m, 2)
    except np.linalg.LinAlgError as exc:
        raise NumericalError(f"step-size computation failed: {exc}") from exc
    if not np.isfinite(spec_norm):
        raise NumericalError("step-size computation failed: non-finite operator norm")
    step = 0.5 / (1.0 + gamma * spec_norm**2)
    g = m @ m.T

    z = soft_threshold(tx, mu / 2.0) if z0 is None else np.array(z0, dtype=np.float64)
    for _ in range(hp.inner_iters):
        grad = 2.0 * (z - tx) + 2.0 * gamma * (z @ g)
        z_new = soft_threshold(z - step * grad, step * mu)
        delta = np.linalg.norm(z_new - z)
        z = z_new
        if delta <= hp.inner_tol * max(1.0, np.linalg.norm(z)):
            break
    return z


def objective_terms(t, x, z, c, hp, variant):
    """Individual terms of the joint objective as a dict.

    Keys: ``fidelity``, ``transform``, ``sparsity``, ``self_expression`` and
    ``regularizer``; :func:`joint_objective` is their sum.
    """
    variant = Variant.parse(variant)
    hp = hp.resolved(variant)
    c = _zero_diag(c)
    r = t @ x - z
    e = z - z @ c
    if variant is Variant.TLLMC:
        reg = 0.0
    elif variant is Variant.TSSC:
        reg = hp.mu_c * np.abs(c).sum()
    else:
        reg = hp.mu_c * np.linalg.svd(c, compute_uv=False).sum()
    return {
        "fidelity": float(np.sum(r * r)),
        "transform": float(hp.lam * (np.sum(t * t) - _logdet_positive(t))),
        "sparsity": float(hp.mu * np.abs(z).sum()),
        "self_expression": float(hp.gamma * np.sum(e * e)),
        "regularizer": float(reg),
    }


def joint_objective(t, x, z, c, hp, variant):
    """Value of the full transformed-subspace-clustering objective.

    ``||TX - Z||^2 + lam (||T||^2 - log det T) + mu ||Z||_1
    + gamma sum_i ||z_i - Z c_i||^2 + R(C)`` where ``R`` is 0 (TLLMC),
    ``mu_c ||C||_1`` (TSSC) or ``mu_c ||C||_*`` (TLRR). The diagonal of ``C`` is
    ignored so no sample represents itself.

    Raises
    ------
    NumericalError
        If ``det T <= 0``.
    """
    return sum(objective_terms(t, x, z, c, hp, variant).values())
