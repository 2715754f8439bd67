"""Affinities from self-expression coefficients and normalized-cuts segmentation."""

from dataclasses import dataclass

import numpy as np

from .errors import ConfigError, DataError, NumericalError

__all__ = [
    "Labeling",
    "affinity_abs",
    "affinity_llmc",
    "affinity_lrr",
    "make_affinity",
    "spectral_embedding",
    "normalized_cuts",
    "kmeans",
    "kmeans_plusplus",
]


@dataclass
class Labeling:
    """Cluster assignment of ``n`` samples into ``k`` groups.

    ``degenerate`` is set when the result is not trustworthy: a cluster stayed
    empty after re-seeding, or the spectral embedding was ambiguous because
    eigenvalues ``k`` and ``k + 1`` tie.
    """

    labels: np.ndarray
    k: int
    degenerate: bool = False
    inertia: float | None = None

    def __len__(self):
        return len(self.labels)


def _as_square(c):
    c = np.asarray(c, dtype=np.float64)
    if c.ndim != 2 or c.shape[0] != c.shape[1]:
        raise DataError(f"expected a square matrix, got shape {c.shape}")
    if not np.all(np.isfinite(c)):
        raise DataError("coefficient matrix contains non-finite entries")
    return c


def affinity_abs(c):
    """``A = |C| + |C^T|``."""
    c = _as_square(c)
    a = np.abs(c)
    return a + a.T


def affinity_llmc(c):
    """``A = C + C^T - C^T C``, symmetrized and clamped at zero."""
    c = _as_square(c)
    a = c + c.T - c.T @ c
    a = 0.5 * (a + a.T)
    return np.maximum(a, 0.0)


def affinity_lrr(c, rank_tol=1e-10):
    """Shape-interaction affinity from the SVD of ``C``.

    With ``C = U S V^T`` restricted to singular values above
    ``rank_tol * s_max``, ``M = U S^{1/2}`` has its rows normalized and
    ``A = (M M^T) ** 2`` elementwise.
    """
    c = _as_square(c)
    u, s, _ = np.linalg.svd(c)
    if s.size == 0 or s[0] == 0:
        return np.zeros_like(c)
    r = int(np.sum(s > rank_tol * s[0]))
    m = u[:, :r] * np.sqrt(s[:r])
    norms = np.linalg.norm(m, axis=1, keepdims=True)
    m = np.divide(m, norms, out=np.zeros_like(m), where=norms > 0)
    g = m @ m.T
    a = g * g
    return 0.5 * (a + a.T)


_RULES = {"abs": affinity_abs, "llmc": affinity_llmc, "lrr": affinity_lrr}


def make_affinity(c, rule="abs"):
    try:
        fn = _RULES[rule]
    except KeyError:
        raise ConfigError(f"unknown affinity rule {rule!r}; expected one of {sorted(_RULES)}") from None
    return fn(c)


def _fix_signs(vecs):
    # first nonzero component of each eigenvector made positive
    for j in range(vecs.shape[1]):
        col = vecs[:, j]
        nz = np.flatnonzero(np.abs(col) > 1e-12)
        if nz.size and col[nz[0]] < 0:
            vecs[:, j] = -col
    return vecs


def spectral_embedding(a, k, tie_tol=1e-10):
    """Row-normalized eigenvectors of the symmetric normalized Laplacian.

    Returns
    -------
    embedding : ndarray, shape (n, k)
    tie : bool
        True when eigenvalues ``k`` and ``k + 1`` coincide within ``tie_tol``.
    """
    a = _as_square(a)
    n = a.shape[0]
    if not 1 <= k <= n:
        raise ConfigError(f"need 1 <= k <= n, got k={k}, n={n}")
    if np.any(a < 0):
        raise DataError("affinity has negative entries")
    a = 0.5 * (a + a.T)
    deg = a.sum(axis=1)
    inv_sqrt = np.zeros(n)
    pos = deg > 0
    inv_sqrt[pos] = 1.0 / np.sqrt(deg[pos])
    lap = np.eye(n) - inv_sqrt[:, None] * a * inv_sqrt[None, :]
    try:
        vals, vecs = np.linalg.eigh(lap)
    except np.linalg.LinAlgError as exc:
        raise NumericalError(f"eigensolver failed: {exc}") from exc
    tie = k < n and abs(vals[k] - vals[k - 1]) <= tie_tol
    emb = _fix_signs(vecs[:, :k].copy())
    norms = np.linalg.norm(emb, axis=1, keepdims=True)
    emb = np.divide(emb, norms, out=np.zeros_like(emb), where=norms > 0)
    return emb, bool(tie)


def normalized_cuts(a, k, seed=0, restarts=10):
    """Normalized-cuts spectral clustering with a k-means back-end.

    Parameters
    ----------
    a : ndarray, shape (n, n)
        Symmetric nonnegative affinity.
    k : int
        Number of clusters, ``2 <= k <= n``.
    seed : int
    restarts : int
        k-means restarts; the lowest-inertia run is kept.
    """
    if k < 2:
        raise ConfigError(f"k must be at least 2, got {k}")
    emb, tie = spectral_embedding(a, k)
    lab = kmeans(emb, k, seed=seed, restarts=restarts)
    lab.degenerate = lab.degenerate or tie
    return lab


def kmeans_plusplus(points, k, rng):
    """k-means++ seeding; returns the indices of the chosen centers."""
    n = points.shape[0]
    first = int(rng.integers(n))
    chosen = [first]
    d2 = np.sum((points - points[first]) ** 2, axis=1)
    for _ in range(1, k):
        total = d2.sum()
        if total <= 0:
            # all remaining points coincide with a center
            rest = np.setdiff1d(np.arange(n), chosen)
            nxt = int(rng.choice(rest))
        else:
            nxt = int(rng.choice(n, p=d2 / total))
        chosen.append(nxt)
        d2 = np.minimum(d2, np.sum((points - points[nxt]) ** 2, axis=1))
    return np.array(chosen)


def _sq_dists(points, centers):
    d = (
        np.sum(points**2, axis=1)[:, None]
        - 2.0 * points @ centers.T
        + np.sum(centers**2, axis=1)[None, :]
    )
    return np.maximum(d, 0.0)


def _lloyd(points, k, rng, max_iter, history):
    centers = points[kmeans_plusplus(points, k, rng)].copy()
    labels = None
    degenerate = False
    reseeds = 0
    for _ in range(max_iter):
        d = _sq_dists(points, centers)
        new = np.argmin(d, axis=1)
        counts = np.bincount(new, minlength=k)
        empty = np.flatnonzero(counts == 0)
        if empty.size:
            if reseeds >= 3:
                degenerate = True
            else:
                reseeds += 1
                own = d[np.arange(len(points)), new]
                for j in empty:
                    far = int(np.argmax(own))
                    centers[j] = points[far]
                    own[far] = -1.0
                continue
        if history is not None:
            history.append(float(d[np.arange(len(points)), new].sum()))
        if labels is not None and np.array_equal(new, labels):
            break
        labels = new
        for j in range(k):
            members = points[labels == j]
            if len(members):
                centers[j] = members.mean(axis=0)
    if labels is None:
        labels = np.argmin(_sq_dists(points, centers), axis=1)
    inertia = float(np.sum((points - centers[labels]) ** 2))
    if np.any(np.bincount(labels, minlength=k) == 0):
        degenerate = True
    return labels, inertia, degenerate


def kmeans(points, k, seed=0, restarts=10, max_iter=300, history=None):
    """Lloyd's k-means with k-means++ seeding and seeded restarts.

    Restart ``r`` draws from ``np.random.default_rng([seed, r])``, so results do
    not depend on the order restarts are evaluated in. The restart with the
    smallest within-cluster sum of squares wins (first one on ties).

    ``history``, if a list, receives one list of per-iteration inertias for
    each restart.
    """
    points = np.asarray(points, dtype=np.float64)
    if points.ndim == 1:
        points = points[:, None]
    n = points.shape[0]
    if not 1 <= k <= n:
        raise ConfigError(f"need 1 <= k <= n, got k={k}, n={n}")
    if restarts < 1:
        raise ConfigError(f"restarts must be positive, got {restarts}")
    best = None
    for r in range(restarts):
        rng = np.random.default_rng([seed, r])
        h = [] if history is not None else None
        labels, inertia, degenerate = _lloyd(points, k, rng, max_iter, h)
        if history is not None:
            history.append(h)
        if best is None or inertia < best[1]:
            best = (labels, inertia, degenerate)
    labels, inertia, degenerate = best
    return Labeling(labels.astype(np.int64), k, degenerate, inertia)
