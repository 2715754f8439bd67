"""Union-of-subspaces benchmark data."""

from dataclasses import asdict, dataclass

import numpy as np

from .errors import ConfigError

__all__ = ["SyntheticSpec", "generate_synthetic"]


@dataclass(frozen=True)
class SyntheticSpec:
    """Parameters of a union of ``k_subspaces`` random linear subspaces.

    The defaults are the desk-scale benchmark used throughout the tests:
    three 3-dimensional subspaces of R^30 with 20 points each.
    """

    k_subspaces: int = 3
    ambient_dim: int = 30
    subspace_dim: int = 3
    points_per_subspace: int = 20
    noise_sigma: float = 0.01
    seed: int = 7

    def __post_init__(self):
        if self.k_subspaces < 1 or self.points_per_subspace < 1:
            raise ConfigError("k_subspaces and points_per_subspace must be positive")
        if self.subspace_dim < 1:
            raise ConfigError(f"subspace_dim must be >= 1, got {self.subspace_dim}")
        if self.subspace_dim >= self.ambient_dim:
            raise ConfigError(
                f"subspace_dim ({self.subspace_dim}) must be below ambient_dim ({self.ambient_dim})"
            )
        if self.k_subspaces * self.points_per_subspace < 3:
            raise ConfigError("need at least 3 points in total")
        if not self.noise_sigma >= 0:
            raise ConfigError(f"noise_sigma must be nonnegative, got {self.noise_sigma}")

    def as_dict(self):
        return asdict(self)


def generate_synthetic(spec=None, return_bases=False):
    """Sample unit-norm points from a union of random subspaces.

    Each subspace gets an orthonormal basis from the QR factorization of a
    Gaussian ``d x s`` matrix; points are ``basis @ N(0, I_s)`` plus
    ``N(0, noise_sigma^2)`` ambient noise, then scaled to unit l2 norm.

    Returns
    -------
    x : ndarray, shape (ambient_dim, k_subspaces * points_per_subspace)
    labels : ndarray of int
        Index of the generating subspace for every column.
    bases : list of ndarray
        Only when ``return_bases`` is true.
    """
    spec = spec or SyntheticSpec()
    rng = np.random.default_rng(spec.seed)
    d, s, m = spec.ambient_dim, spec.subspace_dim, spec.points_per_subspace
    blocks, labels, bases = [], [], []
    for j in range(spec.k_subspaces):
        q, _ = np.linalg.qr(rng.standard_normal((d, s)))
        pts = q @ rng.standard_normal((s, m))
        blocks.append(pts)
        labels.append(np.full(m, j, dtype=np.int64))
        bases.append(q)
    x = np.hstack(blocks)
    if spec.noise_sigma > 0:
        x = x + spec.noise_sigma * rng.standard_normal(x.shape)
    x = x / np.linalg.norm(x, axis=0, keepdims=True)
    labels = np.concatenate(labels)
    if return_bases:
        return x, labels, bases
    return x, labels
