"""Gram matrices for the kernelized solver.

In kernel mode the ``n x n`` Gram matrix replaces the data matrix, so the
learned transform becomes an ``n x n`` weight matrix.
"""

from dataclasses import dataclass

import numpy as np
from scipy.spatial.distance import cdist, pdist

from .errors import ConfigError, DataError
from .transform import as_data_matrix

__all__ = ["KernelSpec", "gram_matrix", "median_bandwidth"]

FAMILIES = ("linear", "polynomial", "gaussian", "laplacian")


@dataclass(frozen=True)
class KernelSpec:
    """Kernel family and its parameters.

    ``bandwidth="auto"`` resolves to the median pairwise distance (Euclidean
    for the Gaussian kernel, l1 for the Laplacian kernel).
    """

    family: str = "gaussian"
    degree: int = 2
    offset: float = 1.0
    bandwidth: float | str = "auto"

    def __post_init__(self):
        fam = str(self.family).lower()
        if fam == "rbf":
            fam = "gaussian"
        if fam not in FAMILIES:
            raise ConfigError(f"unknown kernel family {self.family!r}; expected one of {FAMILIES}")
        object.__setattr__(self, "family", fam)
        if int(self.degree) != self.degree or self.degree < 1:
            raise ConfigError(f"polynomial degree must be a positive integer, got {self.degree}")
        bw = self.bandwidth
        if isinstance(bw, str):
            if bw.lower() != "auto":
                try:
                    bw = float(bw)
                except ValueError:
                    raise ConfigError(f"bandwidth must be positive or 'auto', got {bw!r}") from None
            else:
                bw = "auto"
        if bw != "auto" and not (np.isfinite(bw) and bw > 0):
            raise ConfigError(f"bandwidth must be positive, got {bw}")
        object.__setattr__(self, "bandwidth", bw)

    def as_dict(self):
        return {
            "family": self.family,
            "degree": self.degree,
            "offset": self.offset,
            "bandwidth": self.bandwidth,
        }


def median_bandwidth(x, metric="euclidean"):
    """Median of pairwise distances between the columns of ``x`` (over i < j)."""
    dist = pdist(np.asarray(x, dtype=np.float64).T, metric=metric)
    sigma = float(np.median(dist))
    if not sigma > 0:
        raise DataError("median pairwise distance is zero; cannot pick a bandwidth")
    return sigma


def gram_matrix(x, spec):
    """Kernel Gram matrix ``K[i, j] = k(x_i, x_j)`` over the columns of ``x``.

    Parameters
    ----------
    x : ndarray, shape (d, n)
    spec : KernelSpec

    Returns
    -------
    ndarray, shape (n, n)
        Exactly symmetric.
    """
    x = as_data_matrix(x)
    fam = spec.family
    if fam in ("linear", "polynomial"):
        k = x.T @ x
        if fam == "polynomial":
            k = (k + spec.offset) ** spec.degree
    else:
        metric = "sqeuclidean" if fam == "gaussian" else "cityblock"
        dist = cdist(x.T, x.T, metric=metric)
        if spec.bandwidth == "auto":
            sigma = median_bandwidth(x, "euclidean" if fam == "gaussian" else "cityblock")
        else:
            sigma = float(spec.bandwidth)
        if fam == "gaussian":
            k = np.exp(-dist / (2.0 * sigma**2))
        else:
            k = np.exp(-dist / sigma)
    return 0.5 * (k + k.T)
