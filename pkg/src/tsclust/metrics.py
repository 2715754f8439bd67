"""External clustering metrics computed from a cluster/class contingency table."""

from dataclasses import asdict, dataclass

import numpy as np
from scipy.optimize import linear_sum_assignment

from .errors import DataError

__all__ = [
    "ConfusionTable",
    "MetricsReport",
    "confusion",
    "purity",
    "entropy",
    "accuracy",
    "nmi",
    "pair_counts",
    "ari",
    "precision",
    "recall",
    "f_measure",
    "evaluate",
    "METRIC_NAMES",
]

METRIC_NAMES = ("accuracy", "nmi", "ari", "precision", "f_measure", "purity", "entropy")


@dataclass(frozen=True)
class ConfusionTable:
    """``counts[k, l]`` = number of samples in cluster ``k`` with true class ``l``."""

    counts: np.ndarray

    @property
    def n(self):
        return int(self.counts.sum())

    @property
    def r(self):
        return self.counts.shape[0]

    @property
    def q(self):
        return self.counts.shape[1]


@dataclass(frozen=True)
class MetricsReport:
    accuracy: float
    nmi: float
    ari: float
    precision: float
    f_measure: float
    purity: float
    entropy: float

    def as_dict(self):
        return asdict(self)


def _labels(v):
    if hasattr(v, "labels"):
        v = v.labels
    return np.asarray(v).ravel()


def confusion(pred, truth):
    """Contingency table of predicted clusters (rows) against true classes (columns).

    Accepts plain label arrays or :class:`~tsclust.spectral.Labeling` objects.
    Label values are compressed to the ones actually present.
    """
    p = _labels(pred)
    t = _labels(truth)
    if p.shape != t.shape:
        raise DataError(f"label vectors differ in length: {p.size} vs {t.size}")
    _, pi = np.unique(p, return_inverse=True)
    _, ti = np.unique(t, return_inverse=True)
    counts = np.zeros((pi.max(initial=-1) + 1, ti.max(initial=-1) + 1), dtype=np.int64)
    np.add.at(counts, (pi, ti), 1)
    return ConfusionTable(counts)


def _table(ct):
    counts = ct.counts if isinstance(ct, ConfusionTable) else np.asarray(ct)
    if counts.sum() <= 0:
        raise DataError("empty contingency table")
    return counts


def purity(ct):
    counts = _table(ct)
    return float(counts.max(axis=1).sum() / counts.sum())


def entropy(ct):
    """Class entropy within clusters, normalized by ``log2 q``.

    ``-(1 / (n log2 q)) sum_k sum_l n_kl log2(n_kl / n_k)``; 0 for class-pure
    clusters, 1 when every cluster is uniform over the classes.
    """
    counts = _table(ct).astype(np.float64)
    q = counts.shape[1]
    if q < 2:
        raise DataError("entropy needs at least two classes")
    n = counts.sum()
    rows = counts.sum(axis=1, keepdims=True)
    with np.errstate(divide="ignore", invalid="ignore"):
        terms = np.where(counts > 0, counts * np.log2(counts / rows), 0.0)
    return float(max(0.0, -terms.sum() / (n * np.log2(q))))


def accuracy(ct):
    """Best one-to-one cluster/class matching (Hungarian algorithm)."""
    counts = _table(ct)
    rows, cols = linear_sum_assignment(counts, maximize=True)
    return float(counts[rows, cols].sum() / counts.sum())


def _h(p):
    p = p[p > 0]
    return float(-(p * np.log(p)).sum())


def nmi(ct):
    """Mutual information over the geometric mean of the marginal entropies."""
    counts = _table(ct).astype(np.float64)
    n = counts.sum()
    pk = counts.sum(axis=1) / n
    pl = counts.sum(axis=0) / n
    hk, hl = _h(pk), _h(pl)
    if hk == 0.0 and hl == 0.0:
        return 1.0
    if hk == 0.0 or hl == 0.0:
        return 0.0
    pkl = counts / n
    nz = pkl > 0
    mi = float((pkl[nz] * np.log(pkl[nz] / np.outer(pk, pl)[nz])).sum())
    return float(min(1.0, max(0.0, mi / np.sqrt(hk * hl))))


def _comb2(v):
    v = np.asarray(v, dtype=np.int64)
    return int((v * (v - 1) // 2).sum())


def pair_counts(ct):
    """Pair-counting confusion ``(tp, fp, fn, tn)`` over all sample pairs.

    ``tp`` counts pairs sharing both cluster and class, ``fp`` pairs sharing the
    cluster only and ``fn`` pairs sharing the class only.
    """
    counts = _table(ct)
    n = int(counts.sum())
    if n < 2:
        raise DataError("pair counting needs at least two samples")
    tp = _comb2(counts)
    same_cluster = _comb2(counts.sum(axis=1))
    same_class = _comb2(counts.sum(axis=0))
    total = n * (n - 1) // 2
    fp = same_cluster - tp
    fn = same_class - tp
    tn = total - tp - fp - fn
    return tp, fp, fn, tn


def ari(ct):
    """Adjusted Rand index (Hubert and Arabie)."""
    tp, fp, fn, tn = pair_counts(ct)
    total = tp + fp + fn + tn
    same_cluster = tp + fp
    same_class = tp + fn
    expected = same_cluster * same_class / total
    max_index = 0.5 * (same_cluster + same_class)
    if max_index == expected:
        # both partitions trivial (all singletons or one block each)
        return 1.0 if fp == 0 and fn == 0 else 0.0
    return float((tp - expected) / (max_index - expected))


def precision(ct):
    tp, fp, _, _ = pair_counts(ct)
    return tp / (tp + fp) if tp + fp else 0.0


def recall(ct):
    tp, _, fn, _ = pair_counts(ct)
    return tp / (tp + fn) if tp + fn else 0.0


def f_measure(ct):
    p, r = precision(ct), recall(ct)
    return 2.0 * p * r / (p + r) if p + r else 0.0


def evaluate(pred, truth):
    """All metrics for one labeling against the ground truth.

    Entropy is reported as 0 when the ground truth has a single class.
    """
    ct = confusion(pred, truth)
    return MetricsReport(
        accuracy=accuracy(ct),
        nmi=nmi(ct),
        ari=ari(ct),
        precision=float(precision(ct)),
        f_measure=float(f_measure(ct)),
        purity=purity(ct),
        entropy=entropy(ct) if ct.q >= 2 else 0.0,
    )
