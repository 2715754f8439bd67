"""End-to-end experiment: fit, affinity, normalized cuts, metrics, files on disk."""

import json
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .errors import ConfigError
from .io import load_dataset, save_labels, write_trace
from .kernels import KernelSpec
from .metrics import METRIC_NAMES, evaluate
from .solvers import fit, fit_piecemeal
from .spectral import kmeans, make_affinity, spectral_embedding
from .synthetic import SyntheticSpec, generate_synthetic
from .transform import Hyperparams, Variant

__all__ = ["ExperimentConfig", "ExperimentResult", "run_experiment", "cluster_model"]


@dataclass
class ExperimentConfig:
    """Everything needed to reproduce one clustering run.

    Exactly one of ``data`` (path to a CSV dataset) and ``synthetic`` must be
    set. ``k`` defaults to the number of distinct ground-truth labels.
    ``restarts`` is the number of times the k-means stage is repeated (metrics
    are averaged over repeats); ``n_init`` is the number of k-means++
    initializations inside each repeat.
    """

    data: str | None = None
    labels: str | None = None
    synthetic: SyntheticSpec | None = None
    variant: Variant = Variant.TSSC
    hp: Hyperparams = field(default_factory=Hyperparams)
    kernel: KernelSpec | None = None
    affinity: str = "abs"
    k: int | None = None
    seed: int = 0
    restarts: int = 10
    n_init: int = 10
    piecemeal: bool = False
    out_dir: str | None = None

    def __post_init__(self):
        self.variant = Variant.parse(self.variant)
        if (self.data is None) == (self.synthetic is None):
            raise ConfigError("set exactly one of a dataset path or a synthetic spec")
        if self.data is not None and not Path(self.data).is_file():
            raise ConfigError(f"dataset file not found: {self.data}")
        if self.labels is not None and not Path(self.labels).is_file():
            raise ConfigError(f"labels file not found: {self.labels}")
        if self.k is not None and self.k < 2:
            raise ConfigError(f"k must be at least 2, got {self.k}")
        if self.restarts < 1 or self.n_init < 1:
            raise ConfigError("restarts and n_init must be positive")
        if self.affinity not in ("abs", "llmc", "lrr"):
            raise ConfigError(f"unknown affinity rule {self.affinity!r}")

    def echo(self):
        """JSON-ready view of the resolved configuration."""
        return {
            "data": self.data,
            "labels": self.labels,
            "synthetic": self.synthetic.as_dict() if self.synthetic else None,
            "variant": self.variant.value,
            "hyperparams": self.hp.resolved(self.variant).as_dict(),
            "kernel": self.kernel.as_dict() if self.kernel else None,
            "affinity": self.affinity,
            "k": self.k,
            "seed": self.seed,
            "restarts": self.restarts,
            "n_init": self.n_init,
            "piecemeal": self.piecemeal,
        }


@dataclass
class ExperimentResult:
    labels: np.ndarray
    model: object
    affinity: np.ndarray
    per_repeat: list
    summary: dict | None
    degenerate: bool


def _repeat_seed(seed, r):
    return int(np.random.SeedSequence([seed, r]).generate_state(1)[0])


def cluster_model(model, k, affinity="abs", seed=0, restarts=10, n_init=10):
    """Cluster a fitted model ``restarts`` times with independent k-means seeds.

    The spectral embedding is computed once; only the k-means stage repeats.

    Returns
    -------
    affinity : ndarray
    labelings : list of Labeling
    """
    a = make_affinity(model.c, affinity)
    emb, tie = spectral_embedding(a, k)
    out = []
    for r in range(restarts):
        lab = kmeans(emb, k, seed=_repeat_seed(seed, r), restarts=n_init)
        lab.degenerate = lab.degenerate or tie
        out.append(lab)
    return a, out


def _load(cfg):
    if cfg.synthetic is not None:
        return generate_synthetic(cfg.synthetic)
    return load_dataset(cfg.data, cfg.labels)


def run_experiment(cfg, write=True):
    """Run the full pipeline and, if ``cfg.out_dir`` is set, write its artifacts.

    Files written to ``cfg.out_dir``:

    ``labels.txt``
        Labels of the repeat with the lowest k-means inertia.
    ``metrics.json``
        ``{metric: {"mean", "std"}}`` over repeats (omitted without ground
        truth) plus ``config_echo``.
    ``trace.csv``
        Normalized objective per outer iteration.
    """
    x, truth = _load(cfg)
    k = cfg.k
    if k is None:
        if truth is None:
            raise ConfigError("k is required when the dataset has no labels")
        k = int(np.unique(truth).size)
        if k < 2:
            raise ConfigError("ground truth has a single class; set k explicitly")

    if cfg.piecemeal:
        model = fit_piecemeal(x, cfg.variant, cfg.hp, seed=cfg.seed, kernel=cfg.kernel)
    else:
        model = fit(x, cfg.variant, cfg.hp, kernel=cfg.kernel, seed=cfg.seed)
    a, labelings = cluster_model(model, k, cfg.affinity, cfg.seed, cfg.restarts, cfg.n_init)

    best = min(range(len(labelings)), key=lambda i: labelings[i].inertia)
    per_repeat = []
    summary = None
    if truth is not None:
        per_repeat = [evaluate(lab, truth).as_dict() for lab in labelings]
        summary = {}
        for name in METRIC_NAMES:
            vals = np.array([m[name] for m in per_repeat])
            summary[name] = {"mean": float(vals.mean()), "std": float(vals.std())}
    result = ExperimentResult(
        labels=labelings[best].labels,
        model=model,
        affinity=a,
        per_repeat=per_repeat,
        summary=summary,
        degenerate=any(lab.degenerate for lab in labelings),
    )

    if write and cfg.out_dir is not None:
        out = Path(cfg.out_dir)
        out.mkdir(parents=True, exist_ok=True)
        save_labels(out / "labels.txt", result.labels)
        write_trace(out / "trace.csv", model.trace)
        doc = dict(summary) if summary is not None else {}
        echo = cfg.echo()
        echo["k"] = k
        doc["config_echo"] = echo
        doc["degenerate"] = result.degenerate
        with open(out / "metrics.json", "w", encoding="utf-8") as fh:
            json.dump(doc, fh, indent=2, sort_keys=True)
            fh.write("\n")
    return result
