"""
Kernel mode
===========

Passing a kernel replaces X by its Gram matrix, so the transform acts on
n-dimensional kernel features. Even a linear kernel changes what the
transform sees (columns of X^T X instead of X), so partitions can differ
from the plain linear mode.
"""

from tsclust import KernelSpec, SyntheticSpec, evaluate, fit, generate_synthetic, make_affinity, normalized_cuts
from tsclust.metrics import ari, confusion

x, truth = generate_synthetic(SyntheticSpec(seed=3, noise_sigma=0.0))


def cluster(model):
    return normalized_cuts(make_affinity(model.c, "llmc"), 3, seed=0)


plain = cluster(fit(x, "TLLMC"))
for spec in (KernelSpec("linear"), KernelSpec("polynomial", degree=2), KernelSpec("gaussian")):
    model = fit(x, "TLLMC", kernel=spec)
    lab = cluster(model)
    print(f"{spec.family:10s} T is {model.transform.shape}, accuracy {evaluate(lab, truth).accuracy:.3f},"
          f" ARI vs linear mode {ari(confusion(lab, plain)):.3f}")
