"""
Scoring a clustering
====================

All metrics are computed from one confusion table between predicted
clusters and ground-truth classes.
"""

import numpy as np

from tsclust import confusion, evaluate

truth = np.array([0, 0, 0, 0, 1, 1, 1, 1])
pred = np.array([2, 2, 2, 0, 0, 0, 0, 0])

print(confusion(pred, truth).counts)
for name, value in evaluate(pred, truth).as_dict().items():
    print(f"{name:10s} {value:.4f}")

# relabeling predicted clusters changes nothing
print(evaluate(np.where(pred == 2, 7, 3), truth).accuracy)
