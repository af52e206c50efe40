"""
Finding a change in a sequence of graphs
========================================

Twelve graphs observed in time order. The first six share one node
labeling of the graphon, the last six another. Chain weights only fuse
neighbours in time, so every cluster on the path is a contiguous segment
and the two-cluster cut is a changepoint estimate.
"""

import numpy as np

from netclust import (build_dendrogram, chain_weights, compute_path, cut_at_k,
                      make_changepoint_dataset, rbf_weights)

for seed in range(3):
    ds = make_changepoint_dataset(p=25, T=12, change_after=6, seed=seed)
    path = compute_path(ds.tensor, chain_weights(12), q=1)
    labels = cut_at_k(path, 2).assignment.labels
    change = int(np.flatnonzero(np.diff(labels))[0]) + 1
    print(f"seed {seed}: segments {labels}, change after graph {change}")

###############################################################################
# The same data with kernel weights over all pairs loses the time ordering;
# the top split is still the change but segments need not be contiguous
# further down the tree.

x = ds.tensor
tree = build_dendrogram(compute_path(x, rbf_weights(x), q=1))
print("kernel weights, last merge:", tree.final_split())
