"""
The clustering path and its dendrogram
======================================

Twenty graphs on 25 nodes: ten draws from the graphon
W(x, y) = 1 - max(x, y), and ten more whose nodes were relabeled by one
fixed permutation. Raising the penalty from almost nothing to full fusion
traces a tree over the graphs; its top split should be the two groups.
"""

import numpy as np
from scipy.cluster.hierarchy import dendrogram

from netclust import (build_dendrogram, compute_path, cut_at_k,
                      make_two_cluster_dataset, rbf_weights)

ds = make_two_cluster_dataset(p=25, T=20, seed=1)
x = ds.tensor

# kernel weights kept for each graph's 10 nearest neighbours
w = rbf_weights(x, k=10)
path = compute_path(x, w, q=1)
print(f"{len(path)} penalty levels from {path.lambdas[0]:.2e} to {path.lambdas[-1]:.2f}")
print("fission events along the path:", path.monotone_violations)

###############################################################################
# Nothing fuses for most of the grid; the merges crowd into the last stretch.

K = path.n_clusters
for idx in np.flatnonzero(np.diff(K)) + 1:
    print(f"  lambda = {path.lambdas[idx]:.3f}   K = {K[idx - 1]} -> {K[idx]}")

###############################################################################
# The merge tree. Leaf order from scipy shows the two groups side by side.

tree = build_dendrogram(path)
order = dendrogram(tree.to_linkage(), no_plot=True)["ivl"]
print("leaf order:", " ".join(order))
left, right = tree.final_split()
print("last merge joins", left, "and", right)

###############################################################################
# Cutting the path at two clusters recovers the planted labels.

cut = cut_at_k(path, 2)
print(f"two clusters first appear at lambda = {cut.lam:.3f}")
print("labels:", cut.assignment.labels)
print("truth: ", ds.labels)
