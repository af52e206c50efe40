"""
Clustering a handful of graphs at one penalty level
===================================================

Eight weighted graphs on six nodes, drawn around two different centre
graphs. A single solve at a moderate penalty fuses each group onto one
centroid; refitting replaces the shrunken centroids by group means.
"""

import numpy as np

from netclust import GraphTensor, admm_solve, rbf_weights, refit_centroids

rng = np.random.default_rng(0)

# two symmetric centre graphs, four noisy copies of each
centres = rng.standard_normal((2, 6, 6))
centres = centres + centres.transpose(0, 2, 1)
noise = 0.05 * rng.standard_normal((8, 6, 6))
slices = centres[[0, 0, 0, 0, 1, 1, 1, 1]] + noise + noise.transpose(0, 2, 1)
x = GraphTensor(slices)

# fusion weights from a Gaussian kernel on Frobenius distances
w = rbf_weights(x)
print("fusion pairs:", w.E)

###############################################################################
# Solve with the nuclear-norm penalty (q = 1).

res = admm_solve(x, w, lam=0.5, q=1)
print("labels:", res.assignment.labels)
print("iterations:", res.state.k, "converged:", res.state.converged)

###############################################################################
# Penalized centroids are pulled toward each other; the refitted ones are not.

raw = res.centroids.slices
ref = refit_centroids(x, res.assignment).slices
for k, members in enumerate(res.assignment.groups(), 1):
    t = members[0]
    print(f"cluster {k}: |raw - mean| = {np.abs(raw[t] - ref[t]).max():.3f}, "
          f"|mean - centre| = {np.abs(ref[t] - centres[k - 1]).max():.3f}")
