"""Regularization paths by algorithmic regularization, and the dendrograms
read off them.

The path is traced on a geometric grid of penalty levels, running a few
warm-started ADMM iterations per level instead of solving each level to
convergence.
"""

from __future__ import annotations

import logging
import warnings
from dataclasses import dataclass, field
from typing import List, NamedTuple

import numpy as np

from .admm import (AdmmSolver, ClusterAssignment, canonical_labels,
                   components_from_edges, refit_centroids)
from .errors import InvalidK, KNeverReached, PathTruncated
from .tensor import GraphTensor
from .weights import FusionWeights

logger = logging.getLogger(__name__)


class PathPoint(NamedTuple):
    lam: float
    assignment: ClusterAssignment
    centroids: GraphTensor


@dataclass
class ClusterPath:
    """Penalty levels with their raw cluster assignments and centroids.

    ``monotone`` holds the agglomerative version of each assignment: once two
    slices have fused they stay fused at every larger penalty level.
    ``monotone_violations`` counts the points whose raw assignment split a
    cluster present at the previous point.
    """

    points: List[PathPoint]
    monotone: List[ClusterAssignment]
    n_components: int
    monotone_violations: int = 0
    truncated: bool = False
    data: GraphTensor = field(default=None, repr=False)

    def __len__(self):
        return len(self.points)

    @property
    def lambdas(self) -> np.ndarray:
        return np.array([pt.lam for pt in self.points])

    @property
    def n_clusters(self) -> np.ndarray:
        return np.array([a.K for a in self.monotone])

    def refitted(self, index: int) -> GraphTensor:
        """Per-cluster means of the data at path point ``index``."""
        return refit_centroids(self.data, self.points[index].assignment)


def _is_coarsening(fine, coarse) -> bool:
    """True if every block of ``fine`` lies inside one block of ``coarse``."""
    fine = np.asarray(fine)
    coarse = np.asarray(coarse)
    for k in np.unique(fine):
        if len(np.unique(coarse[fine == k])) > 1:
            return False
    return True


def compute_path(x: GraphTensor, w: FusionWeights, q=1, lambda0="auto",
                 multiplier=1.05, inner_iters=1, max_points=2000, rho=1.0,
                 zero_tol=1e-12) -> ClusterPath:
    """Trace the clustering path from no fusion to full fusion.

    Parameters
    ----------
    x, w, q, rho
        As for :func:`netclust.admm.admm_solve`.
    lambda0 : float or "auto"
        First penalty level. ``"auto"`` uses ``1e-6`` times the largest
        Frobenius norm among the fused pairs' data differences.
    multiplier : float
        Grid ratio between consecutive levels, ``> 1``.
    inner_iters : int
        ADMM iterations per level (1 gives pure algorithmic regularization;
        larger values stop early once the level has converged).
    max_points : int
        Cap on recorded levels. Emits :class:`PathTruncated` if full fusion
        is not reached.
    """
    if multiplier <= 1:
        raise ValueError("multiplier must be > 1")
    if inner_iters < 1:
        raise ValueError("inner_iters must be >= 1")
    solver = AdmmSolver(x, w, q=q, rho=rho)
    state = solver.initial_state()
    d_op = solver.d_op
    if lambda0 == "auto":
        scale = np.linalg.norm(d_op.apply(solver.X), axis=1).max()
        lam = 1e-6 * scale if scale > 0 else 1e-6
    else:
        lam = float(lambda0)
        if lam <= 0:
            raise ValueError("lambda0 must be positive")
    n_comp, _ = w.components()

    points, monotone = [], []
    cum_fused = np.zeros(d_op.E, dtype=bool)
    violations = 0
    prev = None
    while len(points) < max_points:
        solver.iterate(state, lam, inner_iters, check=inner_iters > 1)
        fused = np.linalg.norm(state.V, axis=1) <= zero_tol
        raw = components_from_edges(x.T, d_op.i[fused], d_op.j[fused])
        if prev is not None and not _is_coarsening(prev.labels, raw.labels):
            violations += 1
        cum_fused |= fused
        mono = components_from_edges(x.T, d_op.i[cum_fused], d_op.j[cum_fused])
        points.append(PathPoint(float(lam), raw, solver.centroids(state)))
        monotone.append(mono)
        prev = raw
        if raw.K <= n_comp:
            break
        lam *= multiplier
    truncated = points[-1].assignment.K > n_comp
    if truncated:
        warnings.warn(f"path stopped after {max_points} points with "
                      f"{points[-1].assignment.K} clusters", PathTruncated,
                      stacklevel=2)
    logger.debug("path: %d points, %d violations", len(points), violations)
    return ClusterPath(points, monotone, n_comp, violations, truncated, x)


@dataclass(frozen=True)
class Merge:
    height: float
    left: int
    right: int
    new_id: int


@dataclass
class Dendrogram:
    """Agglomerative merge list.

    Leaves are ``0..T-1``; the ``m``-th merge creates cluster ``T + m``
    (the scipy linkage convention).
    """

    merges: List[Merge]
    n_leaves: int

    @property
    def heights(self) -> np.ndarray:
        return np.array([m.height for m in self.merges])

    def to_linkage(self) -> np.ndarray:
        """scipy-style ``(T-1) x 4`` linkage matrix (only if fully merged)."""
        size = {i: 1 for i in range(self.n_leaves)}
        Z = []
        for m in self.merges:
            size[m.new_id] = size[m.left] + size[m.right]
            Z.append([m.left, m.right, m.height, size[m.new_id]])
        return np.array(Z, dtype=float).reshape(-1, 4)

    def final_split(self):
        """Leaf sets joined by the last merge."""
        if not self.merges:
            raise ValueError("dendrogram has no merges")
        members = {i: [i] for i in range(self.n_leaves)}
        for m in self.merges:
            members[m.new_id] = members[m.left] + members[m.right]
        last = self.merges[-1]
        return sorted(members[last.left]), sorted(members[last.right])


def build_dendrogram(path: ClusterPath) -> Dendrogram:
    """Merge tree from first-fusion levels of the monotonized path.

    A fusion of several clusters at one level is split into consecutive
    pairwise merges at that height, ordered by smallest member index.
    """
    if not path.points:
        raise ValueError("empty path")
    T = path.monotone[0].T
    node_of = np.arange(T)  # current tree node id of each leaf's cluster
    prev = np.arange(T)
    merges: List[Merge] = []
    next_id = T
    for pt, mono in zip(path.points, path.monotone):
        labels = mono.labels
        new_groups = []
        for k in np.unique(labels):
            leaves = np.flatnonzero(labels == k)
            old = np.unique(prev[leaves])
            if len(old) > 1:
                new_groups.append(leaves)
        new_groups.sort(key=lambda g: g[0])
        for leaves in new_groups:
            # old clusters inside this group, ordered by smallest member
            parts = {}
            for leaf in leaves:
                parts.setdefault(prev[leaf], leaf)
            order = sorted(parts.values())
            current = node_of[order[0]]
            for leaf in order[1:]:
                merges.append(Merge(pt.lam, int(current), int(node_of[leaf]),
                                    next_id))
                current = next_id
                next_id += 1
            node_of[leaves] = current
        prev = labels.copy()
    return Dendrogram(merges, T)


class Cut(NamedTuple):
    lam: float
    assignment: ClusterAssignment
    skipped: bool
    index: int


def cut_at_k(path: ClusterPath, k: int) -> Cut:
    """Smallest recorded level whose monotonized assignment has ``k`` clusters.

    If the path jumps past ``k`` the first point with fewer clusters is
    returned and ``skipped`` is set.
    """
    T = path.monotone[0].T
    if not 1 <= k <= T:
        raise InvalidK(f"k must lie in [1, {T}], got {k}")
    for idx, (pt, mono) in enumerate(zip(path.points, path.monotone)):
        if mono.K <= k:
            return Cut(pt.lam, mono, mono.K != k, idx)
    raise KNeverReached(f"no path point has {k} or fewer clusters")


def assignment_from_labels(labels) -> ClusterAssignment:
    return ClusterAssignment(canonical_labels(labels))
