"""Baseline clusterers (k-means on graph spectra or on raw edges) and the
adjusted Rand index used to score every method against ground truth."""

from __future__ import annotations

import warnings
from typing import NamedTuple

import numpy as np

from .admm import ClusterAssignment
from .errors import AsymmetricSlice, DegenerateK, LengthMismatch
from .tensor import GraphTensor


def spectra_features(x: GraphTensor) -> np.ndarray:
    """Eigenvalues of each slice, sorted nonincreasing (``T x p``)."""
    if x.directed:
        raise AsymmetricSlice("spectra need symmetric (undirected) slices")
    return np.linalg.eigvalsh(x.slices)[:, ::-1].copy()


def edge_features(x: GraphTensor) -> np.ndarray:
    """Strictly-lower-triangle entries of each slice, unscaled."""
    if x.directed:
        raise AsymmetricSlice("edge features need undirected slices")
    rows, cols = np.tril_indices(x.p, -1)
    return x.slices[:, rows, cols].copy()


class KMeansResult(NamedTuple):
    assignment: ClusterAssignment
    centers: np.ndarray
    inertia: float
    n_iter: int
    history: list
    degenerate: bool


def _kmeanspp(X, k, rng):
    n = X.shape[0]
    centers = [X[rng.integers(n)]]
    d2 = np.sum((X - centers[0]) ** 2, axis=1)
    for _ in range(1, k):
        total = d2.sum()
        idx = rng.choice(n, p=d2 / total) if total > 0 else rng.integers(n)
        centers.append(X[idx])
        d2 = np.minimum(d2, np.sum((X - X[idx]) ** 2, axis=1))
    return np.array(centers)


def _sq_dists(X, C):
    return np.maximum(
        np.sum(X**2, 1)[:, None] - 2 * X @ C.T + np.sum(C**2, 1)[None, :], 0.0)


def _lloyd(X, C, max_iter):
    history = []
    labels = None
    for it in range(1, max_iter + 1):
        D = _sq_dists(X, C)
        new = np.argmin(D, axis=1)
        history.append(float(D[np.arange(len(X)), new].sum()))
        if labels is not None and np.array_equal(new, labels):
            break
        labels = new
        for c in range(len(C)):
            members = labels == c
            if members.any():
                C[c] = X[members].mean(axis=0)
            else:
                # empty cluster: reseed at the point farthest from its center
                far = np.argmax(D[np.arange(len(X)), labels])
                C[c] = X[far]
                labels[far] = c
    inertia = float(np.sum((X - C[labels]) ** 2))
    return labels, C, inertia, it, history


def kmeans(f, k: int, restarts=20, seed=0, max_iter=200) -> KMeansResult:
    """Lloyd's algorithm with k-means++ seeding, best of ``restarts`` runs.

    Deterministic given ``seed``; ties in the objective go to the earliest
    restart.
    """
    X = np.asarray(f, dtype=float)
    T = X.shape[0]
    if not 1 <= k <= T:
        raise ValueError(f"k must lie in [1, {T}]")
    distinct, inverse = np.unique(X, axis=0, return_inverse=True)
    if k > len(distinct):
        warnings.warn(f"only {len(distinct)} distinct rows for k={k}",
                      DegenerateK, stacklevel=2)
        inverse = inverse.ravel()
        return KMeansResult(ClusterAssignment(inverse), distinct, 0.0, 0, [],
                            True)

    best = None
    for ss in np.random.SeedSequence(seed).spawn(restarts):
        rng = np.random.default_rng(ss)
        C = _kmeanspp(X, k, rng)
        labels, C, inertia, n_iter, hist = _lloyd(X, C.copy(), max_iter)
        if best is None or inertia < best[2]:
            best = (labels, C, inertia, n_iter, hist)
    labels, C, inertia, n_iter, hist = best
    assignment = ClusterAssignment(labels)
    # reorder centers to follow the canonical labels
    order = [labels[np.flatnonzero(assignment.labels == c)[0]]
             for c in range(1, assignment.K + 1)]
    return KMeansResult(assignment, C[order], inertia, n_iter, hist, False)


def _labels(a):
    return np.asarray(a.labels if isinstance(a, ClusterAssignment) else a).ravel()


def adjusted_rand_index(a, b) -> float:
    """Adjusted Rand index of two partitions (labels or assignments)."""
    a, b = _labels(a), _labels(b)
    if len(a) != len(b):
        raise LengthMismatch(f"partitions have lengths {len(a)} and {len(b)}")
    n = len(a)
    _, ia = np.unique(a, return_inverse=True)
    _, ib = np.unique(b, return_inverse=True)
    table = np.zeros((ia.max() + 1, ib.max() + 1))
    np.add.at(table, (ia.ravel(), ib.ravel()), 1)

    def pairs(v):
        return np.sum(v * (v - 1) / 2.0)

    index = pairs(table)
    sum_a = pairs(table.sum(axis=1))
    sum_b = pairs(table.sum(axis=0))
    expected = sum_a * sum_b / (n * (n - 1) / 2.0) if n > 1 else 0.0
    max_index = 0.5 * (sum_a + sum_b)
    if max_index == expected:
        # both partitions trivial in the same way
        return 1.0
    return float((index - expected) / (max_index - expected))
