"""Synthetic graph collections: graphon draws with permuted-label clusters
and two-block stochastic block models.

All randomness flows from one integer seed through
:class:`numpy.random.SeedSequence`; each graph gets its own spawned stream so
the output does not depend on generation order.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import NamedTuple, Optional

import numpy as np

from .errors import InvalidGraphon, NotAPermutation
from .tensor import GraphTensor


@dataclass(frozen=True)
class GraphonSpec:
    """A symmetric ``W : [0,1]^2 -> [0,1]``.

    ``kind="one-minus-max"`` is ``W(x, y) = 1 - max(x, y)``. ``kind="grid"``
    is piecewise constant on an ``n x n`` table (cell ``(a, b)`` covers
    ``[a/n, (a+1)/n) x [b/n, (b+1)/n)``).
    """

    kind: str = "one-minus-max"
    grid: Optional[np.ndarray] = None

    def __post_init__(self):
        if self.kind == "grid":
            g = np.atleast_2d(np.asarray(self.grid, dtype=float))
            if g.shape[0] != g.shape[1] or not np.allclose(g, g.T):
                raise InvalidGraphon("graphon table must be square and symmetric")
            object.__setattr__(self, "grid", g)
        elif self.kind != "one-minus-max":
            raise InvalidGraphon(f"unknown graphon kind {self.kind!r}")

    @classmethod
    def constant(cls, value):
        return cls("grid", np.array([[float(value)]]))

    def __call__(self, x, y):
        x = np.asarray(x, dtype=float)
        y = np.asarray(y, dtype=float)
        if self.kind == "one-minus-max":
            return 1.0 - np.maximum(x, y)
        n = self.grid.shape[0]
        a = np.minimum((x * n).astype(int), n - 1)
        b = np.minimum((y * n).astype(int), n - 1)
        return self.grid[a, b]


@dataclass(frozen=True)
class SbmSpec:
    block_sizes: tuple
    B: np.ndarray

    def __post_init__(self):
        B = np.asarray(self.B, dtype=float)
        sizes = tuple(int(s) for s in self.block_sizes)
        if B.shape != (len(sizes), len(sizes)) or not np.allclose(B, B.T):
            raise ValueError("B must be a symmetric K x K matrix")
        if np.any(B < 0) or np.any(B > 1) or min(sizes) < 1:
            raise ValueError("B entries must lie in [0, 1], sizes must be positive")
        object.__setattr__(self, "B", B)
        object.__setattr__(self, "block_sizes", sizes)

    @property
    def p(self) -> int:
        return sum(self.block_sizes)

    def edge_probabilities(self) -> np.ndarray:
        blocks = np.repeat(np.arange(len(self.block_sizes)), self.block_sizes)
        P = self.B[blocks][:, blocks]
        np.fill_diagonal(P, 0.0)
        return P


def sampling_points(p: int) -> np.ndarray:
    """Equispaced latent positions ``(i - 0.5) / p``."""
    return (np.arange(1, p + 1) - 0.5) / p


def graphon_probabilities(spec: GraphonSpec, p: int) -> np.ndarray:
    x = sampling_points(p)
    P = spec(x[:, None], x[None, :])
    if np.any(P < 0) or np.any(P > 1) or not np.all(np.isfinite(P)):
        raise InvalidGraphon("graphon values must lie in [0, 1]")
    P = np.array(P, dtype=float)
    np.fill_diagonal(P, 0.0)
    return P


def _bernoulli_graph(P, rng) -> np.ndarray:
    p = P.shape[0]
    rows, cols = np.tril_indices(p, -1)
    A = np.zeros((p, p))
    A[rows, cols] = rng.random(len(rows)) < P[rows, cols]
    return A + A.T


def _rng(seed):
    if isinstance(seed, np.random.Generator):
        return seed
    return np.random.default_rng(seed)


def graphon_sample(spec: GraphonSpec, p: int, seed) -> np.ndarray:
    """One undirected, loop-free graph with edges ``Bernoulli(W(x_u, x_v))``."""
    if p < 2:
        raise ValueError("p must be >= 2")
    return _bernoulli_graph(graphon_probabilities(spec, p), _rng(seed))


def sbm_sample(spec: SbmSpec, seed) -> np.ndarray:
    return _bernoulli_graph(spec.edge_probabilities(), _rng(seed))


def permute_nodes(a, perm) -> np.ndarray:
    """``out[u, v] = a[perm[u], perm[v]]`` (0-based ``perm``)."""
    a = np.asarray(a)
    perm = np.asarray(perm)
    p = a.shape[0]
    if (perm.shape != (p,) or not np.issubdtype(perm.dtype, np.integer)
            or not np.array_equal(np.sort(perm), np.arange(p))):
        raise NotAPermutation("perm must be a permutation of 0..p-1")
    return a[np.ix_(perm, perm)]


class SimulatedDataset(NamedTuple):
    tensor: GraphTensor
    labels: np.ndarray
    permutations: np.ndarray
    """One row per slice: the node permutation applied to that slice."""


def make_two_cluster_dataset(p=25, T=20, seed=0, shared_perm=True,
                             perm=None, graphon: Optional[GraphonSpec] = None
                             ) -> SimulatedDataset:
    """Two clusters of graphon draws that differ only by a node relabeling.

    The first ``T/2`` graphs are left as drawn (label 1); the rest have their
    nodes relabeled (label 2) by one seed-derived permutation, or by a fresh
    permutation per graph when ``shared_perm=False``. Passing ``perm``
    forces the cluster-2 permutation.
    """
    if T % 2:
        raise ValueError("T must be even")
    graphon = graphon or GraphonSpec()
    P = graphon_probabilities(graphon, p)
    perm_seq, *graph_seqs = np.random.SeedSequence(seed).spawn(T + 1)
    perm_rng = np.random.default_rng(perm_seq)
    shared = perm_rng.permutation(p) if perm is None else np.asarray(perm)

    slices = np.empty((T, p, p))
    perms = np.tile(np.arange(p), (T, 1))
    for t, ss in enumerate(graph_seqs):
        rng = np.random.default_rng(ss)
        A = _bernoulli_graph(P, rng)
        if t >= T // 2:
            pi = shared if shared_perm else rng.permutation(p)
            A = permute_nodes(A, pi)
            perms[t] = pi
        slices[t] = A
    labels = np.repeat([1, 2], T // 2)
    return SimulatedDataset(GraphTensor(slices), labels, perms)


def make_changepoint_dataset(p=25, T=12, change_after=6, seed=0,
                             graphon: Optional[GraphonSpec] = None
                             ) -> SimulatedDataset:
    """Graph sequence whose node labeling switches once.

    Slices ``0..change_after-1`` use one random relabeling of the graphon,
    the remaining slices another.
    """
    if not 1 <= change_after < T:
        raise ValueError("change_after must lie in [1, T-1]")
    graphon = graphon or GraphonSpec()
    P = graphon_probabilities(graphon, p)
    perm_seq, *graph_seqs = np.random.SeedSequence(seed).spawn(T + 1)
    perm_rng = np.random.default_rng(perm_seq)
    pi = (perm_rng.permutation(p), perm_rng.permutation(p))
    slices = np.empty((T, p, p))
    perms = np.empty((T, p), dtype=int)
    for t, ss in enumerate(graph_seqs):
        seg = int(t >= change_after)
        slices[t] = permute_nodes(_bernoulli_graph(P, np.random.default_rng(ss)),
                                  pi[seg])
        perms[t] = pi[seg]
    labels = np.where(np.arange(T) < change_after, 1, 2)
    return SimulatedDataset(GraphTensor(slices), labels, perms)


def make_sbm_dataset(spec: SbmSpec, T=20, seed=0) -> SimulatedDataset:
    """``T`` i.i.d. SBM draws; the second half has block memberships permuted."""
    p = spec.p
    perm_seq, *graph_seqs = np.random.SeedSequence(seed).spawn(T + 1)
    pi = np.random.default_rng(perm_seq).permutation(p)
    P = spec.edge_probabilities()
    slices = np.empty((T, p, p))
    perms = np.tile(np.arange(p), (T, 1))
    for t, ss in enumerate(graph_seqs):
        A = _bernoulli_graph(P, np.random.default_rng(ss))
        if t >= T // 2:
            A = permute_nodes(A, pi)
            perms[t] = pi
        slices[t] = A
    labels = np.where(np.arange(T) < T // 2, 1, 2)
    return SimulatedDataset(GraphTensor(slices), labels, perms)
