"""Fusion weights: which pairs of graphs are pulled together, and how hard.

Pairs are 0-based slice indices ``(i, j)`` with ``i < j``; only strictly
positive weights are stored.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.sparse import coo_matrix
from scipy.sparse.csgraph import connected_components

from .errors import InvalidK, InvalidT, SizeMismatch
from .tensor import GraphTensor, pairwise_frobenius_distances


@dataclass(frozen=True)
class FusionWeights:
    T: int
    i: np.ndarray
    j: np.ndarray
    w: np.ndarray

    def __post_init__(self):
        i = np.asarray(self.i, dtype=np.intp).ravel()
        j = np.asarray(self.j, dtype=np.intp).ravel()
        w = np.asarray(self.w, dtype=float).ravel()
        if not (len(i) == len(j) == len(w)):
            raise SizeMismatch("i, j, w must have equal length")
        if np.any(i >= j) or np.any(i < 0) or np.any(j >= self.T):
            raise ValueError("pairs must satisfy 0 <= i < j < T")
        if not np.all(np.isfinite(w)) or np.any(w <= 0):
            raise ValueError("weights must be finite and strictly positive")
        order = np.lexsort((j, i))
        i, j, w = i[order], j[order], w[order]
        if len(i) > 1 and np.any((np.diff(i) == 0) & (np.diff(j) == 0)):
            raise ValueError("duplicate pairs")
        for name, arr in (("i", i), ("j", j), ("w", w)):
            arr.setflags(write=False)
            object.__setattr__(self, name, arr)

    @classmethod
    def from_entries(cls, T, entries):
        """Build from ``(i, j, w)`` triples; zero weights are dropped."""
        entries = [(min(a, b), max(a, b), float(c)) for a, b, c in entries
                   if c != 0]
        if not entries:
            return cls(T, [], [], [])
        i, j, w = zip(*entries)
        return cls(T, i, j, w)

    @classmethod
    def from_matrix(cls, W):
        """Build from a symmetric ``T x T`` weight matrix (upper triangle used)."""
        W = np.asarray(W, dtype=float)
        i, j = np.nonzero(np.triu(W, 1))
        return cls(W.shape[0], i, j, W[i, j])

    @property
    def E(self) -> int:
        return len(self.w)

    @property
    def entries(self):
        return [(int(a), int(b), float(c)) for a, b, c in zip(self.i, self.j, self.w)]

    def to_matrix(self) -> np.ndarray:
        W = np.zeros((self.T, self.T))
        W[self.i, self.j] = self.w
        return W + W.T

    def components(self):
        """Number of connected components and a component id per slice."""
        g = coo_matrix((np.ones(self.E), (self.i, self.j)), shape=(self.T, self.T))
        return connected_components(g, directed=False)

    def __eq__(self, other):
        if not isinstance(other, FusionWeights):
            return NotImplemented
        return (self.T == other.T and np.array_equal(self.i, other.i)
                and np.array_equal(self.j, other.j)
                and np.array_equal(self.w, other.w))

    __hash__ = None


def rbf_weights(x: GraphTensor, phi="auto", k=None) -> FusionWeights:
    """Truncated Gaussian-kernel weights on Frobenius distances.

    ``w_ij = exp(-phi * d_ij**2)``, kept when ``j`` is among the ``k``
    nearest neighbours of ``i`` or vice versa. ``phi="auto"`` uses
    ``1 / median(d_ij**2)`` (1 if that median is 0). ``k=None`` keeps all
    pairs.
    """
    T = x.T
    if k is None:
        k = T - 1
    if not 1 <= k <= T - 1:
        raise InvalidK(f"k must lie in [1, {T - 1}], got {k}")
    D = pairwise_frobenius_distances(x)
    iu, ju = np.triu_indices(T, 1)
    d2 = D[iu, ju] ** 2
    if isinstance(phi, str):
        if phi != "auto":
            raise ValueError(f"phi must be positive or 'auto', got {phi!r}")
        med = np.median(d2)
        phi = 1.0 / med if med > 0 else 1.0
    if phi <= 0:
        raise ValueError("phi must be positive")

    # stable sort so ties resolve toward lower slice index
    Dn = D.copy()
    np.fill_diagonal(Dn, np.inf)
    nn = np.argsort(Dn, axis=1, kind="stable")[:, :k]
    keep = np.zeros((T, T), dtype=bool)
    keep[np.repeat(np.arange(T), k), nn.ravel()] = True
    keep |= keep.T

    w = np.exp(-phi * d2)
    mask = keep[iu, ju] & (w > 0)
    return FusionWeights(T, iu[mask], ju[mask], w[mask])


def uniform_weights(T: int) -> FusionWeights:
    """Unit weight on every pair."""
    if T < 2:
        raise InvalidT("need at least two slices")
    iu, ju = np.triu_indices(T, 1)
    return FusionWeights(T, iu, ju, np.ones(len(iu)))


def chain_weights(T: int) -> FusionWeights:
    """Unit weights between consecutive slices only (changepoint structure)."""
    if T < 2:
        raise InvalidT(f"chain weights need T >= 2, got {T}")
    t = np.arange(T - 1)
    return FusionWeights(T, t, t + 1, np.ones(T - 1))


def hybrid_weights(a: FusionWeights, b: FusionWeights, alpha: float) -> FusionWeights:
    """Convex combination ``alpha * a + (1 - alpha) * b`` on the union of supports."""
    if a.T != b.T:
        raise SizeMismatch(f"weight sets cover {a.T} and {b.T} slices")
    if not 0.0 <= alpha <= 1.0:
        raise ValueError("alpha must lie in [0, 1]")
    if alpha == 1.0:
        return a
    if alpha == 0.0:
        return b
    W = alpha * a.to_matrix() + (1.0 - alpha) * b.to_matrix()
    return FusionWeights.from_matrix(W)


def is_connected(w: FusionWeights) -> bool:
    if w.T <= 1:
        return True
    return w.components()[0] == 1
