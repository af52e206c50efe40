"""Graph tensors and the slicewise matricization used by the solver.

A collection of ``T`` graphs on a shared set of ``p`` nodes is held as a
``(T, p, p)`` array: ``slices[t]`` is the adjacency matrix of graph ``t``.
The solver works on the stacked form, a ``T x d`` matrix with one row per
graph, where ``d = p**2`` (``"full"``) or ``d = p(p-1)/2`` (``"compact"``,
undirected graphs without self-loops).
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Literal, Optional, Sequence

import numpy as np

from .errors import (AsymmetricSlice, CompactOnDirected, NonzeroDiagonal,
                     ShapeMismatch)

Mode = Literal["full", "compact"]

SYMMETRY_TOL = 1e-12
SQRT2 = np.sqrt(2.0)


@dataclass(frozen=True)
class GraphTensor:
    """``T`` adjacency matrices on a common node set.

    Parameters
    ----------
    slices : array_like, shape (T, p, p)
        Adjacency matrices. Copied and frozen on construction.
    directed : bool
        If False every slice must be symmetric (to 1e-12 absolute); it is
        then symmetrized exactly.
    node_labels : sequence, optional
        Identifiers for the ``p`` nodes, shared by all slices.
    """

    slices: np.ndarray
    directed: bool = False
    node_labels: Optional[Sequence] = field(default=None, compare=False)

    def __post_init__(self):
        a = np.array(self.slices, dtype=float)
        if a.ndim == 2:
            a = a[None]
        if a.ndim != 3 or a.shape[1] != a.shape[2] or a.shape[0] < 1:
            raise ShapeMismatch(f"expected (T, p, p) array, got {a.shape}")
        if not np.all(np.isfinite(a)):
            raise ValueError("slices contain non-finite entries")
        if not self.directed:
            asym = np.abs(a - a.transpose(0, 2, 1)).max(initial=0.0)
            if asym > SYMMETRY_TOL:
                raise AsymmetricSlice(
                    f"undirected tensor has asymmetry {asym:.3g}")
            a = 0.5 * (a + a.transpose(0, 2, 1))
        if self.node_labels is not None and len(self.node_labels) != a.shape[1]:
            raise ShapeMismatch("node_labels length must equal p")
        a.setflags(write=False)
        object.__setattr__(self, "slices", a)

    @property
    def T(self) -> int:
        return self.slices.shape[0]

    @property
    def p(self) -> int:
        return self.slices.shape[1]

    @property
    def shape(self):
        return self.slices.shape

    def has_zero_diagonal(self) -> bool:
        return not np.any(np.diagonal(self.slices, axis1=1, axis2=2))

    def permute_nodes(self, perm) -> "GraphTensor":
        """Relabel nodes of every slice: ``out[t][u, v] = x[t][perm[u], perm[v]]``."""
        perm = np.asarray(perm)
        return GraphTensor(self.slices[:, perm][:, :, perm], self.directed)

    def __eq__(self, other):
        if not isinstance(other, GraphTensor):
            return NotImplemented
        return (self.directed == other.directed
                and self.shape == other.shape
                and np.array_equal(self.slices, other.slices))

    __hash__ = None


@dataclass(frozen=True)
class StackedMatrix:
    """Row-per-slice matrix form of a :class:`GraphTensor`."""

    values: np.ndarray
    p: int
    mode: Mode = "full"

    @property
    def T(self) -> int:
        return self.values.shape[0]

    @property
    def d(self) -> int:
        return self.values.shape[1]


def n_features(p: int, mode: Mode) -> int:
    if mode == "full":
        return p * p
    if mode == "compact":
        return p * (p - 1) // 2
    raise ValueError(f"unknown mode {mode!r}")


def _lower(p):
    return np.tril_indices(p, -1)


def matricize(x: GraphTensor, mode: Mode = "full") -> StackedMatrix:
    """Flatten each slice of ``x`` into one row.

    In compact mode only the strictly-lower triangle is kept and each entry
    is multiplied by sqrt(2), so row Euclidean norms equal slice Frobenius
    norms.

    Raises
    ------
    CompactOnDirected, NonzeroDiagonal
        If compact mode is requested for input it cannot represent.
    """
    if mode == "full":
        return StackedMatrix(x.slices.reshape(x.T, -1).copy(), x.p, "full")
    if mode != "compact":
        raise ValueError(f"unknown mode {mode!r}")
    if x.directed:
        raise CompactOnDirected("compact mode needs an undirected tensor")
    if not x.has_zero_diagonal():
        raise NonzeroDiagonal("compact mode needs zero diagonals")
    rows, cols = _lower(x.p)
    return StackedMatrix(SQRT2 * x.slices[:, rows, cols], x.p, "compact")


def unstack_rows(values: np.ndarray, p: int, mode: Mode) -> np.ndarray:
    """Inverse of the row layout, as a raw ``(n, p, p)`` array."""
    values = np.asarray(values, dtype=float)
    if values.ndim != 2 or values.shape[1] != n_features(p, mode):
        raise ShapeMismatch(
            f"{values.shape} is inconsistent with p={p}, mode={mode}")
    n = values.shape[0]
    if mode == "full":
        return values.reshape(n, p, p).copy()
    out = np.zeros((n, p, p))
    rows, cols = _lower(p)
    out[:, rows, cols] = values / SQRT2
    out[:, cols, rows] = out[:, rows, cols]
    return out


def stack_rows(slices: np.ndarray, mode: Mode) -> np.ndarray:
    """Raw ``(n, p, p)`` array to row layout (no validation)."""
    n, p = slices.shape[0], slices.shape[1]
    if mode == "full":
        return slices.reshape(n, p * p)
    rows, cols = _lower(p)
    return SQRT2 * slices[:, rows, cols]


def tensorize(m: StackedMatrix, p: Optional[int] = None,
              directed: bool = False) -> GraphTensor:
    """Rebuild a :class:`GraphTensor` from its stacked form."""
    p = m.p if p is None else p
    if m.mode == "compact" and directed:
        raise CompactOnDirected("compact rows always describe undirected graphs")
    return GraphTensor(unstack_rows(m.values, p, m.mode), directed=directed)


def pairwise_frobenius_distances(x: GraphTensor) -> np.ndarray:
    """``T x T`` matrix of Frobenius distances between slices."""
    flat = x.slices.reshape(x.T, -1)
    out = np.zeros((x.T, x.T))
    for i in range(x.T - 1):
        out[i, i + 1:] = np.linalg.norm(flat[i + 1:] - flat[i], axis=1)
    return out + out.T
