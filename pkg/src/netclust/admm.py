"""Scaled ADMM for convex clustering of graph tensors.

Solves, for a fixed penalty level ``lam``::

    min_U  0.5 * ||U - X||_F^2 + lam * sum_{(i,j)} w_ij * ||U_i - U_j||_{sigma(q)}

with the splitting ``V = D U`` where ``D`` is the signed incidence matrix of
the fusion graph. Everything is carried out on the stacked ``T x d`` form, so
the U-update is a ``T x T`` linear solve shared across the ``d`` columns and
its Cholesky factor is computed once.
"""

from __future__ import annotations

import logging
import warnings
from dataclasses import dataclass, field
from typing import List, NamedTuple

import numpy as np
import scipy.sparse as sp
from scipy.linalg import cho_factor, cho_solve
from scipy.sparse.csgraph import connected_components

from .errors import (DisconnectedWeights, EmptyWeights, MaxIterReached,
                     NonFiniteIterate)
from .prox import prox_schatten_batch, schatten_norm, schatten_order
from .tensor import (GraphTensor, StackedMatrix, matricize, stack_rows,
                     unstack_rows)
from .weights import FusionWeights, is_connected

logger = logging.getLogger(__name__)

# entries per edge block in the V/Z sweep (~256 KiB of float64)
BLOCK_ELEMENTS = 32_768


@dataclass(frozen=True)
class DifferenceOperator:
    """Signed incidence matrix of the fusion graph.

    Row ``e`` has +1 at column ``i[e]`` and -1 at column ``j[e]`` (``i < j``).
    """

    T: int
    i: np.ndarray
    j: np.ndarray
    edge_weights: np.ndarray

    @property
    def E(self) -> int:
        return len(self.i)

    @property
    def matrix(self) -> sp.csr_matrix:
        rows = np.repeat(np.arange(self.E), 2)
        cols = np.column_stack([self.i, self.j]).ravel()
        vals = np.tile([1.0, -1.0], self.E)
        return sp.csr_matrix((vals, (rows, cols)), shape=(self.E, self.T))

    def apply(self, U):
        return U[self.i] - U[self.j]

    def adjoint(self, V):
        return self.matrix.T @ V

    def gram(self) -> np.ndarray:
        """``D^T D``: the weighted-graph Laplacian with unit edge weights."""
        L = np.zeros((self.T, self.T))
        np.add.at(L, (self.i, self.i), 1.0)
        np.add.at(L, (self.j, self.j), 1.0)
        np.add.at(L, (self.i, self.j), -1.0)
        np.add.at(L, (self.j, self.i), -1.0)
        return L


def build_difference_operator(w: FusionWeights) -> DifferenceOperator:
    if w.E == 0:
        raise EmptyWeights("fusion weights have no positive entries")
    return DifferenceOperator(w.T, w.i.copy(), w.j.copy(), w.w.copy())


@dataclass(frozen=True)
class ClusterAssignment:
    """Cluster labels ``1..K`` for ``T`` slices, numbered by first appearance."""

    labels: np.ndarray

    def __post_init__(self):
        lab = canonical_labels(self.labels)
        lab.setflags(write=False)
        object.__setattr__(self, "labels", lab)

    @property
    def K(self) -> int:
        return int(self.labels.max(initial=0))

    @property
    def T(self) -> int:
        return len(self.labels)

    def groups(self):
        return [np.flatnonzero(self.labels == k) for k in range(1, self.K + 1)]

    def __eq__(self, other):
        if not isinstance(other, ClusterAssignment):
            return NotImplemented
        return np.array_equal(self.labels, other.labels)

    __hash__ = None


def canonical_labels(labels) -> np.ndarray:
    """Relabel to ``1..K`` in order of first appearance."""
    labels = np.asarray(labels).ravel()
    _, first, inv = np.unique(labels, return_index=True, return_inverse=True)
    rank = np.empty(len(first), dtype=int)
    rank[np.argsort(first)] = np.arange(1, len(first) + 1)
    return rank[inv.ravel()]


def components_from_edges(T, i, j) -> ClusterAssignment:
    g = sp.coo_matrix((np.ones(len(i)), (i, j)), shape=(T, T))
    _, lab = connected_components(g, directed=False)
    return ClusterAssignment(lab)


@dataclass
class AdmmState:
    """Iterates and diagnostics of one ADMM run.

    ``U`` is ``T x d``; ``V`` and ``Z`` are ``E x d`` (scaled dual).
    """

    U: np.ndarray
    V: np.ndarray
    Z: np.ndarray
    rho: float
    p: int
    mode: str
    k: int = 0
    primal_residual: List[float] = field(default_factory=list)
    dual_residual: List[float] = field(default_factory=list)
    converged: bool = False

    def copy(self) -> "AdmmState":
        return AdmmState(self.U.copy(), self.V.copy(), self.Z.copy(), self.rho,
                         self.p, self.mode, self.k, list(self.primal_residual),
                         list(self.dual_residual), self.converged)


class AdmmResult(NamedTuple):
    centroids: GraphTensor
    assignment: ClusterAssignment
    state: AdmmState


def choose_mode(x: GraphTensor, q) -> str:
    """Compact storage only where the prox commutes with it (q = 2).

    For q in {1, inf} the prox of a zero-diagonal symmetric matrix generally
    has a nonzero diagonal, which compact rows cannot hold.
    """
    if schatten_order(q) == 2 and not x.directed and x.has_zero_diagonal():
        return "compact"
    return "full"


class AdmmSolver:
    """Precomputed pieces for repeated ADMM runs on one ``(x, w, q, rho)``.

    Used directly by :func:`admm_solve` and, with warm starts across a
    sequence of penalty levels, by the path code.
    """

    def __init__(self, x: GraphTensor, w: FusionWeights, q=1, rho=1.0,
                 mode="auto"):
        if w.T != x.T:
            raise ValueError(f"weights cover {w.T} slices, data has {x.T}")
        if rho <= 0:
            raise ValueError("rho must be positive")
        self.x = x
        self.q = schatten_order(q)
        self.rho = float(rho)
        self.mode = choose_mode(x, q) if mode == "auto" else mode
        if self.mode == "compact" and self.q != 2:
            raise ValueError("compact storage is only exact for q = 2")
        self.symmetric = not x.directed
        self.d_op = build_difference_operator(w)
        self.Dt = self.d_op.matrix.T.tocsc()
        self._block_cache = {}
        self.X = matricize(x, self.mode).values
        A = np.eye(x.T) + self.rho * self.d_op.gram()
        self.chol = cho_factor(A, lower=True)
        if not is_connected(w):
            warnings.warn("fusion graph is disconnected; its components "
                          "can never fuse", DisconnectedWeights, stacklevel=3)

    def initial_state(self, init="zero-dual") -> AdmmState:
        """Cold start: ``V = D X``, and ``Z = 0`` (``"zero-dual"``) or
        ``Z = D X`` (``"copy"``).

        The zero dual makes ``U = X`` a fixed point at ``lam = 0``.
        """
        DX = self.d_op.apply(self.X)
        if init == "zero-dual":
            Z = np.zeros_like(DX)
        elif init == "copy":
            Z = DX.copy()
        else:
            raise ValueError(f"unknown init {init!r}")
        return AdmmState(self.X.copy(), DX, Z, self.rho, self.x.p, self.mode)

    def _prox_rows(self, R, thresh):
        if self.mode == "compact" or self.q == 2:
            # group soft-threshold; row norms are slice Frobenius norms
            nrm = np.sqrt(np.einsum("ij,ij->i", R, R))
            scale = np.zeros_like(nrm)
            keep = nrm > thresh
            scale[keep] = 1.0 - thresh[keep] / nrm[keep]
            R *= scale[:, None]
            return R
        M = unstack_rows(R, self.x.p, self.mode)
        P = prox_schatten_batch(M, thresh, self.q, symmetric=self.symmetric)
        return stack_rows(P, self.mode)

    def _blocks(self, d):
        """Edge ranges sized so one block of ``E x d`` rows stays in cache."""
        n = max(1, BLOCK_ELEMENTS // max(d, 1))
        if d not in self._block_cache:
            E = self.d_op.E
            self._block_cache[d] = [(slice(a, min(a + n, E)),
                                     self.Dt[:, a:min(a + n, E)].tocsr())
                                    for a in range(0, E, n)]
        return self._block_cache[d]

    def iterate(self, state: AdmmState, lam: float, n_iter: int,
                eps_abs=1e-8, eps_rel=1e-6, check=True) -> AdmmState:
        """Advance ``state`` in place by up to ``n_iter`` iterations.

        With ``check=False`` the stopping rule is skipped and exactly
        ``n_iter`` iterations run.

        The V- and Z-updates and every product with ``D^T`` are done in one
        pass over blocks of edges, so large problems stream through memory
        once per iteration.
        """
        rho = self.rho
        ei, ej = self.d_op.i, self.d_op.j
        thresh = lam * self.d_op.edge_weights / rho
        E, d = state.V.shape
        T = state.U.shape[0]
        sqrt_ed = np.sqrt(E * d)
        sqrt_td = np.sqrt(T * d)
        p = self.x.p
        blocks = self._blocks(d)
        V, Z = state.V, state.Z
        G = self.Dt @ (V - Z)  # D^T (V - Z), carried between iterations
        state.converged = False
        for _ in range(n_iter):
            U = cho_solve(self.chol, self.X + rho * G, check_finite=False)
            if self.symmetric and self.mode == "full":
                Us = U.reshape(T, p, p)
                U = (0.5 * (Us + Us.transpose(0, 2, 1))).reshape(T, d)
            G = np.zeros((T, d))
            DdV = np.zeros((T, d))
            DtZ = np.zeros((T, d)) if check else None
            r2 = du2 = v2 = 0.0
            for sl, Dt_b in blocks:
                DU = U[ei[sl]] - U[ej[sl]]
                if check:
                    du2 += np.einsum("ij,ij->", DU, DU)
                V_b = self._prox_rows(DU + Z[sl], thresh[sl])
                r = np.subtract(DU, V_b, out=DU)
                r2 += np.einsum("ij,ij->", r, r)
                Z[sl] += r
                dV = V[sl] - V_b
                V[sl] = V_b
                DdV += Dt_b @ dV
                G += Dt_b @ (V_b - Z[sl])
                if check:
                    v2 += np.einsum("ij,ij->", V_b, V_b)
                    DtZ += Dt_b @ Z[sl]
            state.U = U
            state.k += 1

            r_norm = np.sqrt(r2)
            s_norm = rho * np.linalg.norm(DdV)
            state.primal_residual.append(float(r_norm))
            state.dual_residual.append(float(s_norm))
            if not (np.isfinite(r_norm) and np.isfinite(s_norm)):
                raise NonFiniteIterate(
                    f"non-finite iterate at iteration {state.k}")
            if check:
                eps_pri = sqrt_ed * eps_abs + eps_rel * np.sqrt(max(du2, v2))
                eps_dual = sqrt_td * eps_abs + eps_rel * rho * np.linalg.norm(DtZ)
                if r_norm <= eps_pri and s_norm <= eps_dual:
                    state.converged = True
                    break
        return state

    def assignment(self, state: AdmmState, zero_tol=1e-12) -> ClusterAssignment:
        return extract_clusters(state, self.d_op, zero_tol)

    def centroids(self, state: AdmmState) -> GraphTensor:
        U = unstack_rows(state.U, self.x.p, self.mode)
        return GraphTensor(U, directed=self.x.directed)


def admm_solve(x: GraphTensor, w: FusionWeights, lam: float, q=1, rho=1.0,
               eps_abs=1e-8, eps_rel=1e-6, max_iter=10_000, zero_tol=1e-12,
               mode="auto", init="zero-dual") -> AdmmResult:
    """Solve the convex clustering problem at a single penalty level.

    Parameters
    ----------
    x : GraphTensor
        Data, ``T`` graphs on ``p`` shared nodes.
    w : FusionWeights
        Fusion graph over the ``T`` slices.
    lam : float
        Penalty level, ``>= 0``.
    q : {1, 2, inf}
        Schatten order of the fusion penalty.
    rho : float
        ADMM step parameter.
    eps_abs, eps_rel : float
        Absolute/relative tolerances on the primal and dual residuals.
    max_iter : int
        Iteration cap. Hitting it emits :class:`MaxIterReached` and returns
        the last iterate with ``state.converged = False``.
    zero_tol : float
        Copy-variable rows with norm at or below this count as fused.
    mode : {"auto", "full", "compact"}
        Row layout; ``"auto"`` picks compact only when that is exact.
    init : {"zero-dual", "copy"} or AdmmState
        Cold-start rule (see :meth:`AdmmSolver.initial_state`) or a warm
        start state (copied).

    Returns
    -------
    AdmmResult
        ``(centroids, assignment, state)``; centroids are the raw
        (unrefitted) solution.
    """
    if lam < 0:
        raise ValueError("lam must be >= 0")
    solver = AdmmSolver(x, w, q=q, rho=rho, mode=mode)
    if isinstance(init, AdmmState):
        state = init.copy()
    else:
        state = solver.initial_state(init)
    solver.iterate(state, lam, max_iter, eps_abs, eps_rel)
    if not state.converged:
        warnings.warn(f"ADMM hit max_iter={max_iter} (primal residual "
                      f"{state.primal_residual[-1]:.3g})", MaxIterReached,
                      stacklevel=2)
    logger.debug("admm lam=%g q=%g: %d iterations, converged=%s",
                 lam, solver.q, state.k, state.converged)
    return AdmmResult(solver.centroids(state), solver.assignment(state, zero_tol),
                      state)


def extract_clusters(state: AdmmState, d_op: DifferenceOperator,
                     zero_tol=1e-12) -> ClusterAssignment:
    """Clusters = connected components of the pairs whose copy row is zero."""
    fused = np.linalg.norm(state.V, axis=1) <= zero_tol
    return components_from_edges(d_op.T, d_op.i[fused], d_op.j[fused])


def refit_centroids(x: GraphTensor, a: ClusterAssignment) -> GraphTensor:
    """Replace each slice by the mean of the slices in its cluster."""
    labels = np.asarray(a.labels)
    if len(labels) != x.T:
        raise ValueError("assignment length must equal T")
    out = np.empty_like(x.slices)
    for k in np.unique(labels):
        members = labels == k
        out[members] = x.slices[members].mean(axis=0)
    return GraphTensor(out, directed=x.directed)


def objective(x: GraphTensor, U, w: FusionWeights, lam: float, q=1) -> float:
    """Value of the clustering objective at centroids ``U`` (``(T, p, p)``)."""
    U = U.slices if isinstance(U, GraphTensor) else np.asarray(U, dtype=float)
    loss = 0.5 * np.sum((U - x.slices) ** 2)
    pen = sum(wij * schatten_norm(U[i] - U[j], q) for i, j, wij in w.entries)
    return float(loss + lam * pen)
