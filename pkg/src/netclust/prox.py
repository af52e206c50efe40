"""Schatten norms and their proximal operators for q in {1, 2, inf}."""

from __future__ import annotations

import numpy as np

from .errors import NegativeThreshold

SCHATTEN_ORDERS = (1, 2, np.inf)


def schatten_order(q) -> float:
    """Normalize ``q`` (accepts 1, 2, inf, or the strings "1", "2", "inf")."""
    if isinstance(q, str):
        q = q.strip().lower()
        q = np.inf if q in ("inf", "infinity", "spectral") else float(q)
    q = float(q)
    if q not in SCHATTEN_ORDERS:
        raise ValueError(f"Schatten order must be 1, 2 or inf, got {q}")
    return q


def schatten_norm(m, q=1) -> float:
    """l_q norm of the singular values of ``m``."""
    q = schatten_order(q)
    m = np.asarray(m, dtype=float)
    if q == 2:
        return float(np.linalg.norm(m))
    s = np.linalg.svd(m, compute_uv=False)
    return float(s.sum() if q == 1 else s.max(initial=0.0))


def project_l1_ball(v, radius):
    """Euclidean projection of a nonnegative vector onto ``{u >= 0, sum(u) <= radius}``.

    Sort-based threshold search, O(n log n).
    """
    v = np.asarray(v, dtype=float)
    if radius <= 0:
        raise ValueError("radius must be positive")
    if v.sum() <= radius:
        return v.copy()
    theta = _simplex_threshold(v[None, :], np.array([radius]))[0]
    return np.maximum(v - theta, 0.0)


def _simplex_threshold(S, radius):
    """Row-wise threshold ``theta`` with ``sum(max(S - theta, 0)) == radius``.

    Only meaningful for rows whose sum exceeds ``radius``.
    """
    u = -np.sort(-S, axis=1)
    css = np.cumsum(u, axis=1) - radius[:, None]
    j = np.arange(1, S.shape[1] + 1)
    cond = u - css / j > 0
    # last index where cond holds; cond is true at j=1 whenever radius > 0
    rho = S.shape[1] - np.argmax(cond[:, ::-1], axis=1)
    return css[np.arange(S.shape[0]), rho - 1] / rho


def _shrink_values(s, tau, q):
    """New singular values for the prox of ``tau * ||.||_{sigma(q)}``.

    ``s`` is (n, k) nonnegative, ``tau`` is (n,).
    """
    if q == 1:
        return np.maximum(s - tau[:, None], 0.0)
    out = np.zeros_like(s)
    big = s.sum(axis=1) > tau
    if np.any(big):
        # Moreau: s - proj_{l1 ball tau}(s) == min(s, theta)
        theta = _simplex_threshold(s[big], tau[big])
        out[big] = np.minimum(s[big], theta[:, None])
    return out


def prox_schatten(m, tau, q=1):
    """Proximal operator of ``tau * ||.||_{sigma(q)}`` at ``m``.

    Returns ``argmin_X tau*||X||_{sigma(q)} + 0.5*||X - m||_F^2``. When every
    singular value is annihilated the result is exactly zero. Symmetric
    input gives an exactly symmetric output.

    Parameters
    ----------
    m : ndarray, shape (p, p)
    tau : float
        Nonnegative threshold.
    q : {1, 2, inf}

    Examples
    --------
    >>> prox_schatten(np.diag([3.0, 1.0]), 1.0, q=1)
    array([[2., 0.],
           [0., 0.]])
    """
    m = np.asarray(m, dtype=float)
    if tau < 0:
        raise NegativeThreshold(f"tau must be >= 0, got {tau}")
    symmetric = m.shape[0] == m.shape[1] and np.array_equal(m, m.T)
    return prox_schatten_batch(m[None], np.array([float(tau)]), q,
                               symmetric=symmetric)[0]


def prox_schatten_batch(M, tau, q=1, symmetric=False):
    """Apply :func:`prox_schatten` to each ``M[i]`` with threshold ``tau[i]``.

    ``symmetric=True`` asserts every ``M[i]`` is symmetric and switches to an
    eigendecomposition, which keeps the output exactly symmetric.
    """
    q = schatten_order(q)
    M = np.asarray(M, dtype=float)
    tau = np.broadcast_to(np.asarray(tau, dtype=float), (M.shape[0],))
    if np.any(tau < 0):
        raise NegativeThreshold("thresholds must be >= 0")
    out = np.zeros_like(M)
    if M.shape[0] == 0:
        return out

    if q == 2:
        nrm = np.sqrt(np.einsum("nij,nij->n", M, M))
        keep = nrm > tau
        scale = np.zeros_like(nrm)
        scale[keep] = 1.0 - tau[keep] / nrm[keep]
        out[keep] = M[keep] * scale[keep, None, None]
        return out

    active = tau > 0
    out[~active] = M[~active]
    if not np.any(active):
        return out
    A = M[active]
    t = tau[active]
    if symmetric:
        lam, Q = np.linalg.eigh(A)
        s = np.abs(lam)
        snew = _shrink_values(s, t, q)
        nz = np.any(snew > 0, axis=1)
        res = np.zeros_like(A)
        if np.any(nz):
            sig = np.sign(lam[nz]) * snew[nz]
            Qn = Q[nz]
            R = (Qn * sig[:, None, :]) @ Qn.transpose(0, 2, 1)
            res[nz] = 0.5 * (R + R.transpose(0, 2, 1))
    else:
        U, s, Vt = np.linalg.svd(A)
        snew = _shrink_values(s, t, q)
        nz = np.any(snew > 0, axis=1)
        res = np.zeros_like(A)
        if np.any(nz):
            res[nz] = (U[nz] * snew[nz][:, None, :]) @ Vt[nz]
    out[active] = res
    return out


def project_nuclear_ball(m, radius):
    """Frobenius projection of ``m`` onto ``{X : ||X||_* <= radius}``."""
    m = np.asarray(m, dtype=float)
    U, s, Vt = np.linalg.svd(m)
    if s.sum() <= radius:
        return m.copy()
    return (U * project_l1_ball(s, radius)) @ Vt
