"""Numba-jitted twins of the kernels in ``_numpy``; same signatures and semantics."""
from __future__ import annotations

import numpy as np
from numba import njit

SQRT2 = np.sqrt(2.0)


@njit(cache=True)
def haar_from_gauss(gauss: np.ndarray) -> np.ndarray:
    q, r = np.linalg.qr(np.ascontiguousarray(gauss))
    d = q.shape[0]
    for j in range(d):
        if r[j, j] < 0.0:
            for i in range(d):
                q[i, j] = -q[i, j]
    if np.linalg.det(q) < 0.0:
        for i in range(d):
            q[i, d - 1] = -q[i, d - 1]
    return np.ascontiguousarray(q)


@njit(cache=True)
def conjugate_coords(
    g: np.ndarray, mats: np.ndarray, rows: np.ndarray, cols: np.ndarray
) -> np.ndarray:
    k = mats.shape[0]
    p = rows.shape[0]
    gt = np.ascontiguousarray(g.T)
    out = np.empty((k, p))
    for b in range(k):
        conj = g @ np.ascontiguousarray(mats[b]) @ gt
        for t in range(p):
            out[b, t] = SQRT2 * conj[rows[t], cols[t]]
    return out


@njit(cache=True)
def best_rank_over_trials(
    mats: np.ndarray,
    offsets: np.ndarray,
    gauss: np.ndarray,
    rows: np.ndarray,
    cols: np.ndarray,
    rel_tol: float,
) -> tuple[int, int]:
    trials, L = gauss.shape[0], gauss.shape[1]
    ambient = rows.shape[0]
    stacked = np.empty((mats.shape[0], ambient))
    best = 0
    for t in range(trials):
        for i in range(L):
            g = haar_from_gauss(gauss[t, i])
            lo, hi = offsets[i], offsets[i + 1]
            stacked[lo:hi] = conjugate_coords(g, mats[lo:hi], rows, cols)
        sv = np.linalg.svd(stacked, False)[1]
        rank = 0
        if sv[0] > 0.0:
            for v in sv:
                if v > rel_tol * sv[0]:
                    rank += 1
        if rank > best:
            best = rank
            if best == ambient:
                return best, t
    return best, -1


@njit(cache=True)
def product_spectra(xmats: np.ndarray, gauss: np.ndarray) -> np.ndarray:
    samples, L = gauss.shape[0], gauss.shape[1]
    d = xmats.shape[1]
    out = np.empty((samples, d), dtype=np.complex128)
    for s in range(samples):
        prod = np.eye(d)
        for i in range(L):
            g = haar_from_gauss(gauss[s, i])
            gt = np.ascontiguousarray(g.T)
            prod = prod @ (g @ np.ascontiguousarray(xmats[i]) @ gt)
        out[s] = np.linalg.eigvals(prod.astype(np.complex128))
    return out
