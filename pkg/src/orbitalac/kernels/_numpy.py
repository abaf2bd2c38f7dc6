"""Pure-numpy implementations of the hot kernels.

Reference semantics for the numba twins in ``_numba``: identical signatures,
identical random-input conventions (all Gaussian draws happen outside the
kernels so both lanes consume the same stream).
"""
from __future__ import annotations

import numpy as np

SQRT2 = np.sqrt(2.0)


def haar_from_gauss(gauss: np.ndarray) -> np.ndarray:
    """Map an iid Gaussian matrix to a Haar-distributed special orthogonal matrix.

    QR with the R-diagonal sign correction gives Haar measure on O(d); negating
    the last column when det = -1 lands uniformly on SO(d).
    """
    q, r = np.linalg.qr(gauss)
    s = np.where(np.diag(r) >= 0.0, 1.0, -1.0)
    q = q * s
    if np.linalg.det(q) < 0.0:
        q[:, -1] = -q[:, -1]
    return q


def conjugate_coords(
    g: np.ndarray, mats: np.ndarray, rows: np.ndarray, cols: np.ndarray
) -> np.ndarray:
    """Coordinates of g M g^T for a stack of skew matrices M.

    Coordinates are the strict upper triangle scaled by sqrt(2), making the
    map a Frobenius isometry onto R^(d(d-1)/2).
    """
    conj = np.einsum("ij,kjl,ml->kim", g, mats, g, optimize=True)
    return SQRT2 * conj[:, rows, cols]


def best_rank_over_trials(
    mats: np.ndarray,
    offsets: np.ndarray,
    gauss: np.ndarray,
    rows: np.ndarray,
    cols: np.ndarray,
    rel_tol: float,
) -> tuple[int, int]:
    """Best numerical rank of the stacked conjugated tangent bases over all trials.

    mats: (K, d, d) stack of all elements' basis matrices, element i occupying
    rows offsets[i]:offsets[i+1]; gauss: (trials, L, d, d) pre-drawn Gaussians.
    Returns (best_rank, index of the first trial achieving full rank, or -1).
    """
    trials, L = gauss.shape[0], gauss.shape[1]
    ambient = rows.shape[0]
    stacked = np.empty((mats.shape[0], ambient))
    best = 0
    for t in range(trials):
        for i in range(L):
            g = haar_from_gauss(gauss[t, i])
            block = slice(offsets[i], offsets[i + 1])
            stacked[block] = conjugate_coords(g, mats[block], rows, cols)
        sv = np.linalg.svd(stacked, compute_uv=False)
        rank = int(np.sum(sv > rel_tol * sv[0])) if sv[0] > 0.0 else 0
        if rank > best:
            best = rank
            if best == ambient:
                return best, t
    return best, -1


def product_spectra(xmats: np.ndarray, gauss: np.ndarray) -> np.ndarray:
    """Eigenvalues of products of random conjugates.

    xmats: (L, d, d) group elements; gauss: (samples, L, d, d). Sample s yields
    eigvals(prod_i g_i x_i g_i^T) as a complex (d,) row.
    """
    samples, L = gauss.shape[0], gauss.shape[1]
    d = xmats.shape[1]
    out = np.empty((samples, d), dtype=np.complex128)
    for s in range(samples):
        prod = np.eye(d)
        for i in range(L):
            g = haar_from_gauss(gauss[s, i])
            prod = prod @ (g @ xmats[i] @ g.T)
        out[s] = np.linalg.eigvals(prod.astype(np.complex128))
    return out
