"""Numerical model of so(2n+1) and SO(2n+1): root planes, tangent spans, brackets.

Matrices are real; the torus is the block-diagonal rotation subgroup with one
2x2 block per coordinate plus a fixed final axis. Skew matrices are
coordinatized by their strict upper triangle scaled by sqrt(2), a Frobenius
isometry, so orthonormality of subspace bases is preserved by Ad.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Sequence

import numpy as np
import scipy.linalg

from . import kernels
from .eligibility import reduce_element, removed_coordinate
from .rootsys import (
    Root,
    RootKind,
    TorusElement,
    annihilating_roots,
    conjugacy_class_dim,
    positive_roots,
    root_from_coefficients,
)

SQRT2 = math.sqrt(2.0)
SKEW_TOL = 1e-12
ORTHO_TOL = 1e-10
RANK_REL_TOL = 1e-8
RESIDUAL_TOL = 1e-8
COMPONENT_MIN = 1e-10
GENERIC_SEED_CONSTANT = 0.7390851332
SEPARATION_TOL = 1e-6


def matrix_dim(n: int) -> int:
    return 2 * n + 1


def ambient_dim(n: int) -> int:
    """dim so(2n+1) = n(2n+1)."""
    return n * (2 * n + 1)


@lru_cache(maxsize=None)
def triu_rc(d: int) -> tuple[np.ndarray, np.ndarray]:
    rows, cols = np.triu_indices(d, k=1)
    rows.setflags(write=False)
    cols.setflags(write=False)
    return rows, cols


def vec(mat: np.ndarray) -> np.ndarray:
    """Frobenius-isometric coordinates of a skew matrix."""
    rows, cols = triu_rc(mat.shape[0])
    return SQRT2 * mat[rows, cols]


def unvec(coords: np.ndarray, d: int) -> np.ndarray:
    rows, cols = triu_rc(d)
    mat = np.zeros((d, d))
    mat[rows, cols] = coords / SQRT2
    mat[cols, rows] = -coords / SQRT2
    return mat


@dataclass(frozen=True, eq=False)
class AlgebraElement:
    """An element of so(2n+1): a real skew-symmetric (2n+1) x (2n+1) matrix."""

    n: int
    entries: np.ndarray

    def __post_init__(self) -> None:
        d = matrix_dim(self.n)
        m = np.asarray(self.entries, dtype=float)
        if m.shape != (d, d):
            raise ValueError(f"expected shape {(d, d)}, got {m.shape}")
        scale = max(1.0, float(np.abs(m).max()))
        if float(np.abs(m + m.T).max()) > SKEW_TOL * scale:
            raise ValueError("matrix is not skew-symmetric")
        m = m.copy()
        m.setflags(write=False)
        object.__setattr__(self, "entries", m)

    @classmethod
    def zero(cls, n: int) -> "AlgebraElement":
        return cls(n, np.zeros((matrix_dim(n), matrix_dim(n))))

    def coords(self) -> np.ndarray:
        return vec(self.entries)

    def norm(self) -> float:
        return float(np.linalg.norm(self.entries))


@dataclass(frozen=True, eq=False)
class GroupElement:
    """An element of SO(2n+1)."""

    n: int
    entries: np.ndarray

    def __post_init__(self) -> None:
        d = matrix_dim(self.n)
        m = np.asarray(self.entries, dtype=float)
        if m.shape != (d, d):
            raise ValueError(f"expected shape {(d, d)}, got {m.shape}")
        if float(np.abs(m.T @ m - np.eye(d)).max()) > ORTHO_TOL:
            raise ValueError("matrix is not orthogonal")
        if abs(float(np.linalg.det(m)) - 1.0) > ORTHO_TOL:
            raise ValueError("matrix has determinant != 1")
        m = m.copy()
        m.setflags(write=False)
        object.__setattr__(self, "entries", m)

    @classmethod
    def identity(cls, n: int) -> "GroupElement":
        return cls(n, np.eye(matrix_dim(n)))


@dataclass(frozen=True, eq=False)
class SubspaceBasis:
    """Orthonormal rows spanning a subspace of so(2n+1) in vec coordinates."""

    n: int
    basis: np.ndarray  # (dim, ambient) with orthonormal rows

    def __post_init__(self) -> None:
        b = np.asarray(self.basis, dtype=float)
        if b.ndim != 2 or b.shape[1] != ambient_dim(self.n):
            raise ValueError(f"expected (*, {ambient_dim(self.n)}) basis, got {b.shape}")
        b = b.copy()
        b.setflags(write=False)
        object.__setattr__(self, "basis", b)

    @property
    def dim(self) -> int:
        return self.basis.shape[0]


@dataclass(frozen=True, eq=False)
class RootSpaceBasis:
    """The 2-plane of so(2n+1) on which the torus acts by rotation at speed alpha."""

    alpha: Root
    first: AlgebraElement
    second: AlgebraElement


def _rotation_block(c: float, s: float) -> np.ndarray:
    return np.array([[c, -s], [s, c]])


def torus_matrix(x: TorusElement) -> GroupElement:
    """Block-diagonal rotation matrix with angles pi * coords and a final +1."""
    d = matrix_dim(x.n)
    m = np.zeros((d, d))
    for k, a in enumerate(x.coords):
        theta = math.pi * float(a)
        m[2 * k : 2 * k + 2, 2 * k : 2 * k + 2] = _rotation_block(math.cos(theta), math.sin(theta))
    m[d - 1, d - 1] = 1.0
    return GroupElement(x.n, m)


def lift(x: TorusElement) -> AlgebraElement:
    """Canonical logarithm of torus_matrix(x): block-diagonal angle generators."""
    d = matrix_dim(x.n)
    m = np.zeros((d, d))
    for k, a in enumerate(x.coords):
        theta = math.pi * float(a)
        m[2 * k, 2 * k + 1] = -theta
        m[2 * k + 1, 2 * k] = theta
    return AlgebraElement(x.n, m)


def exp_alg(y: AlgebraElement) -> GroupElement:
    return GroupElement(y.n, scipy.linalg.expm(y.entries))


def adjoint(g: GroupElement, y: AlgebraElement) -> AlgebraElement:
    if g.n != y.n:
        raise ValueError(f"rank mismatch: {g.n} != {y.n}")
    return AlgebraElement(y.n, g.entries @ y.entries @ g.entries.T)


def ad(m: AlgebraElement, y: AlgebraElement) -> AlgebraElement:
    if m.n != y.n:
        raise ValueError(f"rank mismatch: {m.n} != {y.n}")
    return AlgebraElement(y.n, m.entries @ y.entries - y.entries @ m.entries)


def haar_group(n: int, rng: np.random.Generator) -> GroupElement:
    """Haar-distributed element of SO(2n+1)."""
    d = matrix_dim(n)
    return GroupElement(n, kernels.haar_from_gauss(rng.standard_normal((d, d))))


def random_skew(n: int, rng: np.random.Generator) -> AlgebraElement:
    a = rng.standard_normal((matrix_dim(n), matrix_dim(n)))
    return AlgebraElement(n, (a - a.T) / 2.0)


# ---------------------------------------------------------------------------
# Root-plane construction from a generic torus direction


def _torus_generator_coords(n: int, k: int) -> np.ndarray:
    """Unit vec coordinates of the k-th (1-based) torus rotation generator."""
    d = matrix_dim(n)
    m = np.zeros((d, d))
    m[2 * (k - 1), 2 * (k - 1) + 1] = -1.0
    m[2 * (k - 1) + 1, 2 * (k - 1)] = 1.0
    return vec(m) / SQRT2


def _torus_from_theta(n: int, theta: np.ndarray) -> np.ndarray:
    d = matrix_dim(n)
    m = np.zeros((d, d))
    for k in range(n):
        m[2 * k, 2 * k + 1] = -theta[k]
        m[2 * k + 1, 2 * k] = theta[k]
    return m


def _root_values(roots: Sequence[Root], theta: np.ndarray) -> np.ndarray:
    vals = np.empty(len(roots))
    for t, alpha in enumerate(roots):
        if alpha.kind is RootKind.SHORT:
            vals[t] = theta[alpha.i - 1]
        elif alpha.kind is RootKind.DIFF:
            vals[t] = theta[alpha.i - 1] - theta[alpha.j - 1]
        else:
            vals[t] = theta[alpha.i - 1] + theta[alpha.j - 1]
    return vals


def _separated(values: np.ndarray) -> bool:
    a = np.sort(np.abs(values))
    return bool(a[0] > SEPARATION_TOL and np.min(np.diff(a)) > SEPARATION_TOL)


def _ad_matrix(n: int, h_mat: np.ndarray) -> np.ndarray:
    """Matrix of ad(H) on vec coordinates."""
    d = matrix_dim(n)
    p = ambient_dim(n)
    out = np.empty((p, p))
    eye = np.eye(p)
    for t in range(p):
        e = unvec(eye[t], d)
        out[:, t] = vec(h_mat @ e - e @ h_mat)
    return out


class _RootCache:
    """Per-rank root-plane data built once from a generic torus direction."""

    def __init__(self, n: int):
        self.n = n
        self.d = matrix_dim(n)
        self.p = ambient_dim(n)
        roots = positive_roots(n)
        self.roots = roots

        base = GENERIC_SEED_CONSTANT * np.arange(1, n + 1) / (n + 1)
        rng = np.random.default_rng(987654321)
        theta = base
        for _ in range(100):
            vals = _root_values(roots, theta)
            if _separated(vals):
                break
            theta = base + rng.uniform(-0.08, 0.08, n)
        else:
            raise RuntimeError(f"could not separate root values at rank {n}")
        self.theta = theta
        self.values = {alpha: float(v) for alpha, v in zip(roots, vals)}

        h_mat = _torus_from_theta(n, theta)
        a = _ad_matrix(n, h_mat)
        self.h_mat = h_mat
        w, v = np.linalg.eigh(a @ a)

        expected = sorted(
            [(-val * val, alpha) for alpha, val in self.values.items() for _ in range(2)]
            + [(0.0, None)] * n,
            key=lambda item: item[0],
        )
        scale = max(1.0, float(np.abs(w).max()))
        if float(np.max(np.abs(w - np.array([e for e, _ in expected])))) > 1e-8 * scale:
            raise RuntimeError(f"ad(H)^2 spectrum does not match root values at rank {n}")

        planes: dict[Root, np.ndarray] = {}
        slots: dict[Root, list[int]] = {}
        for idx, (_, alpha) in enumerate(expected):
            if alpha is not None:
                slots.setdefault(alpha, []).append(idx)
        for alpha, (k1, k2) in ((a_, tuple(s)) for a_, s in slots.items()):
            w1 = v[:, k1]
            nz = np.nonzero(np.abs(w1) > 1e-9)[0][0]
            y1 = w1 if w1[nz] > 0 else -w1
            y2 = a @ y1 / self.values[alpha]
            y2 = y2 / np.linalg.norm(y2)
            if abs(float(y1 @ y2)) > 1e-8:
                raise RuntimeError(f"root plane for {alpha} is not orthogonal at rank {n}")
            planes[alpha] = np.vstack([y1, y2])
        self.planes = planes
        self.torus = np.vstack([_torus_generator_coords(n, k) for k in range(1, n + 1)])
        self.plane_mats = {
            alpha: np.array([unvec(rows[0], self.d), unvec(rows[1], self.d)])
            for alpha, rows in planes.items()
        }


@lru_cache(maxsize=None)
def _root_cache(n: int) -> _RootCache:
    return _RootCache(n)


def root_space(alpha: Root, n: int) -> RootSpaceBasis:
    """Orthonormal basis of the root plane of a positive root, fixed orientation."""
    cache = _root_cache(n)
    if alpha not in cache.planes:
        raise ValueError(f"{alpha} is not a positive root of B_{n}")
    m1, m2 = cache.plane_mats[alpha]
    return RootSpaceBasis(alpha, AlgebraElement(n, m1), AlgebraElement(n, m2))


def root_plane_action(alpha: Root, n: int) -> float:
    """Signed speed alpha(H) of the generic torus direction used by the cache."""
    return _root_cache(n).values[alpha]


def subspace_residual(rows: np.ndarray, onto: np.ndarray) -> float:
    """Largest distance of a row of ``rows`` from the span of orthonormal ``onto``."""
    if rows.shape[0] == 0:
        return 0.0
    if onto.shape[0] == 0:
        return float(np.max(np.linalg.norm(rows, axis=1)))
    resid = rows - (rows @ onto.T) @ onto
    return float(np.max(np.linalg.norm(resid, axis=1)))


def orthonormal_rows(rows: np.ndarray, rel_tol: float = 1e-10) -> np.ndarray:
    """Orthonormal basis (rows) of the row span, via SVD."""
    if rows.shape[0] == 0:
        return rows
    _, s, vt = np.linalg.svd(rows, full_matrices=False)
    if s.size == 0 or s[0] == 0.0:
        return rows[:0]
    return vt[: int(np.sum(s > rel_tol * s[0]))]


# ---------------------------------------------------------------------------
# Tangent spans of conjugacy classes


@lru_cache(maxsize=None)
def _span_data(x: TorusElement) -> tuple[np.ndarray, np.ndarray]:
    """(basis rows, basis matrices) of the span of non-annihilating root planes,
    cross-checked against the image of I - Ad(torus_matrix(x))."""
    n = x.n
    cache = _root_cache(n)
    annih = annihilating_roots(x)
    keep = [alpha for alpha in cache.roots if alpha not in annih]
    if keep:
        rows = np.vstack([cache.planes[alpha] for alpha in keep])
        mats = np.ascontiguousarray(
            np.concatenate([cache.plane_mats[alpha] for alpha in keep])
        )
    else:
        rows = np.empty((0, cache.p))
        mats = np.empty((0, cache.d, cache.d))

    xhat = torus_matrix(x).entries
    ad_mat = np.empty((cache.p, cache.p))
    eye = np.eye(cache.p)
    for t in range(cache.p):
        ad_mat[:, t] = vec(xhat @ unvec(eye[t], cache.d) @ xhat.T)
    u, s, _ = np.linalg.svd(np.eye(cache.p) - ad_mat)
    rank = int(np.sum(s > RANK_REL_TOL * s[0])) if s.size and s[0] > 0 else 0
    image = u[:, :rank].T

    expected = conjugacy_class_dim(x)
    if not (rows.shape[0] == rank == expected):
        raise AssertionError(
            f"tangent span dimension mismatch for {x}: planes {rows.shape[0]}, "
            f"image rank {rank}, formula {expected}"
        )
    if max(subspace_residual(rows, image), subspace_residual(image, rows)) > RESIDUAL_TOL:
        raise AssertionError(f"root-plane span disagrees with image of I - Ad for {x}")
    return rows, mats


def nonannihilating_span(x: TorusElement) -> SubspaceBasis:
    """Span of the root planes moved by x; equals the translated tangent space of C_x."""
    rows, _ = _span_data(x)
    return SubspaceBasis(x.n, rows)


def span_matrices(x: TorusElement) -> np.ndarray:
    """The same span as (k, d, d) stacked skew matrices (for the kernels)."""
    _, mats = _span_data(x)
    return mats


def tangent_space(x: TorusElement, g: GroupElement) -> SubspaceBasis:
    """Ad(g) applied to nonannihilating_span(x); orthonormality is preserved."""
    if g.n != x.n:
        raise ValueError(f"rank mismatch: {g.n} != {x.n}")
    mats = span_matrices(x)
    if mats.shape[0] == 0:
        return SubspaceBasis(x.n, np.empty((0, ambient_dim(x.n))))
    rows, cols = triu_rc(matrix_dim(x.n))
    return SubspaceBasis(x.n, kernels.conjugate_coords(g.entries, mats, rows, cols))


# ---------------------------------------------------------------------------
# Rank-(n-1) embedding and the reduction's new directions


def embed_algebra(y: AlgebraElement) -> AlgebraElement:
    """so(2n-1) -> so(2n+1): lower-right block, i.e. coordinates e_2..e_n."""
    if y.n < 2:
        raise ValueError("embedding needs source rank >= 2")
    d = matrix_dim(y.n + 1)
    m = np.zeros((d, d))
    m[2:, 2:] = y.entries
    return AlgebraElement(y.n + 1, m)


def embed_group(g: GroupElement) -> GroupElement:
    if g.n < 2:
        raise ValueError("embedding needs source rank >= 2")
    d = matrix_dim(g.n + 1)
    m = np.eye(d)
    m[2:, 2:] = g.entries
    return GroupElement(g.n + 1, m)


def subalgebra_rows(n: int) -> np.ndarray:
    """Orthonormal vec-rows of the embedded so(2n-1) inside so(2n+1)."""
    d = matrix_dim(n)
    rows, cols = triu_rc(d)
    mask = rows >= 2
    out = np.zeros((int(mask.sum()), ambient_dim(n)))
    out[np.arange(out.shape[0]), np.nonzero(mask)[0]] = 1.0
    return out


def first_coordinate_roots(n: int) -> list[Root]:
    """Positive roots involving e_1, i.e. those lost when passing to rank n-1."""
    out = [Root(RootKind.SHORT, 1)]
    for j in range(2, n + 1):
        out.append(Root(RootKind.DIFF, 1, j))
    for j in range(2, n + 1):
        out.append(Root(RootKind.SUM, 1, j))
    return out


def full_omega_basis(n: int) -> SubspaceBasis:
    """Span of all e_1-root planes, dimension 2(2n-1)."""
    cache = _root_cache(n)
    rows = np.vstack([cache.planes[a] for a in first_coordinate_roots(n)])
    return SubspaceBasis(n, rows)


def complement_direction(n: int) -> np.ndarray:
    """Unit normal of sp(full omega, embedded so(2n-1)): the first torus generator."""
    return _torus_generator_coords(n, 1)


def aligned_coords(x: TorusElement) -> tuple[Fraction, ...]:
    """Coordinates of x permuted so the coordinate dropped by reduction comes first."""
    return (removed_coordinate(x),) + reduce_element(x).coords


def omega_roots(x: TorusElement) -> list[Root]:
    """e_1-roots not annihilating the reduction-aligned copy of x."""
    coords = aligned_coords(x)
    return [a for a in first_coordinate_roots(x.n) if a.value(coords) % 2 != 0]


def omega_span(x: TorusElement) -> SubspaceBasis:
    """New tangent directions of x relative to its reduction, as e_1-root planes."""
    if x.n < 3:
        raise ValueError(f"reduction needs rank >= 3, got {x.n}")
    if x.is_central:
        raise ValueError("central elements are not reducible")
    cache = _root_cache(x.n)
    keep = omega_roots(x)
    rows = (
        np.vstack([cache.planes[a] for a in keep]) if keep else np.empty((0, cache.p))
    )
    expected = conjugacy_class_dim(x) - conjugacy_class_dim(reduce_element(x))
    if rows.shape[0] != expected:
        raise AssertionError(
            f"omega dimension mismatch for {x}: {rows.shape[0]} != {expected}"
        )
    return SubspaceBasis(x.n, rows)


def aligned_span_matrices(x: TorusElement) -> tuple[np.ndarray, list[Root]]:
    """Non-annihilating root planes of the reduction-aligned copy of x, as matrices."""
    cache = _root_cache(x.n)
    coords = aligned_coords(x)
    keep = [a for a in cache.roots if a.value(coords) % 2 != 0]
    mats = np.concatenate([cache.plane_mats[a] for a in keep])
    return np.ascontiguousarray(mats), keep


# ---------------------------------------------------------------------------
# Bracket relations between root planes


@dataclass(frozen=True)
class WeylBracketReport:
    n: int
    pairs_checked: int
    components_checked: int
    max_residual: float
    min_component: float
    failures: tuple[str, ...]

    @property
    def ok(self) -> bool:
        return (
            not self.failures
            and self.max_residual < RESIDUAL_TOL
            and self.min_component > COMPONENT_MIN
        )

    def to_dict(self) -> dict:
        return {
            "n": self.n,
            "pairs_checked": self.pairs_checked,
            "components_checked": self.components_checked,
            "max_residual": self.max_residual,
            "min_component": self.min_component,
            "failures": list(self.failures),
            "ok": self.ok,
        }


def _positive_rep(alpha: Root | None) -> Root | None:
    if alpha is None:
        return None
    return alpha if alpha.sign == 1 else alpha.negated()


def weyl_bracket_check(n: int) -> WeylBracketReport:
    """Verify the bracket grading of the constructed root planes.

    [V_a, V_b] must lie in V_(a+b) + V_(a-b) (torus for a = b), and whenever
    a+b or a-b is a root the component of the four basis brackets on that
    plane must be collectively nonvanishing.
    """
    cache = _root_cache(n)
    roots = cache.roots
    max_residual = 0.0
    min_component = float("inf")
    pairs = 0
    components = 0
    failures: list[str] = []

    for a_idx, alpha in enumerate(roots):
        ma = cache.plane_mats[alpha]
        # the in-plane bracket is a nonzero torus element
        b = vec(ma[0] @ ma[1] - ma[1] @ ma[0])
        coeff = cache.torus @ b
        resid = float(np.linalg.norm(b - cache.torus.T @ coeff))
        max_residual = max(max_residual, resid)
        pairs += 1
        components += 1
        torus_norm = float(np.linalg.norm(coeff))
        min_component = min(min_component, torus_norm)
        if torus_norm <= COMPONENT_MIN:
            failures.append(f"[{alpha}, {alpha}] has vanishing torus component")

        for beta in roots[a_idx + 1 :]:
            mb = cache.plane_mats[beta]
            ca = np.array(alpha.coefficients(n))
            cb = np.array(beta.coefficients(n))
            targets = []
            for gamma in (
                _positive_rep(root_from_coefficients(ca + cb)),
                _positive_rep(root_from_coefficients(ca - cb)),
            ):
                if gamma is not None and gamma not in [t for t, _ in targets]:
                    targets.append((gamma, cache.planes[gamma]))
            target_rows = (
                np.vstack([rows for _, rows in targets])
                if targets
                else np.empty((0, cache.p))
            )
            comp_norms = {gamma: 0.0 for gamma, _ in targets}
            pairs += 1
            for i in range(2):
                for j in range(2):
                    b = vec(ma[i] @ mb[j] - mb[j] @ ma[i])
                    if target_rows.shape[0]:
                        coeff = target_rows @ b
                        resid = float(np.linalg.norm(b - target_rows.T @ coeff))
                    else:
                        resid = float(np.linalg.norm(b))
                    max_residual = max(max_residual, resid)
                    for gamma, rows in targets:
                        comp_norms[gamma] = max(
                            comp_norms[gamma], float(np.linalg.norm(rows @ b))
                        )
            for gamma, _ in targets:
                components += 1
                min_component = min(min_component, comp_norms[gamma])
                if comp_norms[gamma] <= COMPONENT_MIN:
                    failures.append(f"[{alpha}, {beta}] misses its {gamma} component")

    return WeylBracketReport(
        n=n,
        pairs_checked=pairs,
        components_checked=components,
        max_residual=max_residual,
        min_component=min_component,
        failures=tuple(failures),
    )
