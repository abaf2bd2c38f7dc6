"""Exact combinatorics of the B_n root system and torus elements of SO(2n+1).

All angles are kept as exact rationals in units of pi, so annihilation
questions ("is alpha(X) a multiple of 2*pi?") are decided with integer
arithmetic rather than floating point.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from functools import cached_property
from typing import Iterator, Sequence


class RootKind(Enum):
    SHORT = "short"  # e_k
    DIFF = "diff"    # e_i - e_j, i < j
    SUM = "sum"      # e_i + e_j, i < j


_KIND_ORDER = {RootKind.SHORT: 0, RootKind.DIFF: 1, RootKind.SUM: 2}


@dataclass(frozen=True)
class Root:
    """A root of B_n; ``i``/``j`` are 1-based coordinate indices (j unused for SHORT)."""

    kind: RootKind
    i: int
    j: int = 0
    sign: int = 1

    def __post_init__(self) -> None:
        if self.sign not in (1, -1):
            raise ValueError(f"sign must be +-1, got {self.sign}")
        if self.kind is RootKind.SHORT:
            if self.i < 1 or self.j != 0:
                raise ValueError(f"short root needs i >= 1, j == 0: {self}")
        elif not 1 <= self.i < self.j:
            raise ValueError(f"long root needs 1 <= i < j: {self}")

    def value(self, coords: Sequence[Fraction]) -> Fraction:
        """Evaluate the root functional on torus coordinates (units of pi)."""
        if self.kind is RootKind.SHORT:
            if self.i > len(coords):
                raise ValueError(f"root index {self.i} exceeds rank {len(coords)}")
            base = coords[self.i - 1]
        else:
            if self.j > len(coords):
                raise ValueError(f"root index {self.j} exceeds rank {len(coords)}")
            a, b = coords[self.i - 1], coords[self.j - 1]
            base = a - b if self.kind is RootKind.DIFF else a + b
        return self.sign * base

    def negated(self) -> "Root":
        return Root(self.kind, self.i, self.j, -self.sign)

    def coefficients(self, n: int) -> tuple[int, ...]:
        """Integer coordinates of the root in the e_1..e_n basis."""
        c = [0] * n
        c[self.i - 1] = self.sign
        if self.kind is RootKind.DIFF:
            c[self.j - 1] = -self.sign
        elif self.kind is RootKind.SUM:
            c[self.j - 1] = self.sign
        return tuple(c)

    def involves(self, index: int) -> bool:
        return self.i == index or (self.kind is not RootKind.SHORT and self.j == index)

    def sort_key(self) -> tuple[int, int, int, int]:
        return (_KIND_ORDER[self.kind], self.i, self.j, self.sign)

    def __str__(self) -> str:
        lead = "" if self.sign == 1 else "-"
        if self.kind is RootKind.SHORT:
            return f"{lead}e{self.i}"
        op = "-" if self.kind is RootKind.DIFF else "+"
        return f"{lead}(e{self.i}{op}e{self.j})" if self.sign == -1 else f"e{self.i}{op}e{self.j}"


def positive_roots(n: int) -> tuple[Root, ...]:
    """The n^2 positive roots of B_n: short ascending, then differences, then sums."""
    if n < 2:
        raise ValueError(f"rank must be >= 2, got {n}")
    shorts = [Root(RootKind.SHORT, k) for k in range(1, n + 1)]
    diffs = [Root(RootKind.DIFF, i, j) for i in range(1, n) for j in range(i + 1, n + 1)]
    sums = [Root(RootKind.SUM, i, j) for i in range(1, n) for j in range(i + 1, n + 1)]
    return tuple(shorts + diffs + sums)


def root_from_coefficients(coeffs: Sequence[int]) -> Root | None:
    """Inverse of :meth:`Root.coefficients`; None when the vector is not a B_n root."""
    support = [(k + 1, c) for k, c in enumerate(coeffs) if c != 0]
    if len(support) == 1:
        (i, c), = support
        if c in (1, -1):
            return Root(RootKind.SHORT, i, 0, c)
        return None
    if len(support) == 2:
        (i, a), (j, b) = support
        if abs(a) != 1 or abs(b) != 1:
            return None
        if a == b:
            return Root(RootKind.SUM, i, j, a)
        return Root(RootKind.DIFF, i, j, a)
    return None


@dataclass(frozen=True)
class TorusElement:
    """Canonical torus representative of a conjugacy class of SO(2n+1).

    Eigenvalues: 1 with multiplicity 2u+1, -1 with multiplicity 2v, and
    e^{+-i pi a} with multiplicity s for each angle group (a, s); angles are
    exact rationals in (0, 1) (units of pi), strictly increasing, and
    u + v + sum(s) = n.
    """

    n: int
    u: int
    v: int
    angles: tuple[tuple[Fraction, int], ...] = ()

    def __post_init__(self) -> None:
        norm = tuple(sorted((Fraction(a), int(s)) for a, s in self.angles))
        object.__setattr__(self, "angles", norm)
        if self.n < 1:
            raise ValueError(f"rank must be >= 1, got {self.n}")
        if self.u < 0 or self.v < 0:
            raise ValueError("multiplicities must be nonnegative")
        for a, s in norm:
            if not 0 < a < 1:
                raise ValueError(f"angle {a} not in (0, 1) (units of pi)")
            if s < 1:
                raise ValueError(f"angle multiplicity must be >= 1, got {s}")
        if len({a for a, _ in norm}) != len(norm):
            raise ValueError("angles must be distinct")
        total = self.u + self.v + sum(s for _, s in norm)
        if total != self.n:
            raise ValueError(f"u + v + sum(s_j) = {total} != n = {self.n}")

    @classmethod
    def identity(cls, n: int) -> "TorusElement":
        return cls(n, n, 0, ())

    @classmethod
    def from_type(cls, u: int, v: int, parts: Sequence[int]) -> "TorusElement":
        """Build the canonical element of a type: angle j/(m+2) for the j-th group,
        multiplicities assigned in descending order (largest group, smallest angle)."""
        parts = sorted((int(s) for s in parts), reverse=True)
        m = len(parts)
        angles = tuple((Fraction(j + 1, m + 2), parts[j]) for j in range(m))
        n = u + v + sum(parts)
        return cls(n, u, v, angles)

    @cached_property
    def coords(self) -> tuple[Fraction, ...]:
        """Torus coordinates in units of pi: u zeros, v ones, then each angle repeated."""
        out: list[Fraction] = [Fraction(0)] * self.u + [Fraction(1)] * self.v
        for a, s in self.angles:
            out.extend([a] * s)
        return tuple(out)

    @property
    def parts(self) -> tuple[int, ...]:
        return tuple(s for _, s in self.angles)

    @property
    def max_part(self) -> int:
        return max(self.parts, default=0)

    @property
    def is_central(self) -> bool:
        """The centre of SO(2n+1) is trivial, so central means identity."""
        return self.u == self.n

    @property
    def is_regular(self) -> bool:
        return not annihilating_roots(self)

    def label(self) -> str:
        factors: list[str] = []
        if self.u:
            factors.append(f"B{self.u}")
        if self.v:
            factors.append(f"D{self.v}")
        factors.extend(f"SU({s})" for s in sorted(self.parts, reverse=True))
        return "x".join(factors)

    def __str__(self) -> str:
        return self.label()


def root_value(alpha: Root, x: TorusElement) -> Fraction:
    """alpha evaluated on the canonical lift of x, reduced mod 2 (units of pi)."""
    return alpha.value(x.coords) % 2


@dataclass(frozen=True)
class AnnihilatorDecomposition:
    """Type of an annihilating root subsystem: B_u x D_v x SU(s_1) x ... ."""

    b_rank: int
    d_rank: int
    su_parts: tuple[int, ...]

    def __post_init__(self) -> None:
        object.__setattr__(self, "su_parts", tuple(sorted(self.su_parts, reverse=True)))

    @property
    def positive_root_count(self) -> int:
        u, v = self.b_rank, self.d_rank
        return u * u + v * (v - 1) + sum(s * (s - 1) // 2 for s in self.su_parts)

    def label(self) -> str:
        factors: list[str] = []
        if self.b_rank:
            factors.append(f"B{self.b_rank}")
        if self.d_rank:
            factors.append(f"D{self.d_rank}")
        factors.extend(f"SU({s})" for s in self.su_parts)
        return "x".join(factors) if factors else "1"


def _block_ranges(x: TorusElement) -> list[tuple[int, int]]:
    """1-based [start, stop) index ranges of the angle groups inside coords."""
    out = []
    start = x.u + x.v + 1
    for _, s in x.angles:
        out.append((start, start + s))
        start += s
    return out


def _expected_annihilating(x: TorusElement) -> frozenset[Root]:
    u, v = x.u, x.v
    roots: set[Root] = set()
    roots.update(Root(RootKind.SHORT, k) for k in range(1, u + 1))
    for i in range(1, u + 1):
        for j in range(i + 1, u + 1):
            roots.add(Root(RootKind.DIFF, i, j))
            roots.add(Root(RootKind.SUM, i, j))
    for i in range(u + 1, u + v + 1):
        for j in range(i + 1, u + v + 1):
            roots.add(Root(RootKind.DIFF, i, j))
            roots.add(Root(RootKind.SUM, i, j))
    for start, stop in _block_ranges(x):
        for i in range(start, stop):
            for j in range(i + 1, stop):
                roots.add(Root(RootKind.DIFF, i, j))
    return frozenset(roots)


def _expected_lie_annihilating(x: TorusElement) -> frozenset[Root]:
    u, v = x.u, x.v
    roots: set[Root] = set()
    roots.update(Root(RootKind.SHORT, k) for k in range(1, u + 1))
    for i in range(1, u + 1):
        for j in range(i + 1, u + 1):
            roots.add(Root(RootKind.DIFF, i, j))
            roots.add(Root(RootKind.SUM, i, j))
    for i in range(u + 1, u + v + 1):
        for j in range(i + 1, u + v + 1):
            roots.add(Root(RootKind.DIFF, i, j))
    for start, stop in _block_ranges(x):
        for i in range(start, stop):
            for j in range(i + 1, stop):
                roots.add(Root(RootKind.DIFF, i, j))
    return frozenset(roots)


def annihilating_roots(x: TorusElement) -> frozenset[Root]:
    """Positive roots with alpha(X) = 0 mod 2*pi (negatives implied)."""
    return frozenset(a for a in positive_roots(x.n) if root_value(a, x) == 0)


def lie_annihilating_roots(x: TorusElement) -> frozenset[Root]:
    """Positive roots with alpha(X) = 0 exactly (the Lie-algebra annihilator)."""
    return frozenset(a for a in positive_roots(x.n) if a.value(x.coords) == 0)


def annihilator(x: TorusElement) -> AnnihilatorDecomposition:
    """Type of the annihilating subsystem, cross-checked against enumeration."""
    decomp = AnnihilatorDecomposition(x.u, x.v, x.parts)
    if annihilating_roots(x) != _expected_annihilating(x):
        raise AssertionError(
            f"annihilator mismatch for {x}: enumeration disagrees with block structure"
        )
    return decomp


def lie_annihilator(x: TorusElement) -> AnnihilatorDecomposition:
    """Type of the Lie-algebra annihilator: the -1 block contributes SU(v), not D_v."""
    parts = x.parts + ((x.v,) if x.v >= 1 else ())
    decomp = AnnihilatorDecomposition(x.u, 0, parts)
    if lie_annihilating_roots(x) != _expected_lie_annihilating(x):
        raise AssertionError(
            f"Lie annihilator mismatch for {x}: enumeration disagrees with block structure"
        )
    return decomp


def conjugacy_class_dim(x: TorusElement) -> int:
    """dim C_x = 2 * #(positive roots not annihilating x)."""
    n, u, v = x.n, x.u, x.v
    return 2 * (n * n - u * u - v * (v - 1) - sum(s * (s - 1) // 2 for s in x.parts))


def adjoint_orbit_dim(x: TorusElement) -> int:
    """Dimension of the adjoint orbit of the canonical lift of x."""
    n, u, v = x.n, x.u, x.v
    return 2 * (n * n - u * u - v * (v - 1) // 2 - sum(s * (s - 1) // 2 for s in x.parts))


def partitions(k: int) -> Iterator[tuple[int, ...]]:
    """Partitions of k in descending-lex order; (k == 0) yields the empty partition."""
    if k == 0:
        yield ()
        return
    for first in range(k, 0, -1):
        for rest in partitions(k - first):
            if not rest or rest[0] <= first:
                yield (first,) + rest


def enumerate_types(n: int, include_central: bool = False) -> list[TorusElement]:
    """All canonical torus elements of rank n, in a fixed deterministic order."""
    if n < 1:
        raise ValueError(f"rank must be >= 1, got {n}")
    out: list[TorusElement] = []
    for u in range(n, -1, -1):
        for v in range(n - u, -1, -1):
            for parts in partitions(n - u - v):
                x = TorusElement.from_type(u, v, parts)
                if x.is_central and not include_central:
                    continue
                out.append(x)
    return out
