"""Eligibility: the exact test for absolute continuity of convolution products.

A tuple of conjugacy classes in SO(2n+1) is classified by the dominant
eigenvalue multiplicities of its elements; the product of the orbital
measures is absolutely continuous exactly when the tuple is eligible.
The companion test on the Lie algebra (adjoint orbits) is also provided,
as are the analogous combinatorics for the symplectic / even orthogonal
families, including the exceptional pairs whose status is open.
"""
from __future__ import annotations

import cmath
from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from typing import Sequence

from .rootsys import TorusElement


class DominantKind(Enum):
    B = "B"
    D = "D"
    BD = "BD"
    S = "S"


@dataclass(frozen=True)
class DominantClass:
    """Dominant type of an element: which eigenvalue carries the critical multiplicity.

    ``s_value`` is the size S_x of the dominant eigenspace; for kind BD the
    competing pair (2u+1, 2v) is kept and ``s_value`` is None.
    """

    kind: DominantKind
    s_value: int | None = None
    s_pair: tuple[int, int] | None = None

    def value_for_parity(self, parity: int) -> int:
        """S_x, using S^{(parity)} = (2u+1 if parity == 1 else 2v) for kind BD."""
        if self.kind is DominantKind.BD:
            assert self.s_pair is not None
            return self.s_pair[0] if parity == 1 else self.s_pair[1]
        assert self.s_value is not None
        return self.s_value


def dominant_class(x: TorusElement) -> DominantClass:
    """Classify x by its largest structured eigenvalue multiplicity.

    B when the +1 eigenspace dominates (u > v, 2u+1 > max s), D when the -1
    eigenspace dominates (v > u, 2v > max s), BD on the tie u = v with
    2v >= max s, S when some rotation eigenspace is largest.
    """
    u, v, s = x.u, x.v, x.max_part
    if u > v and 2 * u + 1 > s:
        return DominantClass(DominantKind.B, 2 * u + 1)
    if v > u and 2 * v > s:
        return DominantClass(DominantKind.D, 2 * v)
    if v == u and 2 * v >= s:
        return DominantClass(DominantKind.BD, None, (2 * u + 1, 2 * v))
    if s >= 2 * u + 1 and s >= 2 * v:
        return DominantClass(DominantKind.S, s)
    raise AssertionError(f"dominant classification is not total at {x}")


def parity(classes: Sequence[DominantClass]) -> int:
    """1 when the number of dominant-D elements is odd, else 2."""
    n_d = sum(1 for c in classes if c.kind is DominantKind.D)
    return 1 if n_d % 2 == 1 else 2


CASE_NA = "not-applicable"


@dataclass(frozen=True)
class EligibilityVerdict:
    eligible: bool
    case: str  # "i" | "ii" | "iii" | "iv" | "not-applicable"
    parity: int
    lhs: int
    rhs: int

    def to_dict(self) -> dict:
        return {
            "eligible": self.eligible,
            "case": self.case,
            "parity": self.parity,
            "lhs": self.lhs,
            "rhs": self.rhs,
        }


def decide_eligibility_classes(n: int, classes: Sequence[DominantClass]) -> EligibilityVerdict:
    """Eligibility from dominant classes alone (all elements non-central, rank n)."""
    if not classes:
        raise ValueError("empty tuple")
    L = len(classes)
    p = parity(classes)
    cap = (2 * n + 1) * (L - 1)
    if L == 1:
        return EligibilityVerdict(False, CASE_NA, p, classes[0].value_for_parity(p), 0)
    n_bd = sum(1 for c in classes if c.kind is DominantKind.BD)
    n_s = sum(1 for c in classes if c.kind is DominantKind.S)
    if n_bd + n_s >= 2:
        return EligibilityVerdict(True, "i", p, 0, 0)
    if n_s == 1 and n_bd == 0:
        lhs = sum(c.value_for_parity(p) for c in classes)
        return EligibilityVerdict(lhs <= cap, "ii", p, lhs, cap)
    if n_bd == 1 and n_s == 0:
        lhs = sum(c.value_for_parity(p) for c in classes)
        return EligibilityVerdict(lhs <= cap, "iii", p, lhs, cap)
    lhs = sum(c.value_for_parity(p) for c in classes)
    rhs = cap + p - 1
    return EligibilityVerdict(lhs <= rhs, "iv", p, lhs, rhs)


def _drop_central(xs: Sequence[TorusElement]) -> tuple[int, list[TorusElement]]:
    if not xs:
        raise ValueError("empty tuple")
    ranks = {x.n for x in xs}
    if len(ranks) != 1:
        raise ValueError(f"mixed ranks in tuple: {sorted(ranks)}")
    n = ranks.pop()
    if n < 2:
        raise ValueError(f"rank must be >= 2, got {n}")
    remaining = [x for x in xs if not x.is_central]
    if not remaining:
        raise ValueError("all elements are central; the product is a point mass")
    return n, remaining


def decide_eligibility(xs: Sequence[TorusElement]) -> EligibilityVerdict:
    """Eligibility of a tuple of conjugacy classes; central elements are dropped first."""
    n, remaining = _drop_central(xs)
    return decide_eligibility_classes(n, [dominant_class(x) for x in remaining])


def lie_dominant_value(x: TorusElement) -> int:
    """S^g of the canonical lift: max(2u, v, s_1, ..., s_m)."""
    return max(2 * x.u, x.v, x.max_part)


def decide_lie_eligibility(xs: Sequence[TorusElement]) -> EligibilityVerdict:
    """Eligibility of the lifted tuple of adjoint orbits: sum S^g <= 2n(L-1)."""
    n, remaining = _drop_central(xs)
    L = len(remaining)
    lhs = sum(lie_dominant_value(x) for x in remaining)
    rhs = 2 * n * (L - 1)
    return EligibilityVerdict(L > 1 and lhs <= rhs, CASE_NA, 2, lhs, rhs)


def _maximal_group_angle(x: TorusElement) -> Fraction:
    """Angle of the maximal group; ties go to the smallest angle."""
    s = x.max_part
    return min(a for a, k in x.angles if k == s)


def reduce_element(x: TorusElement) -> TorusElement:
    """Drop one coordinate of the dominant eigenvalue, producing a rank n-1 element."""
    if x.n < 3:
        raise ValueError(f"reduction needs rank >= 3, got {x.n}")
    if x.is_central:
        raise ValueError("central elements are not reducible")
    kind = dominant_class(x).kind
    if kind in (DominantKind.B, DominantKind.BD):
        return TorusElement(x.n - 1, x.u - 1, x.v, x.angles)
    if kind is DominantKind.D:
        return TorusElement(x.n - 1, x.u, x.v - 1, x.angles)
    a_star = _maximal_group_angle(x)
    angles = tuple(
        (a, s - 1 if a == a_star else s) for a, s in x.angles if not (a == a_star and s == 1)
    )
    return TorusElement(x.n - 1, x.u, x.v, angles)


def removed_coordinate(x: TorusElement) -> Fraction:
    """Torus coordinate (units of pi) removed by :func:`reduce_element`."""
    kind = dominant_class(x).kind
    if kind in (DominantKind.B, DominantKind.BD):
        return Fraction(0)
    if kind is DominantKind.D:
        return Fraction(1)
    return _maximal_group_angle(x)


@dataclass(frozen=True)
class NecessityCertificate:
    """Witness that an ineligible tuple cannot have an absolutely continuous product.

    Every product of conjugates carries each listed eigenvalue with
    multiplicity at least ``multiplicity_bound`` (= ``deficit``, the excess of
    the stacked dominant eigenspace dimensions over (L-1)(2n+1)).
    """

    forced_eigenvalues: tuple[complex, ...]
    description: str
    multiplicity_bound: int
    deficit: int
    angle: Fraction | None = None
    sign: int = 1

    def to_dict(self) -> dict:
        return {
            "forced": [[z.real, z.imag] for z in self.forced_eigenvalues],
            "label": self.description,
            "multiplicity_bound": self.multiplicity_bound,
            "deficit": self.deficit,
        }


def necessity_certificate(xs: Sequence[TorusElement]) -> NecessityCertificate | None:
    """Forced-eigenvalue certificate for an ineligible tuple; None when eligible."""
    n, remaining = _drop_central(xs)
    classes = [dominant_class(x) for x in remaining]
    verdict = decide_eligibility_classes(n, classes)
    if verdict.eligible:
        return None
    L = len(remaining)
    deficit = verdict.lhs - (2 * n + 1) * (L - 1)
    n_d = sum(1 for c in classes if c.kind is DominantKind.D)
    n_s = sum(1 for c in classes if c.kind is DominantKind.S)
    angle: Fraction | None = None
    if n_s == 1:
        # the rotation eigenvalue of the S element times the +-1 of the others
        idx = next(i for i, c in enumerate(classes) if c.kind is DominantKind.S)
        angle = _maximal_group_angle(remaining[idx])
        sign = -1 if n_d % 2 == 1 else 1
        zeta = sign * cmath.exp(1j * cmath.pi * float(angle))
        forced = (zeta, zeta.conjugate())
        desc = f"{'-' if sign == -1 else ''}exp(+-i*pi*{angle})"
    elif any(c.kind is DominantKind.BD for c in classes) or verdict.parity == 1:
        # one-BD case: the chosen +-1 eigenspace flips the product sign to -1
        # regardless of parity; all-B/D with odd #D forces -1 as well
        sign, forced, desc = -1, (-1.0 + 0.0j,), "-1"
    else:
        sign, forced, desc = 1, (1.0 + 0.0j,), "+1"
    return NecessityCertificate(
        forced_eigenvalues=forced,
        description=desc,
        multiplicity_bound=deficit,
        deficit=deficit,
        angle=angle,
        sign=sign,
    )


# ---------------------------------------------------------------------------
# Symplectic (C_n) and even orthogonal (D_n) combinatorics


@dataclass(frozen=True)
class CDElement:
    """Canonical element of Sp(n) (family C) or SO(2n) (family D).

    Eigenvalues +1 and -1 have pair-multiplicities u >= v; rotation groups
    are kept as a descending partition. Types read C_u x C_v x SU(...) or
    D_u x D_v x SU(...).
    """

    family: str
    n: int
    u: int
    v: int
    parts: tuple[int, ...] = ()

    def __post_init__(self) -> None:
        if self.family not in ("C", "D"):
            raise ValueError(f"family must be C or D, got {self.family}")
        object.__setattr__(self, "parts", tuple(sorted(self.parts, reverse=True)))
        if self.u < 0 or self.v < 0 or self.u < self.v:
            raise ValueError("need u >= v >= 0")
        if any(s < 1 for s in self.parts):
            raise ValueError("rotation multiplicities must be >= 1")
        if self.u + self.v + sum(self.parts) != self.n:
            raise ValueError("u + v + sum(s_j) != n")

    @property
    def s1(self) -> int:
        return self.parts[0] if self.parts else 0

    def dominant_value(self) -> int:
        """S_x: 2u when the +-1 pair blocks dominate (2u >= s_1), else s_1."""
        return 2 * self.u if 2 * self.u >= self.s1 else self.s1

    def label(self) -> str:
        f = self.family
        factors = []
        if self.u:
            factors.append(f"{f}{self.u}")
        if self.v:
            factors.append(f"{f}{self.v}")
        factors.extend(f"SU({s})" for s in self.parts)
        return "x".join(factors) if factors else "1"


def _check_cd_tuple(elems: Sequence[CDElement]) -> tuple[str, int]:
    if not elems:
        raise ValueError("empty tuple")
    families = {e.family for e in elems}
    ranks = {e.n for e in elems}
    if len(families) != 1 or len(ranks) != 1:
        raise ValueError("mixed families or ranks in tuple")
    return families.pop(), ranks.pop()


def cd_eligibility(elems: Sequence[CDElement]) -> EligibilityVerdict:
    """Eligibility for C_n / D_n tuples: sum S_x <= 2n(L-1)."""
    _, n = _check_cd_tuple(elems)
    L = len(elems)
    lhs = sum(e.dominant_value() for e in elems)
    rhs = 2 * n * (L - 1)
    return EligibilityVerdict(L > 1 and lhs <= rhs, CASE_NA, 2, lhs, rhs)


def _is_half_half(e: CDElement) -> bool:
    return e.n % 2 == 0 and e.u == e.v == e.n // 2 and not e.parts


def _is_su_n(e: CDElement) -> bool:
    return e.u == 0 and e.v == 0 and e.parts == (e.n,)


def _is_su_n_minus_1(e: CDElement) -> bool:
    n = e.n
    return (e.u, e.v, e.parts) in {(1, 0, (n - 1,)), (0, 0, (n - 1, 1))}


def _is_c_pair(e: CDElement, a: int, b: int) -> bool:
    """Type C_a x C_b with one trivial leftover coordinate when a + b = n - 1."""
    if a + b == e.n:
        return (e.u, e.v, e.parts) == (a, b, ())
    return (e.u, e.v, e.parts) == (a, b, (1,))


def cd_exceptional(x: CDElement, y: CDElement) -> tuple[bool, str | None]:
    """Whether the pair matches one of the exceptional patterns (clauses i-iii)."""
    family, n = _check_cd_tuple([x, y])
    for a, b in ((x, y), (y, x)):
        if _is_half_half(a) and (_is_half_half(b) or _is_su_n(b)):
            return True, "i"
    if family == "C":
        if n % 2 == 0:
            half, near = n // 2, n // 2 - 1
            for a, b in ((x, y), (y, x)):
                if _is_half_half(a) and _is_c_pair(b, half, near):
                    return True, "ii"
        else:
            hi, lo = (n + 1) // 2, (n - 1) // 2
            for a, b in ((x, y), (y, x)):
                if _is_c_pair(a, hi, lo) and _is_c_pair(b, lo, lo):
                    return True, "ii"
    if family == "D":
        for a, b in ((x, y), (y, x)):
            if _is_su_n(a) and (_is_su_n(b) or _is_su_n_minus_1(b)):
                return True, "iii"
    return False, None
