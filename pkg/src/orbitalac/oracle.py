"""Randomized matrix oracle: rank tests, forced-eigenvalue probes, sweeps.

The oracle never consults the combinatorial decision: it samples Haar
conjugators, stacks tangent-space bases, and measures numerical rank, or
samples products of conjugates and inspects their spectra. Sweeps compare
oracle output against the eligibility verdict for every canonical tuple.
"""
from __future__ import annotations

import hashlib
import itertools
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np
import scipy.linalg

from . import kernels
from .eligibility import (
    EligibilityVerdict,
    decide_eligibility,
    necessity_certificate,
)
from .liealg import (
    AlgebraElement,
    GroupElement,
    RESIDUAL_TOL,
    COMPONENT_MIN,
    _root_cache,
    aligned_span_matrices,
    ambient_dim,
    complement_direction,
    embed_group,
    full_omega_basis,
    matrix_dim,
    omega_roots,
    omega_span,
    orthonormal_rows,
    span_matrices,
    subspace_residual,
    torus_matrix,
    triu_rc,
    unvec,
    vec,
)
from .rootsys import Root, TorusElement, enumerate_types

FULL_RANK = "FullRankFound"
NEVER_FULL_RANK = "NeverFullRank"
DEFAULT_TRIALS = 50
DEFAULT_SAMPLES = 100
DEFAULT_TOL = 1e-8
DISTINCT_SEPARATION = 1e-6


def derive_seed(*parts) -> int:
    """Stable sub-seed from a label and context values; independent of PYTHONHASHSEED."""
    text = ":".join(str(p) for p in parts)
    return int.from_bytes(hashlib.sha256(text.encode()).digest()[:8], "big") >> 1


@dataclass(frozen=True)
class RankCertificate:
    ambient_dim: int
    best_rank: int
    trials: int
    seed: int
    tolerance: float
    verdict: str
    found_trial: int

    def to_dict(self) -> dict:
        return {
            "ambient_dim": self.ambient_dim,
            "best_rank": self.best_rank,
            "trials": self.trials,
            "seed": self.seed,
            "tolerance": self.tolerance,
            "verdict": self.verdict,
            "found_trial": self.found_trial,
        }


@dataclass(frozen=True)
class ForcedEigenvalueReport:
    samples: int
    forced_eigenvalues: tuple[complex, ...]
    multiplicity_bound: int
    deficit: int
    observed_min_multiplicity: int
    max_eigenvalue_distance: float

    @property
    def ok(self) -> bool:
        return self.observed_min_multiplicity >= self.multiplicity_bound

    def to_dict(self) -> dict:
        return {
            "samples": self.samples,
            "forced": [[z.real, z.imag] for z in self.forced_eigenvalues],
            "multiplicity_bound": self.multiplicity_bound,
            "deficit": self.deficit,
            "observed_min_multiplicity": self.observed_min_multiplicity,
            "max_eigenvalue_distance": self.max_eigenvalue_distance,
        }


def _validated_tuple(xs: Sequence[TorusElement]) -> tuple[int, list[TorusElement]]:
    if not xs:
        raise ValueError("empty tuple")
    ranks = {x.n for x in xs}
    if len(ranks) != 1:
        raise ValueError(f"mixed ranks in tuple: {sorted(ranks)}")
    n = ranks.pop()
    if n < 2:
        raise ValueError(f"rank must be >= 2, got {n}")
    if any(x.is_central for x in xs):
        raise ValueError("central elements have no tangent directions; drop them first")
    if len(xs) < 2:
        raise ValueError("need at least two elements")
    return n, list(xs)


def rank_test(
    xs: Sequence[TorusElement],
    trials: int = DEFAULT_TRIALS,
    seed: int = 0,
    tolerance: float = DEFAULT_TOL,
) -> RankCertificate:
    """Search for Haar conjugators making the stacked tangent bases span so(2n+1).

    FullRankFound certifies absolute continuity of the convolution product;
    NeverFullRank over many trials is strong evidence of singularity.
    """
    n, xs = _validated_tuple(xs)
    if trials < 1:
        raise ValueError("trials must be >= 1")
    d = matrix_dim(n)
    mats_list = [span_matrices(x) for x in xs]
    offsets = np.cumsum([0] + [m.shape[0] for m in mats_list]).astype(np.int64)
    mats = np.ascontiguousarray(np.concatenate(mats_list))
    rows, cols = triu_rc(d)
    gauss = np.random.default_rng(seed).standard_normal((trials, len(xs), d, d))
    best, found = kernels.best_rank_over_trials(mats, offsets, gauss, rows, cols, tolerance)
    ambient = ambient_dim(n)
    verdict = FULL_RANK if best == ambient else NEVER_FULL_RANK
    return RankCertificate(ambient, int(best), trials, seed, tolerance, verdict, int(found))


def find_spanning_conjugators(
    xs: Sequence[TorusElement],
    trials: int = DEFAULT_TRIALS,
    seed: int = 0,
    tolerance: float = DEFAULT_TOL,
) -> list[GroupElement] | None:
    """Replay the first full-rank trial of rank_test and return its conjugators."""
    cert = rank_test(xs, trials, seed, tolerance)
    if cert.found_trial < 0:
        return None
    n = xs[0].n
    d = matrix_dim(n)
    gauss = np.random.default_rng(seed).standard_normal((cert.trials, len(xs), d, d))
    return [
        GroupElement(n, kernels.haar_from_gauss(gauss[cert.found_trial, i]))
        for i in range(len(xs))
    ]


def _product_spectra(
    xs: Sequence[TorusElement], samples: int, seed: int
) -> np.ndarray:
    n = xs[0].n
    d = matrix_dim(n)
    xmats = np.ascontiguousarray(np.stack([torus_matrix(x).entries for x in xs]))
    gauss = np.random.default_rng(seed).standard_normal((samples, len(xs), d, d))
    return kernels.product_spectra(xmats, gauss)


def forced_eigenvalue_probe(
    xs: Sequence[TorusElement],
    samples: int = DEFAULT_SAMPLES,
    seed: int = 0,
    tolerance: float = DEFAULT_TOL,
) -> ForcedEigenvalueReport:
    """Check that sampled products of conjugates carry the certified eigenvalue.

    For conjugate-pair certificates both members are counted and the worse of
    the two is reported.
    """
    cert = necessity_certificate(xs)
    if cert is None:
        raise ValueError("tuple is eligible; there is no forced eigenvalue to probe")
    if samples < 1:
        raise ValueError("samples must be >= 1")
    remaining = [x for x in xs if not x.is_central]
    spectra = _product_spectra(remaining, samples, seed)
    bound = cert.multiplicity_bound
    d = spectra.shape[1]
    min_mult = d
    max_dist = 0.0
    for s in range(samples):
        for z in cert.forced_eigenvalues:
            dists = np.sort(np.abs(spectra[s] - z))
            min_mult = min(min_mult, int(np.sum(dists < tolerance)))
            max_dist = max(max_dist, float(dists[min(bound, d) - 1]))
    return ForcedEigenvalueReport(
        samples=samples,
        forced_eigenvalues=cert.forced_eigenvalues,
        multiplicity_bound=bound,
        deficit=cert.deficit,
        observed_min_multiplicity=min_mult,
        max_eigenvalue_distance=max_dist,
    )


def distinct_eigenvalue_probe(
    xs: Sequence[TorusElement],
    samples: int = DEFAULT_SAMPLES,
    seed: int = 0,
    separation: float = DISTINCT_SEPARATION,
) -> bool:
    """Whether some sampled product of conjugates has all eigenvalues separated."""
    verdict = decide_eligibility(xs)
    if not verdict.eligible:
        raise ValueError("tuple is ineligible; products have repeated forced eigenvalues")
    remaining = [x for x in xs if not x.is_central]
    spectra = _product_spectra(remaining, samples, seed)
    for s in range(spectra.shape[0]):
        spec = spectra[s]
        gaps = np.abs(spec[:, None] - spec[None, :])
        np.fill_diagonal(gaps, np.inf)
        if float(gaps.min()) > separation:
            return True
    return False


# ---------------------------------------------------------------------------
# Induction-step checker


@dataclass(frozen=True)
class StrategyReport:
    """Numerical status of the three induction hypotheses for one tuple."""

    span_condition: bool
    invariance_condition: bool
    transversality_condition: bool
    details: dict

    @property
    def ok(self) -> bool:
        return self.span_condition and self.invariance_condition and self.transversality_condition


def strategy_check(
    xs: Sequence[TorusElement],
    omega0_root: Root,
    m: AlgebraElement,
    conjugators: Sequence[GroupElement],
) -> StrategyReport:
    """Verify the three span/invariance/transversality hypotheses numerically.

    xs are reduction-aligned (dropped coordinate first); conjugators are rank
    n-1 elements acting through the lower-right embedding; omega0_root selects
    a plane among the new directions of the last element; m is the probe
    direction whose one-parameter flow must cross the missing line.
    """
    n, xs = _validated_tuple(xs)
    if n < 3:
        raise ValueError(f"induction step needs rank >= 3, got {n}")
    if len(conjugators) != len(xs) - 1:
        raise ValueError("need one conjugator per element except the last")
    if any(g.n != n - 1 for g in conjugators):
        raise ValueError(f"conjugators must have rank {n - 1}")
    if m.n != n:
        raise ValueError(f"probe direction must have rank {n}")

    cache = _root_cache(n)
    rows_idx, cols_idx = triu_rc(cache.d)
    omega_rows = full_omega_basis(n).basis
    x_last = xs[-1]
    last_omega = omega_roots(x_last)
    if omega0_root not in last_omega:
        raise ValueError(
            f"{omega0_root} is not among the new directions of the last element"
        )

    # (i) conjugated new directions plus the un-conjugated remainder span omega
    blocks = []
    for x, g in zip(xs[:-1], conjugators):
        g_n = embed_group(g)
        om = omega_span(x)
        mats = np.array([unvec(r, cache.d) for r in om.basis])
        blocks.append(kernels.conjugate_coords(g_n.entries, mats, rows_idx, cols_idx))
    rest = [a for a in last_omega if a != omega0_root]
    if rest:
        blocks.append(np.vstack([cache.planes[a] for a in rest]))
    stacked = np.vstack(blocks)
    containment = subspace_residual(stacked, omega_rows)
    span_rank = orthonormal_rows(stacked).shape[0]
    cond_i = containment < RESIDUAL_TOL and span_rank == omega_rows.shape[0]

    # (ii) the ad(m)-closure of the last tangent span minus omega0 misses the
    # complement line
    tau = complement_direction(n)
    _, aligned_roots = aligned_span_matrices(x_last)
    base_roots = [a for a in aligned_roots if a != omega0_root]
    basis = orthonormal_rows(np.vstack([cache.planes[a] for a in base_roots]))
    for _ in range(cache.p):
        mats = np.array([unvec(r, cache.d) for r in basis])
        images = np.array(
            [vec(m.entries @ y - y @ m.entries) for y in mats]
        )
        grown = orthonormal_rows(np.vstack([basis, images]))
        if grown.shape[0] == basis.shape[0]:
            basis = grown
            break
        basis = grown
    leak = float(np.max(np.abs(basis @ tau)))
    cond_ii = leak < RESIDUAL_TOL

    # (iii) the flow of m pushes the omega0 plane across the complement line
    omega0_mats = [unvec(r, cache.d) for r in cache.planes[omega0_root]]
    push = {}
    for t in (0.05, -0.05, 0.1, -0.1):
        a_t = scipy.linalg.expm(t * m.entries)
        comp = max(
            abs(float(vec(a_t @ y @ a_t.T) @ tau)) for y in omega0_mats
        )
        push[t] = comp
    cond_iii = all(c > COMPONENT_MIN for c in push.values())

    return StrategyReport(
        span_condition=cond_i,
        invariance_condition=cond_ii,
        transversality_condition=cond_iii,
        details={
            "span_rank": span_rank,
            "span_dim_required": int(omega_rows.shape[0]),
            "containment_residual": containment,
            "closure_dim": int(basis.shape[0]),
            "complement_leak": leak,
            "push_components": push,
        },
    )


# ---------------------------------------------------------------------------
# Sweeps


@dataclass(frozen=True)
class SweepRecord:
    n: int
    types: tuple[str, ...]
    decision: EligibilityVerdict
    rank_certificate: RankCertificate
    probe: ForcedEigenvalueReport | None
    agree: bool
    wall_ms: float = 0.0

    def to_dict(self, include_timing: bool = False) -> dict:
        out = {
            "n": self.n,
            "L": len(self.types),
            "types": list(self.types),
            "decision": self.decision.to_dict(),
            "rank_certificate": self.rank_certificate.to_dict(),
            "probe": self.probe.to_dict() if self.probe is not None else None,
            "agree": self.agree,
        }
        if include_timing:
            out["wall_ms"] = self.wall_ms
        return out


def sweep_tuples(
    n: int, l_max: int, max_per_l: int | None = None, seed: int = 0
) -> list[tuple[TorusElement, ...]]:
    """All canonical non-central tuples with 2 <= L <= l_max, optionally sampled."""
    if l_max < 2:
        raise ValueError("l_max must be >= 2")
    types = enumerate_types(n)
    out: list[tuple[TorusElement, ...]] = []
    for L in range(2, l_max + 1):
        combos = list(itertools.combinations_with_replacement(types, L))
        if max_per_l is not None and len(combos) > max_per_l:
            rng = np.random.default_rng(derive_seed("sweep-sample", n, L, seed))
            idx = rng.choice(len(combos), size=max_per_l, replace=False)
            combos = [combos[int(k)] for k in np.sort(idx)]
        out.extend(combos)
    return out


def evaluate_tuple(
    xs: Sequence[TorusElement],
    trials: int = DEFAULT_TRIALS,
    samples: int = DEFAULT_SAMPLES,
    rank_seed: int = 0,
    probe_seed: int = 0,
    tolerance: float = DEFAULT_TOL,
) -> SweepRecord:
    """Decide one tuple and verify the decision with the oracle."""
    start = time.perf_counter()
    verdict = decide_eligibility(xs)
    cert = rank_test(xs, trials, rank_seed, tolerance)
    probe = None
    if not verdict.eligible:
        probe = forced_eigenvalue_probe(xs, samples, probe_seed, tolerance)
    agree = verdict.eligible == (cert.verdict == FULL_RANK)
    if probe is not None:
        agree = agree and probe.ok and probe.max_eigenvalue_distance < tolerance
    return SweepRecord(
        n=xs[0].n,
        types=tuple(x.label() for x in xs),
        decision=verdict,
        rank_certificate=cert,
        probe=probe,
        agree=agree,
        wall_ms=(time.perf_counter() - start) * 1000.0,
    )


def cross_validate(
    n: int,
    l_max: int,
    trials: int = DEFAULT_TRIALS,
    samples: int = DEFAULT_SAMPLES,
    seed: int = 0,
    tolerance: float = DEFAULT_TOL,
    max_per_l: int | None = None,
    parallel: int = 1,
    sink: Callable[[SweepRecord], None] | None = None,
) -> tuple[list[SweepRecord], dict]:
    """Compare the eligibility decision with the oracle for every canonical tuple.

    Deterministic for a fixed seed and configuration: each tuple derives its
    own rank/probe seeds from (seed, n, item index), so parallelism does not
    change the output. Disagreements are reported, not raised.
    """
    start = time.perf_counter()
    items = sweep_tuples(n, l_max, max_per_l, seed)

    def work(k_xs: tuple[int, tuple[TorusElement, ...]]) -> SweepRecord:
        k, xs = k_xs
        return evaluate_tuple(
            xs,
            trials=trials,
            samples=samples,
            rank_seed=derive_seed("rank", seed, n, k),
            probe_seed=derive_seed("probe", seed, n, k),
            tolerance=tolerance,
        )

    if parallel > 1:
        with ThreadPoolExecutor(max_workers=parallel) as pool:
            records = list(pool.map(work, enumerate(items)))
    else:
        records = [work(item) for item in enumerate(items)]
    if sink is not None:
        for record in records:
            sink(record)

    disagreements = [list(r.types) for r in records if not r.agree]
    summary = {
        "n": n,
        "l_max": l_max,
        "tuples": len(records),
        "eligible": sum(1 for r in records if r.decision.eligible),
        "ineligible": sum(1 for r in records if not r.decision.eligible),
        "disagreements": disagreements,
        "agreement_rate": 1.0 if not records else 1.0 - len(disagreements) / len(records),
        "elapsed_s": time.perf_counter() - start,
    }
    return records, summary
