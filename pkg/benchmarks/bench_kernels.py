"""Benchmark the two kernel lanes (pure numpy vs numba) on identical inputs.

Both lanes consume the same pre-drawn Gaussian arrays, so the comparison is
purely about execution speed; verdict-level outputs are asserted equal before
timing. Numba JIT compilation happens in an untimed warmup pass.

Usage: python3 benchmarks/bench_kernels.py [--rank 4] [--length 3]
       [--trials 30] [--samples 50] [--repeats 5]
"""
from __future__ import annotations

import argparse
import statistics
import time

import numpy as np

from orbitalac.kernels import _numpy as numpy_lane
from orbitalac.liealg import matrix_dim, span_matrices, torus_matrix, triu_rc
from orbitalac.rootsys import TorusElement

try:
    from orbitalac.kernels import _numba as numba_lane
except ImportError:
    numba_lane = None


def build_workload(rank: int, length: int, trials: int, samples: int, seed: int):
    """The exact arrays rank_test and the probe feed to the kernels."""
    x = TorusElement.from_type(0, 0, (1,) * rank)  # regular: largest span
    d = matrix_dim(rank)
    mats_list = [span_matrices(x)] * length
    offsets = np.cumsum([0] + [m.shape[0] for m in mats_list]).astype(np.int64)
    mats = np.ascontiguousarray(np.concatenate(mats_list))
    rows, cols = triu_rc(d)
    rng = np.random.default_rng(seed)
    return {
        "mats": mats,
        "offsets": offsets,
        "rows": rows,
        "cols": cols,
        "rank_gauss": rng.standard_normal((trials, length, d, d)),
        "xmats": np.ascontiguousarray(
            np.stack([torus_matrix(x).entries] * length)
        ),
        "spec_gauss": rng.standard_normal((samples, length, d, d)),
        "haar_gauss": rng.standard_normal((200, d, d)),
        "one_haar": numpy_lane.haar_from_gauss(rng.standard_normal((d, d))),
    }


def make_cases(w):
    return {
        "haar_from_gauss x200": lambda lane: [
            lane.haar_from_gauss(g) for g in w["haar_gauss"]
        ],
        "conjugate_coords": lambda lane: lane.conjugate_coords(
            w["one_haar"], w["mats"], w["rows"], w["cols"]
        ),
        "best_rank_over_trials": lambda lane: lane.best_rank_over_trials(
            w["mats"], w["offsets"], w["rank_gauss"], w["rows"], w["cols"], 1e-8
        ),
        "product_spectra": lambda lane: lane.product_spectra(
            w["xmats"], w["spec_gauss"]
        ),
    }


def check_agreement(w):
    """Lanes must agree before timing means anything."""
    cases = make_cases(w)
    rank_np = cases["best_rank_over_trials"](numpy_lane)
    rank_nb = cases["best_rank_over_trials"](numba_lane)
    assert rank_np == rank_nb, f"rank kernels disagree: {rank_np} vs {rank_nb}"
    conj_np = cases["conjugate_coords"](numpy_lane)
    conj_nb = cases["conjugate_coords"](numba_lane)
    assert np.allclose(conj_np, conj_nb, atol=1e-12)
    spec_np = np.sort_complex(cases["product_spectra"](numpy_lane))
    spec_nb = np.sort_complex(cases["product_spectra"](numba_lane))
    assert np.allclose(spec_np, spec_nb, atol=1e-9)


def time_case(fn, lane, repeats: int) -> float:
    fn(lane)  # warmup: numba compilation / cache load, BLAS thread spin-up
    times = []
    for _ in range(repeats):
        start = time.perf_counter()
        fn(lane)
        times.append(time.perf_counter() - start)
    return statistics.median(times) * 1000.0


def main() -> int:
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--rank", type=int, default=4)
    parser.add_argument("--length", type=int, default=3)
    parser.add_argument("--trials", type=int, default=30)
    parser.add_argument("--samples", type=int, default=50)
    parser.add_argument("--repeats", type=int, default=5)
    parser.add_argument("--seed", type=int, default=0)
    args = parser.parse_args()

    w = build_workload(args.rank, args.length, args.trials, args.samples, args.seed)
    d = matrix_dim(args.rank)
    print(
        f"workload: rank {args.rank} (matrices {d}x{d}), tuple length "
        f"{args.length}, {args.trials} rank trials, {args.samples} spectra "
        f"samples, median of {args.repeats} runs"
    )
    if numba_lane is None:
        print("numba unavailable; timing the numpy lane only\n")
    else:
        check_agreement(w)

    header = f"{'kernel':<24} {'numpy ms':>10} {'numba ms':>10} {'speedup':>8}"
    print(header)
    print("-" * len(header))
    for name, fn in make_cases(w).items():
        t_np = time_case(fn, numpy_lane, args.repeats)
        if numba_lane is None:
            print(f"{name:<24} {t_np:>10.2f} {'-':>10} {'-':>8}")
        else:
            t_nb = time_case(fn, numba_lane, args.repeats)
            print(f"{name:<24} {t_np:>10.2f} {t_nb:>10.2f} {t_np / t_nb:>7.1f}x")
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
