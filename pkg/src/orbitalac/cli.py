"""Command-line interface: classify, decide, verify, probe, sweep, brackets.

Exit codes: 0 success, 2 usage error, 3 ineligible tuple (decide), 4 oracle
disagreement or failed bracket audit.
"""
from __future__ import annotations

import argparse
import json
import os
import re
import sys
from concurrent.futures import ThreadPoolExecutor
from fractions import Fraction
from typing import Sequence

from . import oracle
from .eligibility import (
    decide_eligibility,
    decide_lie_eligibility,
    dominant_class,
    necessity_certificate,
)
from .liealg import weyl_bracket_check
from .rootsys import (
    TorusElement,
    adjoint_orbit_dim,
    annihilator,
    conjugacy_class_dim,
    lie_annihilator,
)

EXIT_OK = 0
EXIT_USAGE = 2
EXIT_INELIGIBLE = 3
EXIT_DISAGREE = 4

_B_RE = re.compile(r"B(\d+)")
_D_RE = re.compile(r"D(\d+)")
_SU_RE = re.compile(r"SU\((\d+)\)")


class UsageError(Exception):
    pass


def parse_label(text: str) -> tuple[int, int, tuple[int, ...]]:
    """Parse a type label like ``B2xD1xSU(3)`` into (u, v, parts).

    Labels are complete: u + v + sum(parts) is the rank. At most one B and
    one D factor; SU factors may repeat.
    """
    u: int | None = None
    v: int | None = None
    parts: list[int] = []
    for factor in text.split("x"):
        factor = factor.strip()
        if m := _B_RE.fullmatch(factor):
            if u is not None:
                raise UsageError(f"duplicate B factor in {text!r}")
            u = int(m.group(1))
        elif m := _D_RE.fullmatch(factor):
            if v is not None:
                raise UsageError(f"duplicate D factor in {text!r}")
            v = int(m.group(1))
        elif m := _SU_RE.fullmatch(factor):
            parts.append(int(m.group(1)))
        else:
            raise UsageError(
                f"bad factor {factor!r} in {text!r} (expected Bk, Dk, or SU(k))"
            )
    if (u is not None and u < 1) or (v is not None and v < 1) or any(s < 1 for s in parts):
        raise UsageError(f"factor sizes must be >= 1 in {text!r}")
    return u or 0, v or 0, tuple(parts)


def element_from_label(text: str, rank: int | None) -> TorusElement:
    u, v, parts = parse_label(text)
    total = u + v + sum(parts)
    if rank is not None and total != rank:
        raise UsageError(f"label {text!r} has rank {total}, expected {rank}")
    try:
        return TorusElement.from_type(u, v, parts)
    except ValueError as exc:
        raise UsageError(str(exc)) from exc


def element_from_spec(entry, rank: int | None) -> TorusElement:
    if isinstance(entry, str):
        return element_from_label(entry, rank)
    if not isinstance(entry, dict):
        raise UsageError(f"element must be a label string or an object, got {entry!r}")
    u = int(entry.get("u", 0))
    v = int(entry.get("v", 0))
    angles = []
    for grp in entry.get("angle_groups", []):
        angles.append((Fraction(int(grp["num"]), int(grp["den"])), int(grp.get("mult", 1))))
    n = rank if rank is not None else u + v + sum(s for _, s in angles)
    try:
        return TorusElement(n, u, v, tuple(angles))
    except (ValueError, ZeroDivisionError) as exc:
        raise UsageError(str(exc)) from exc


def load_tuple(args: argparse.Namespace) -> list[TorusElement]:
    """Build the tuple of torus elements from --tuple labels or a --spec file."""
    rank = getattr(args, "rank", None)
    labels = getattr(args, "tuple", None) or []
    spec_path = getattr(args, "spec", None)
    if labels and spec_path:
        raise UsageError("use either --tuple or --spec, not both")
    if spec_path:
        try:
            with open(spec_path) as fh:
                spec = json.load(fh)
        except (OSError, json.JSONDecodeError) as exc:
            raise UsageError(f"cannot read spec file {spec_path}: {exc}") from exc
        if rank is None:
            rank = spec.get("rank")
        elements = spec.get("elements", [])
        xs = [element_from_spec(e, rank) for e in elements]
    else:
        xs = [element_from_label(lbl, rank) for lbl in labels]
    if not xs:
        raise UsageError("no elements given; use --tuple LABEL (repeatable) or --spec FILE")
    if len({x.n for x in xs}) != 1:
        raise UsageError(f"mixed ranks in tuple: {sorted({x.n for x in xs})}")
    if any(x.is_central for x in xs) and not getattr(args, "allow_central", False):
        raise UsageError(
            "tuple contains the identity class; pass --allow-central to keep it"
        )
    return xs


def _json_default(obj):
    if isinstance(obj, Fraction):
        return str(obj)
    raise TypeError(f"not JSON serializable: {obj!r}")


def emit(payload: dict, args: argparse.Namespace) -> None:
    if args.format == "json":
        text = json.dumps(payload, indent=2, default=_json_default)
    else:
        text = "\n".join(_table_lines(payload))
    out_path = getattr(args, "out", None)
    if out_path:
        with open(out_path, "w") as fh:
            fh.write(text + "\n")
    else:
        print(text)


def _table_lines(payload: dict, prefix: str = "") -> list[str]:
    lines = []
    for key, value in payload.items():
        if isinstance(value, dict):
            lines.append(f"{prefix}{key}:")
            lines.extend(_table_lines(value, prefix + "  "))
        elif isinstance(value, list) and value and isinstance(value[0], dict):
            for k, item in enumerate(value):
                lines.append(f"{prefix}{key}[{k}]:")
                lines.extend(_table_lines(item, prefix + "  "))
        else:
            lines.append(f"{prefix}{key}: {value}")
    return lines


def _describe(x: TorusElement) -> dict:
    cls = dominant_class(x)
    return {
        "label": x.label(),
        "rank": x.n,
        "coords": [str(c) for c in x.coords],
        "annihilator": annihilator(x).label(),
        "lie_annihilator": lie_annihilator(x).label(),
        "conjugacy_class_dim": conjugacy_class_dim(x),
        "adjoint_orbit_dim": adjoint_orbit_dim(x),
        "dominant_kind": cls.kind.value,
        "dominant_value": cls.s_value if cls.s_pair is None else list(cls.s_pair),
        "is_central": x.is_central,
        "is_regular": x.is_regular,
    }


def cmd_classify(args: argparse.Namespace) -> int:
    xs = load_tuple(args)
    emit({"rank": xs[0].n, "elements": [_describe(x) for x in xs]}, args)
    return EXIT_OK


def cmd_decide(args: argparse.Namespace) -> int:
    xs = load_tuple(args)
    try:
        verdict = decide_eligibility(xs)
        lie_verdict = decide_lie_eligibility(xs)
        cert = necessity_certificate(xs)
    except ValueError as exc:
        raise UsageError(str(exc)) from exc
    emit(
        {
            "rank": xs[0].n,
            "types": [x.label() for x in xs],
            "group": verdict.to_dict(),
            "lie": lie_verdict.to_dict(),
            "certificate": cert.to_dict() if cert is not None else None,
        },
        args,
    )
    return EXIT_OK if verdict.eligible else EXIT_INELIGIBLE


def cmd_verify(args: argparse.Namespace) -> int:
    xs = load_tuple(args)
    try:
        record = oracle.evaluate_tuple(
            [x for x in xs if not x.is_central],
            trials=args.trials,
            samples=args.samples,
            rank_seed=oracle.derive_seed("rank", args.seed, xs[0].n, 0),
            probe_seed=oracle.derive_seed("probe", args.seed, xs[0].n, 0),
            tolerance=args.tol,
        )
    except ValueError as exc:
        raise UsageError(str(exc)) from exc
    emit(record.to_dict(), args)
    return EXIT_OK if record.agree else EXIT_DISAGREE


def cmd_probe(args: argparse.Namespace) -> int:
    xs = load_tuple(args)
    try:
        verdict = decide_eligibility(xs)
        if verdict.eligible:
            raise UsageError("tuple is eligible; there is no forced eigenvalue to probe")
        cert = necessity_certificate(xs)
        report = oracle.forced_eigenvalue_probe(
            xs, samples=args.samples, seed=args.seed, tolerance=args.tol
        )
    except ValueError as exc:
        raise UsageError(str(exc)) from exc
    payload = report.to_dict()
    payload["certificate"] = cert.to_dict()
    payload["ok"] = report.ok
    emit(payload, args)
    return EXIT_OK


def _record_line(record: oracle.SweepRecord) -> str:
    return json.dumps(record.to_dict(), separators=(",", ":"))


def cmd_sweep(args: argparse.Namespace) -> int:
    if args.rank is None:
        raise UsageError("sweep requires --rank")
    n = args.rank
    items = oracle.sweep_tuples(n, args.l_max, args.max_per_l, args.seed)

    existing: dict[str, str] = {}
    if args.skip_existing and args.out and os.path.exists(args.out):
        with open(args.out) as fh:
            for line in fh:
                line = line.rstrip("\n")
                if not line:
                    continue
                try:
                    types = json.loads(line).get("types")
                except json.JSONDecodeError:
                    continue
                if types is not None:
                    existing[json.dumps(types)] = line

    def work(k_xs: tuple[int, tuple[TorusElement, ...]]) -> str:
        k, xs = k_xs
        key = json.dumps([x.label() for x in xs])
        if key in existing:
            return existing[key]
        record = oracle.evaluate_tuple(
            xs,
            trials=args.trials,
            samples=args.samples,
            rank_seed=oracle.derive_seed("rank", args.seed, n, k),
            probe_seed=oracle.derive_seed("probe", args.seed, n, k),
            tolerance=args.tol,
        )
        return _record_line(record)

    if args.parallel > 1:
        with ThreadPoolExecutor(max_workers=args.parallel) as pool:
            lines = list(pool.map(work, enumerate(items)))
    else:
        lines = [work(item) for item in enumerate(items)]

    if args.out:
        with open(args.out, "w") as fh:
            for line in lines:
                fh.write(line + "\n")
    else:
        for line in lines:
            print(line)

    parsed = [json.loads(line) for line in lines]
    disagreements = [rec["types"] for rec in parsed if not rec["agree"]]
    summary = {
        "n": n,
        "l_max": args.l_max,
        "tuples": len(parsed),
        "eligible": sum(1 for r in parsed if r["decision"]["eligible"]),
        "ineligible": sum(1 for r in parsed if not r["decision"]["eligible"]),
        "reused": sum(
            1
            for _, xs in enumerate(items)
            if json.dumps([x.label() for x in xs]) in existing
        ),
        "disagreements": disagreements,
    }
    print(json.dumps(summary, default=_json_default))
    return EXIT_OK if not disagreements else EXIT_DISAGREE


def cmd_brackets(args: argparse.Namespace) -> int:
    if args.rank is None:
        raise UsageError("brackets requires --rank")
    report = weyl_bracket_check(args.rank)
    emit(report.to_dict(), args)
    return EXIT_OK if report.ok else EXIT_DISAGREE


def _add_tuple_args(p: argparse.ArgumentParser) -> None:
    p.add_argument("--rank", type=int, default=None, help="rank n of SO(2n+1)")
    p.add_argument(
        "--tuple",
        action="append",
        metavar="LABEL",
        help="type label like B2xD1xSU(3); repeat once per element",
    )
    p.add_argument("--spec", help="JSON file with {rank, elements: [...]}")
    p.add_argument(
        "--allow-central",
        action="store_true",
        help="keep identity classes instead of rejecting them",
    )


def _add_output_args(p: argparse.ArgumentParser) -> None:
    p.add_argument("--format", choices=("table", "json"), default="table")
    p.add_argument("--out", help="write output to this file instead of stdout")


def _add_oracle_args(p: argparse.ArgumentParser, trials: bool = True) -> None:
    if trials:
        p.add_argument("--trials", type=int, default=oracle.DEFAULT_TRIALS)
    p.add_argument("--samples", type=int, default=oracle.DEFAULT_SAMPLES)
    p.add_argument("--tol", type=float, default=oracle.DEFAULT_TOL)
    p.add_argument(
        "--seed",
        type=int,
        default=int(os.environ.get("ORBITAL_AC_SEED", "0")),
        help="base RNG seed (default: ORBITAL_AC_SEED or 0)",
    )


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="orbital-ac",
        description=(
            "Decide absolute continuity of convolutions of orbital measures on "
            "SO(2n+1) and verify the decision with a randomized matrix oracle."
        ),
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("classify", help="describe the conjugacy classes of a tuple")
    _add_tuple_args(p)
    _add_output_args(p)
    p.set_defaults(func=cmd_classify)

    p = sub.add_parser("decide", help="exact eligibility decision (exit 3 if ineligible)")
    _add_tuple_args(p)
    _add_output_args(p)
    p.set_defaults(func=cmd_decide)

    p = sub.add_parser("verify", help="decision plus oracle check (exit 4 on disagreement)")
    _add_tuple_args(p)
    _add_output_args(p)
    _add_oracle_args(p)
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("probe", help="forced-eigenvalue probe of an ineligible tuple")
    _add_tuple_args(p)
    _add_output_args(p)
    _add_oracle_args(p, trials=False)
    p.set_defaults(func=cmd_probe)

    p = sub.add_parser("sweep", help="cross-validate every tuple of a rank (JSONL records)")
    p.add_argument("--rank", type=int, default=None, help="rank n of SO(2n+1)")
    p.add_argument("--l-max", type=int, default=3, help="largest tuple length")
    p.add_argument(
        "--max-per-l",
        type=int,
        default=None,
        help="sample at most this many tuples per length (seeded)",
    )
    p.add_argument("--parallel", type=int, default=1, help="worker threads")
    p.add_argument(
        "--skip-existing",
        action="store_true",
        help="reuse records already present in --out (matched by types)",
    )
    _add_output_args(p)
    _add_oracle_args(p)
    p.set_defaults(func=cmd_sweep)

    p = sub.add_parser("brackets", help="audit the bracket grading of the root planes")
    p.add_argument("--rank", type=int, default=None, help="rank n of SO(2n+1)")
    _add_output_args(p)
    p.set_defaults(func=cmd_brackets)

    return parser


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
