"""Randomized oracle: rank tests, probes, strategy checker, sweeps."""
import numpy as np
import pytest

from orbitalac.eligibility import reduce_element
from orbitalac.liealg import (
    GroupElement,
    ambient_dim,
    omega_roots,
    root_space,
    tangent_space,
)
from orbitalac.oracle import (
    FULL_RANK,
    NEVER_FULL_RANK,
    cross_validate,
    derive_seed,
    distinct_eigenvalue_probe,
    evaluate_tuple,
    find_spanning_conjugators,
    forced_eigenvalue_probe,
    rank_test,
    strategy_check,
    sweep_tuples,
)
from orbitalac.rootsys import Root, RootKind, TorusElement, conjugacy_class_dim

T = TorusElement.from_type

D2 = T(0, 2, ())
REG2 = T(0, 0, (1, 1))


def test_derive_seed_stable_and_distinct():
    assert derive_seed("rank", 0, 2, 1) == derive_seed("rank", 0, 2, 1)
    assert derive_seed("rank", 0, 2, 1) != derive_seed("rank", 0, 2, 2)
    assert derive_seed("rank", 0, 2, 1) != derive_seed("probe", 0, 2, 1)
    assert 0 <= derive_seed("x") < 2**63


def test_rank_test_validation():
    with pytest.raises(ValueError):
        rank_test([D2])
    with pytest.raises(ValueError):
        rank_test([D2, TorusElement.identity(2)])
    with pytest.raises(ValueError):
        rank_test([D2, T(0, 3, ())])
    with pytest.raises(ValueError):
        rank_test([D2, D2], trials=0)


def test_rank_test_verdicts():
    cert = rank_test([D2, REG2], trials=20, seed=11)
    assert cert.verdict == FULL_RANK
    assert cert.best_rank == cert.ambient_dim == 10
    assert cert.found_trial >= 0

    cert = rank_test([D2, D2], trials=20, seed=11)
    assert cert.verdict == NEVER_FULL_RANK
    assert cert.best_rank < 10 and cert.found_trial == -1


def test_rank_test_bound_by_stacked_dims():
    for xs in ([D2, D2], [D2, REG2], [D2, D2, D2]):
        cert = rank_test(xs, trials=5, seed=1)
        stacked = sum(conjugacy_class_dim(x) for x in xs)
        assert cert.best_rank <= min(stacked, ambient_dim(2))


def test_rank_test_deterministic():
    a = rank_test([D2, D2], trials=10, seed=42)
    b = rank_test([D2, D2], trials=10, seed=42)
    assert a == b


def test_find_spanning_conjugators_replays_certificate():
    gs = find_spanning_conjugators([D2, REG2], trials=20, seed=11)
    assert gs is not None and len(gs) == 2
    assert all(isinstance(g, GroupElement) for g in gs)
    rows = np.vstack(
        [tangent_space(x, g).basis for x, g in zip([D2, REG2], gs)]
    )
    s = np.linalg.svd(rows, compute_uv=False)
    assert int(np.sum(s > 1e-8 * s[0])) == ambient_dim(2)
    assert find_spanning_conjugators([D2, D2], trials=5, seed=1) is None


def test_forced_eigenvalue_probe():
    rep = forced_eigenvalue_probe([D2, D2], samples=50, seed=7)
    assert rep.multiplicity_bound == 3
    assert rep.observed_min_multiplicity >= 3
    assert rep.max_eigenvalue_distance < 1e-8
    assert rep.ok


def test_forced_eigenvalue_probe_rotation_case():
    rep = forced_eigenvalue_probe([T(0, 0, (2,)), D2], samples=50, seed=7)
    assert len(rep.forced_eigenvalues) == 2
    assert rep.observed_min_multiplicity >= rep.multiplicity_bound == 1
    assert rep.max_eigenvalue_distance < 1e-8


def test_forced_eigenvalue_probe_errors():
    with pytest.raises(ValueError):
        forced_eigenvalue_probe([D2, REG2])
    with pytest.raises(ValueError):
        forced_eigenvalue_probe([D2, D2], samples=0)


def test_forced_eigenvalue_probe_ignores_central():
    e = TorusElement.identity(2)
    a = forced_eigenvalue_probe([D2, D2], samples=10, seed=3)
    b = forced_eigenvalue_probe([e, D2, D2], samples=10, seed=3)
    assert a == b


def test_distinct_eigenvalue_probe():
    assert distinct_eigenvalue_probe([D2, REG2], samples=50, seed=5)
    assert distinct_eigenvalue_probe([REG2, REG2], samples=50, seed=5)
    with pytest.raises(ValueError):
        distinct_eigenvalue_probe([D2, D2])


def test_strategy_check_replays_induction_step():
    d3 = T(0, 3, ())
    reg = T(0, 0, (1, 1, 1))
    xs = [d3, d3, reg]
    reduced = [reduce_element(x) for x in xs]
    gs = find_spanning_conjugators(reduced, trials=20, seed=5)
    assert gs is not None
    e1 = Root(RootKind.SHORT, 1)
    m = root_space(e1, 3).first
    rep = strategy_check(xs, e1, m, gs[:2])
    assert rep.span_condition and rep.invariance_condition and rep.transversality_condition
    assert rep.ok
    assert rep.details["span_dim_required"] == 10
    assert rep.details["complement_leak"] < 1e-8
    assert all(c > 1e-10 for c in rep.details["push_components"].values())


def test_strategy_check_validation():
    d3 = T(0, 3, ())
    reg = T(0, 0, (1, 1, 1))
    xs = [d3, d3, reg]
    m = root_space(Root(RootKind.SHORT, 1), 3).first
    g2 = GroupElement.identity(2)
    with pytest.raises(ValueError):  # omega0 not among the last element's new planes
        strategy_check([reg, reg, d3], Root(RootKind.DIFF, 1, 2), m, [g2, g2])
    with pytest.raises(ValueError):  # wrong number of conjugators
        strategy_check(xs, Root(RootKind.SHORT, 1), m, [g2])
    with pytest.raises(ValueError):  # conjugators must have rank n-1
        strategy_check(xs, Root(RootKind.SHORT, 1), m, [GroupElement.identity(3)] * 2)
    with pytest.raises(ValueError):  # induction needs rank >= 3
        strategy_check([D2, D2], Root(RootKind.SHORT, 1), m, [g2])


def test_omega0_must_be_new_direction():
    d3 = T(0, 3, ())
    assert [str(a) for a in omega_roots(d3)] == ["e1"]
    m = root_space(Root(RootKind.SHORT, 1), 3).first
    g2 = GroupElement.identity(2)
    with pytest.raises(ValueError):
        strategy_check(
            [d3, d3, d3], Root(RootKind.SUM, 1, 2), m, [g2, g2]
        )


def test_sweep_tuples_enumeration():
    tuples = sweep_tuples(2, 3)
    assert len(tuples) == 21 + 56
    assert all(2 <= len(t) <= 3 for t in tuples)
    sampled = sweep_tuples(2, 3, max_per_l=10, seed=0)
    assert len(sampled) == 20
    assert sampled == sweep_tuples(2, 3, max_per_l=10, seed=0)
    with pytest.raises(ValueError):
        sweep_tuples(2, 1)


def test_evaluate_tuple_record():
    rec = evaluate_tuple([D2, D2], trials=10, samples=10, rank_seed=1, probe_seed=2)
    assert rec.types == ("D2", "D2")
    assert not rec.decision.eligible
    assert rec.probe is not None and rec.agree
    d = rec.to_dict()
    assert list(d.keys()) == [
        "n", "L", "types", "decision", "rank_certificate", "probe", "agree",
    ]
    assert "wall_ms" in rec.to_dict(include_timing=True)

    rec = evaluate_tuple([D2, REG2], trials=10, samples=10, rank_seed=1, probe_seed=2)
    assert rec.probe is None and rec.agree


def test_cross_validate_small_sweep():
    records, summary = cross_validate(2, 2, trials=15, samples=20, seed=0)
    assert summary["tuples"] == len(records) == 21
    assert summary["eligible"] == 17 and summary["ineligible"] == 4
    assert summary["disagreements"] == []
    assert summary["agreement_rate"] == 1.0
    ineligible = {tuple(r.types) for r in records if not r.decision.eligible}
    assert ineligible == {
        ("D2", "D2"),
        ("B1xD1", "D2"),
        ("B1xSU(1)", "D2"),
        ("D2", "SU(2)"),
    }
    for r in records:
        assert (r.probe is not None) == (not r.decision.eligible)


def test_cross_validate_parallel_deterministic():
    seq, _ = cross_validate(2, 2, trials=10, samples=10, seed=3, parallel=1)
    par, _ = cross_validate(2, 2, trials=10, samples=10, seed=3, parallel=4)
    assert [r.to_dict() for r in seq] == [r.to_dict() for r in par]


def test_cross_validate_sink_order():
    seen = []
    records, _ = cross_validate(2, 2, trials=5, samples=5, seed=0, sink=seen.append)
    assert seen == records
