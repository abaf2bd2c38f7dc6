"""Numerical so(2n+1) model: root planes, tangent spans, embeddings, brackets."""
import math

import numpy as np
import pytest
import scipy.linalg

from orbitalac.liealg import (
    AlgebraElement,
    GroupElement,
    ad,
    adjoint,
    aligned_coords,
    aligned_span_matrices,
    ambient_dim,
    complement_direction,
    embed_algebra,
    embed_group,
    exp_alg,
    first_coordinate_roots,
    full_omega_basis,
    haar_group,
    lift,
    matrix_dim,
    nonannihilating_span,
    omega_roots,
    omega_span,
    orthonormal_rows,
    random_skew,
    root_plane_action,
    root_space,
    span_matrices,
    subalgebra_rows,
    subspace_residual,
    tangent_space,
    torus_matrix,
    triu_rc,
    unvec,
    vec,
    weyl_bracket_check,
    _root_cache,
)
from orbitalac.rootsys import (
    Root,
    RootKind,
    TorusElement,
    conjugacy_class_dim,
    enumerate_types,
    positive_roots,
)
from orbitalac.eligibility import reduce_element, removed_coordinate

T = TorusElement.from_type


def test_vec_unvec_round_trip():
    rng = np.random.default_rng(0)
    for n in (2, 3):
        d = matrix_dim(n)
        y = random_skew(n, rng).entries
        coords = vec(y)
        assert coords.shape == (ambient_dim(n),)
        assert np.allclose(unvec(coords, d), y)
        assert abs(np.linalg.norm(coords) - np.linalg.norm(y)) < 1e-12


def test_algebra_element_validation():
    with pytest.raises(ValueError):
        AlgebraElement(2, np.eye(5))
    with pytest.raises(ValueError):
        AlgebraElement(2, np.zeros((4, 4)))
    assert AlgebraElement.zero(2).norm() == 0.0


def test_group_element_validation():
    with pytest.raises(ValueError):
        GroupElement(2, 2.0 * np.eye(5))
    flip = np.eye(5)
    flip[0, 0] = -1.0
    with pytest.raises(ValueError):
        GroupElement(2, flip)  # determinant -1
    GroupElement.identity(2)


def test_torus_matrix_spectrum():
    x = T(0, 2, ())
    w = np.linalg.eigvals(torus_matrix(x).entries)
    assert np.allclose(np.sort(w.real), [-1, -1, -1, -1, 1], atol=1e-12)
    y = T(1, 0, (1,))
    w = sorted(np.linalg.eigvals(torus_matrix(y).entries), key=lambda z: (z.real, z.imag))
    expected = sorted(
        [1, 1, 1, np.exp(1j * np.pi / 3), np.exp(-1j * np.pi / 3)],
        key=lambda z: (np.real(z), np.imag(z)),
    )
    assert np.allclose(w, expected, atol=1e-12)


def test_exp_of_lift_is_torus_matrix():
    for n in range(2, 6):
        for x in enumerate_types(n, include_central=True):
            err = np.abs(exp_alg(lift(x)).entries - torus_matrix(x).entries).max()
            assert err < 1e-10, (x, err)


def test_adjoint_of_exp_matches_exp_of_ad():
    rng = np.random.default_rng(1)
    for n in (2, 3):
        d, p = matrix_dim(n), ambient_dim(n)
        eye = np.eye(p)
        for _ in range(5):
            m = random_skew(n, rng)
            m = AlgebraElement(n, m.entries / max(1.0, m.norm()))
            ad_mat = np.empty((p, p))
            for t in range(p):
                ad_mat[:, t] = vec(ad(m, AlgebraElement(n, unvec(eye[t], d))).entries)
            g = exp_alg(m)
            ad_g = np.empty((p, p))
            for t in range(p):
                ad_g[:, t] = vec(adjoint(g, AlgebraElement(n, unvec(eye[t], d))).entries)
            assert np.abs(ad_g - scipy.linalg.expm(ad_mat)).max() < 1e-10


def test_frobenius_norm_ad_invariant():
    rng = np.random.default_rng(2)
    n = 3
    for _ in range(100):
        g = haar_group(n, rng)
        y = random_skew(n, rng)
        assert abs(adjoint(g, y).norm() - y.norm()) < 1e-12


def test_jacobi_identity():
    rng = np.random.default_rng(3)
    for _ in range(10):
        a, b, c = (random_skew(3, rng) for _ in range(3))
        total = (
            ad(a, ad(b, c)).entries + ad(b, ad(c, a)).entries + ad(c, ad(a, b)).entries
        )
        assert np.abs(total).max() < 1e-10


def test_root_space_rotation_action():
    rng = np.random.default_rng(4)
    for n in (2, 3, 4):
        d = matrix_dim(n)
        theta = rng.uniform(-1.0, 1.0, n)
        h = np.zeros((d, d))
        for k in range(n):
            h[2 * k, 2 * k + 1] = -theta[k]
            h[2 * k + 1, 2 * k] = theta[k]
        h_el = AlgebraElement(n, h)
        for alpha in positive_roots(n):
            speed = float(sum(c * t for c, t in zip(alpha.coefficients(n), theta)))
            basis = root_space(alpha, n)
            r1 = ad(h_el, basis.first).entries - speed * basis.second.entries
            r2 = ad(h_el, basis.second).entries + speed * basis.first.entries
            assert np.abs(r1).max() < 1e-8, (n, alpha)
            assert np.abs(r2).max() < 1e-8, (n, alpha)


def test_root_space_orthonormal_and_unknown_root():
    b = root_space(Root(RootKind.SUM, 1, 2), 3)
    assert abs(b.first.norm() - 1.0) < 1e-12
    assert abs(b.second.norm() - 1.0) < 1e-12
    assert abs(float(vec(b.first.entries) @ vec(b.second.entries))) < 1e-10
    with pytest.raises(ValueError):
        root_space(Root(RootKind.SHORT, 4), 3)


def test_root_plane_action_separated():
    for n in (2, 3, 4, 5):
        vals = sorted(abs(root_plane_action(a, n)) for a in positive_roots(n))
        assert vals[0] > 1e-6
        assert min(b - a for a, b in zip(vals, vals[1:])) > 1e-6


def test_root_space_decomposition_spans_algebra():
    for n in (2, 3, 4):
        cache = _root_cache(n)
        assert len(cache.planes) == n * n
        rows = np.vstack([cache.torus] + [cache.planes[a] for a in cache.roots])
        assert rows.shape[0] == ambient_dim(n) == 2 * n * n + n
        assert orthonormal_rows(rows).shape[0] == ambient_dim(n)


def test_nonannihilating_span_dims():
    assert nonannihilating_span(TorusElement.identity(2)).dim == 0
    assert nonannihilating_span(T(0, 2, ())).dim == 4
    assert nonannihilating_span(T(0, 0, (1, 1, 1))).dim == 18
    for n in (2, 3, 4):
        for x in enumerate_types(n, include_central=True):
            # _span_data cross-checks the plane span against the image of
            # I - Ad(x) and raises on any mismatch
            assert nonannihilating_span(x).dim == conjugacy_class_dim(x)


def test_tangent_space_dimension_invariant():
    rng = np.random.default_rng(5)
    x = T(0, 2, ())
    base = nonannihilating_span(x)
    assert tangent_space(x, GroupElement.identity(2)).dim == base.dim
    for _ in range(20):
        g = haar_group(2, rng)
        moved = tangent_space(x, g)
        assert moved.dim == 4
        gram = moved.basis @ moved.basis.T
        assert np.abs(gram - np.eye(4)).max() < 1e-10
    with pytest.raises(ValueError):
        tangent_space(x, GroupElement.identity(3))


def test_span_matrices_match_span_rows():
    x = T(0, 1, (2,))
    mats = span_matrices(x)
    rows = nonannihilating_span(x).basis
    assert mats.shape[0] == rows.shape[0]
    for k in range(mats.shape[0]):
        assert np.allclose(vec(mats[k]), rows[k])


def test_subspace_utilities():
    onto = np.eye(4)[:2]
    rows = np.array([[1.0, 0.0, 0.0, 0.0], [0.0, 0.0, 1.0, 0.0]])
    assert subspace_residual(rows[:1], onto) < 1e-15
    assert abs(subspace_residual(rows, onto) - 1.0) < 1e-15
    assert orthonormal_rows(np.vstack([rows, rows])).shape[0] == 2
    assert orthonormal_rows(np.zeros((2, 4))).shape[0] == 0


def test_embedding_bracket_compatible():
    rng = np.random.default_rng(6)
    for _ in range(5):
        a, b = random_skew(2, rng), random_skew(2, rng)
        lhs = embed_algebra(ad(a, b)).entries
        rhs = ad(embed_algebra(a), embed_algebra(b)).entries
        assert np.abs(lhs - rhs).max() < 1e-12
    assert np.abs(embed_algebra(AlgebraElement.zero(2)).entries).max() == 0.0


def test_embedding_group_compatible_with_exp():
    rng = np.random.default_rng(7)
    y = random_skew(2, rng)
    direct = embed_group(exp_alg(y)).entries
    via_alg = exp_alg(embed_algebra(y)).entries
    assert np.abs(direct - via_alg).max() < 1e-10


def test_embedding_maps_root_planes():
    # a rank-(n-1) root plane embeds into the rank-n plane of the shifted root
    n = 3
    cache = _root_cache(n)
    for alpha in positive_roots(n - 1):
        shifted = Root(alpha.kind, alpha.i + 1, alpha.j + 1 if alpha.j else 0)
        small = root_space(alpha, n - 1)
        rows = np.vstack(
            [
                vec(embed_algebra(small.first).entries),
                vec(embed_algebra(small.second).entries),
            ]
        )
        assert subspace_residual(rows, cache.planes[shifted]) < 1e-8


def test_subalgebra_rows():
    for n in (3, 4):
        rows = subalgebra_rows(n)
        assert rows.shape == ((n - 1) * (2 * n - 1), ambient_dim(n))
        gram = rows @ rows.T
        assert np.abs(gram - np.eye(rows.shape[0])).max() < 1e-12
        emb = vec(embed_algebra(random_skew(n - 1, np.random.default_rng(8))).entries)
        assert subspace_residual(emb[None, :], rows) < 1e-12


def test_full_omega_and_complement():
    for n in (3, 4):
        omega = full_omega_basis(n)
        assert omega.dim == 2 * (2 * n - 1)
        tau = complement_direction(n)
        assert abs(np.linalg.norm(tau) - 1.0) < 1e-12
        assert np.abs(omega.basis @ tau).max() < 1e-12
        assert np.abs(subalgebra_rows(n) @ tau).max() < 1e-12
        # so(2n+1) = subalgebra + omega + complement line
        total = np.vstack([subalgebra_rows(n), omega.basis, tau[None, :]])
        assert orthonormal_rows(total).shape[0] == ambient_dim(n)


def test_complement_is_bracket_of_short_plane():
    # the missing line is spanned by the bracket of the e_1 root plane basis
    for n in (3, 4):
        b = root_space(Root(RootKind.SHORT, 1), n)
        w = vec(ad(b.first, b.second).entries)
        tau = complement_direction(n)
        assert abs(abs(float(w @ tau)) - np.linalg.norm(w)) < 1e-10
        # the bracket of an e_1+e_n plane also leaves the subalgebra+omega span
        c = root_space(Root(RootKind.SUM, 1, n), n)
        w2 = vec(ad(c.first, c.second).entries)
        assert abs(float(w2 @ tau)) > 1e-10


def test_ad_of_embedded_subalgebra_preserves_full_omega():
    rng = np.random.default_rng(9)
    for n in (3, 4):
        omega = full_omega_basis(n)
        for _ in range(5):
            h = embed_algebra(random_skew(n - 1, rng))
            images = np.vstack(
                [vec(ad(h, AlgebraElement(n, unvec(r, matrix_dim(n)))).entries)
                 for r in omega.basis]
            )
            assert subspace_residual(images, omega.basis) < 1e-8


def test_aligned_coords_permutation():
    for x in (T(0, 3, ()), T(1, 1, (1,)), T(0, 0, (2, 1))):
        coords = aligned_coords(x)
        assert sorted(coords) == sorted(x.coords)
        assert coords[0] == removed_coordinate(x)
        assert coords[1:] == reduce_element(x).coords


def test_omega_roots_and_span_dims():
    d3 = T(0, 3, ())
    assert [str(a) for a in omega_roots(d3)] == ["e1"]
    assert omega_span(d3).dim == 2
    for n in (3, 4):
        for x in enumerate_types(n):
            expect = conjugacy_class_dim(x) - conjugacy_class_dim(reduce_element(x))
            assert omega_span(x).dim == expect, x
            span = omega_span(x).basis
            assert subspace_residual(span, full_omega_basis(n).basis) < 1e-10


def test_omega_span_errors():
    with pytest.raises(ValueError):
        omega_span(TorusElement.identity(3))
    with pytest.raises(ValueError):
        omega_span(T(0, 2, ()))


def test_aligned_span_matrices():
    x = T(0, 3, ())
    mats, roots = aligned_span_matrices(x)
    assert mats.shape[0] == 2 * len(roots) == conjugacy_class_dim(x)
    # the kept roots touching coordinate 1 are exactly the new directions
    assert {r for r in roots if r.involves(1)} == set(omega_roots(x))


def test_first_coordinate_roots():
    roots = first_coordinate_roots(3)
    assert len(roots) == 5
    assert all(r.involves(1) for r in roots)


def test_weyl_bracket_check_small():
    rep = weyl_bracket_check(2)
    assert rep.ok and not rep.failures
    assert rep.max_residual < 1e-8
    assert rep.min_component > 1e-10
    assert rep.pairs_checked == 4 + 6  # self-pairs + unordered pairs


def test_weyl_bracket_specific_pair():
    # [V_{e1-e2}, V_{e2}] lies in the e1 plane and is nonzero there
    n = 2
    cache = _root_cache(n)
    a = cache.plane_mats[Root(RootKind.DIFF, 1, 2)]
    b = cache.plane_mats[Root(RootKind.SHORT, 2)]
    target = cache.planes[Root(RootKind.SHORT, 1)]
    best = 0.0
    for i in range(2):
        for j in range(2):
            w = vec(a[i] @ b[j] - b[j] @ a[i])
            assert subspace_residual(w[None, :], target) < 1e-10
            best = max(best, float(np.linalg.norm(target @ w)))
    assert best > 1e-10


def test_weyl_bracket_orthogonal_pair_vanishes():
    # e1-e2 and e1+e2: neither sum nor difference is a root, bracket is zero
    n = 2
    cache = _root_cache(n)
    a = cache.plane_mats[Root(RootKind.DIFF, 1, 2)]
    b = cache.plane_mats[Root(RootKind.SUM, 1, 2)]
    for i in range(2):
        for j in range(2):
            w = a[i] @ b[j] - b[j] @ a[i]
            assert np.abs(w).max() < 1e-10
