"""Projection, membership, and support oracles for every set variant."""

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from oracles import clamp_box, exhaustive_polytope_project

from feasilab.sets import (
    AffineSubspace,
    Ball,
    DimensionMismatchError,
    Halfspace,
    HPolyhedron,
    Hyperplane,
    InfeasibleSetError,
    Translate,
    UnboundedSetError,
    VPolytope,
    Wedge,
    box,
)


class TestClosedForms:
    def test_box_clamp_matches_oracle(self):
        r = box([-1, 0], [1, 1])
        assert np.allclose(r.project([0, 2]), [0, 1])
        rng = np.random.default_rng(0)
        for _ in range(50):
            x = rng.uniform(-4, 4, 2)
            assert np.allclose(r.project(x), clamp_box([-1, 0], [1, 1], x), atol=1e-12)

    def test_identity_inside(self):
        r = box([-1, 0], [1, 1])
        x = np.array([0.3, 0.7])
        assert np.array_equal(r.project(x), x)

    def test_ball_radial(self):
        assert np.allclose(Ball([0, 0], 1).project([3, 4]), [0.6, 0.8])

    def test_halfspace_and_hyperplane(self):
        h = Halfspace([0, 2], 0.0)  # y >= 0, normal gets normalized
        assert np.allclose(h.project([1, -3]), [1, 0])
        assert np.allclose(h.project([1, 3]), [1, 3])
        p = Hyperplane([0, 1], 2.0)
        assert np.allclose(p.project([5, -1]), [5, 2])

    def test_affine_subspace(self):
        line = AffineSubspace([0, 0, 1], [[1, 1, 0]])
        q = line.project([2, 0, 5])
        assert np.allclose(q, [1, 1, 1])
        point = AffineSubspace([2, 3], [])
        assert np.allclose(point.project([9, 9]), [2, 3])
        assert point.is_bounded

    def test_wedge_from_points(self):
        w = Wedge.from_points([2, -1, 0], [0, 1, 1], [3, 0, 0])
        assert w.contains([1, 0, 0.5], 1e-9)  # midpoint of the line pair
        assert w.contains([2, -1, 0], 1e-9)
        assert w.contains([3, 0, 0], 1e-9)
        # projection idempotent and in-set
        p = w.project([5.0, 5.0, 5.0])
        assert w.dist(p) < 1e-10
        assert np.allclose(w.project(p), p)

    def test_translate_conjugation(self):
        r = box([-1, 0], [1, 1])
        t = r.translate([10, 0])
        assert np.allclose(t.project([10, 2]), [10, 1])
        nested = t.translate([0, 5])
        assert isinstance(nested, Translate)
        assert np.allclose(nested.shift, [10, 5])


class TestPolytopeProjection:
    def test_segment(self):
        s = VPolytope([[0, 0], [1, 1]])
        assert np.allclose(s.project([1, 0]), [0.5, 0.5])

    def test_singleton_degenerate(self):
        s = VPolytope([[1.0, 2.0], [1.0, 2.0]])
        assert s.n_vertices == 1
        assert np.allclose(s.project([0, 0]), [1, 2])

    def test_oracle_agreement_small(self):
        rng = np.random.default_rng(3)
        worst = 0.0
        for _ in range(120):
            d = int(rng.integers(2, 4))
            m = int(rng.integers(d + 1, 9))
            P = VPolytope(rng.uniform(-2, 2, (m, d)))
            x = rng.uniform(-4, 4, d)
            got = P.project(x)
            want = exhaustive_polytope_project(np.array(P.vertices), x)
            worst = max(worst, float(np.linalg.norm(got - want)))
        assert worst < 1e-5

    def test_batch_matches_single(self):
        rng = np.random.default_rng(4)
        P = VPolytope(rng.uniform(-2, 2, (6, 2)))
        X = rng.uniform(-4, 4, (40, 2))
        batch = P.project_many(X)
        single = np.array([P.project(x) for x in X])
        assert np.allclose(batch, single, atol=1e-9)

    def test_duplicate_vertices_removed(self):
        P = VPolytope([[0, 0], [1, 0], [0, 0], [1, 0]])
        assert P.n_vertices == 2


class TestHPolyhedron:
    def test_quadrant(self):
        hp = HPolyhedron([Halfspace([1, 0], 0), Halfspace([0, 1], 0)])
        assert np.allclose(hp.project([-1, -1]), [0, 0], atol=1e-8)
        assert np.allclose(hp.project([2, 3]), [2, 3])

    def test_infeasible_rejected(self):
        with pytest.raises(InfeasibleSetError):
            HPolyhedron([Halfspace([1, 0], 1), Halfspace([-1, 0], 0)])

    def test_strip_projection(self):
        strip = HPolyhedron([Halfspace([0, 1], -1), Halfspace([0, -1], -1)])
        assert np.allclose(strip.project([3, 4]), [3, 1], atol=1e-8)

    def test_matches_box(self):
        hp = HPolyhedron(
            [
                Halfspace([1, 0], -1),
                Halfspace([-1, 0], -1),
                Halfspace([0, 1], 0),
                Halfspace([0, -1], -1),
            ]
        )
        rng = np.random.default_rng(5)
        for _ in range(25):
            x = rng.uniform(-4, 4, 2)
            assert np.allclose(hp.project(x), clamp_box([-1, 0], [1, 1], x), atol=1e-7)

    def test_near_antiparallel_normals(self):
        # dual ascent converges in a couple of sweeps here but the last
        # coordinate keeps absorbing sub-ulp residuals; the gap certificate
        # must accept at its cancellation floor instead of looping forever
        hp = HPolyhedron(
            [
                Halfspace([-0.97877477, 0.2049389], -4.779344153995083),
                Halfspace([0.73999404, -0.67261343], -0.647345781933595),
                Halfspace([0.42734367, -0.90408926], -0.7674167587582482),
            ]
        )
        x = np.array([-4.90876093, -1.81921658])
        p = hp.project(x)
        assert hp.contains(p, 1e-9)
        # projection optimality: x - p is in the cone of the active normals
        assert np.linalg.norm(hp.project(p) - p) <= 1e-9
        assert np.linalg.norm(p - x) <= np.linalg.norm(hp._witness - x)


class TestSupport:
    def test_box_top_facet(self):
        r = box([-1, 0], [1, 1])
        s = r.support_point([0, 1])
        assert s[1] == pytest.approx(1.0)

    def test_ball(self):
        assert np.allclose(Ball([0, 0], 2).support_point([1, 0]), [2, 0])

    def test_halfspace_unbounded(self):
        with pytest.raises(UnboundedSetError):
            Halfspace([0, 1], 0).support_point([0, 1])

    def test_halfspace_bounded_direction(self):
        # {y <= 0}: sup of <(0,1), .> is 0 on the boundary
        h = Halfspace([0, -1], 0)
        assert h.support_value([0, 1]) == pytest.approx(0.0)

    def test_wedge_unbounded(self):
        w = Wedge([0, 0, 0], [1, 0, 0], [0, 1, 0])
        with pytest.raises(UnboundedSetError):
            w.support_point([1, 0, 0])

    def test_hpolyhedron_support_lp(self):
        hp = HPolyhedron(
            [
                Halfspace([1, 0], 0),
                Halfspace([0, 1], 0),
                Halfspace([-1, -1], -1),
            ]
        )
        assert hp.support_value([1, 0]) == pytest.approx(1.0, abs=1e-8)
        with pytest.raises(UnboundedSetError):
            HPolyhedron([Halfspace([0, 1], 0)]).support_value([1, 0])


class TestErrors:
    def test_dimension_mismatch(self):
        with pytest.raises(DimensionMismatchError):
            Ball([0, 0], 1).project([1, 2, 3])

    def test_contains_tolerance(self):
        assert box([-1, 0], [1, 1]).contains([0, 0.5], 0)
        assert not Ball([0, 0], 1).contains([1 + 1e-3, 0], 1e-6)

    def test_zero_normal_rejected(self):
        with pytest.raises(ValueError):
            Halfspace([0, 0], 1)


@st.composite
def random_set_and_points(draw):
    dim = draw(st.integers(2, 3))
    seed = draw(st.integers(0, 2**31 - 1))
    rng = np.random.default_rng(seed)
    which = draw(st.integers(0, 4))
    if which == 0:
        S = Ball(rng.uniform(-2, 2, dim), rng.uniform(0.2, 2.0))
    elif which == 1:
        S = Halfspace(rng.standard_normal(dim), rng.uniform(-1, 1))
    elif which == 2:
        S = VPolytope(rng.uniform(-2, 2, (dim + 3, dim)))
    elif which == 3:
        lo = rng.uniform(-2, 0, dim)
        S = box(lo, lo + rng.uniform(0.2, 2, dim))
    else:
        S = Hyperplane(rng.standard_normal(dim), rng.uniform(-1, 1))
    x = rng.uniform(-4, 4, dim)
    y = rng.uniform(-4, 4, dim)
    return S, x, y


@settings(max_examples=60, deadline=None)
@given(random_set_and_points())
def test_firm_nonexpansiveness(data):
    S, x, y = data
    px, py = S.project(x), S.project(y)
    assert np.linalg.norm(px - py) ** 2 <= (px - py) @ (x - y) + 1e-7


@settings(max_examples=60, deadline=None)
@given(random_set_and_points())
def test_idempotence(data):
    S, x, _ = data
    p = S.project(x)
    assert np.linalg.norm(S.project(p) - p) <= 1e-7


@settings(max_examples=60, deadline=None)
@given(random_set_and_points())
def test_variational_inequality(data):
    from feasilab.metrics import sample_points

    S, x, _ = data
    p = S.project(x)
    for s in sample_points(S, 5, radius=3.0, seed=1):
        assert (x - p) @ (s - p) <= 1e-7
