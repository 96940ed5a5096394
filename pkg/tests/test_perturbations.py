"""Schedules: certificates, decay validation, wedges, and the adversarial
state machine."""

import numpy as np
import pytest

from feasilab.dynamics import run_perturbed_ap
from feasilab.metrics import GapSampler, aw_gap
from feasilab.perturbations import (
    AdversarialSchedule,
    TranslationSchedule,
    VertexJitterSchedule,
    make_wedge,
    parse_rate_rule,
)
from feasilab.scenarios import get_scenario
from feasilab.sets import Wedge


class TestRateRules:
    def test_parsing(self):
        assert parse_rate_rule("1/n")(4) == 0.25
        assert parse_rate_rule("1/n^2")(10) == pytest.approx(0.01)
        assert parse_rate_rule("2^-n")(10) == pytest.approx(2**-10)
        assert parse_rate_rule("0")(5) == 0.0
        assert parse_rate_rule("0.5/n")(2) == 0.25

    def test_bad_rule(self):
        with pytest.raises(ValueError):
            parse_rate_rule("n^2")


class TestTranslation:
    def test_exact_cert(self, trapezoids_couple):
        s = TranslationSchedule(trapezoids_couple, "1/n", [1.0, 0.0])
        assert s.cert(10, 7) == pytest.approx(0.1)
        A10, B10 = s.step(10, np.zeros(2))
        assert aw_gap(A10, trapezoids_couple.A, 10).value == pytest.approx(0.1)

    def test_zero_rule_is_constant_like(self, trapezoids_couple):
        s = TranslationSchedule(trapezoids_couple, "0", [1.0, 0.0])
        A1, B1 = s.step(1, np.zeros(2))
        assert A1 is trapezoids_couple.A  # zero shift returns the set itself
        assert s.cert(1, 5) == 0.0

    def test_dyadic_rule(self, trapezoids_couple):
        s = TranslationSchedule(trapezoids_couple, "2^-n", [0.0, 1.0])
        assert s.cert(10, 5) == pytest.approx(2**-10)

    def test_non_vanishing_rejected(self, trapezoids_couple):
        with pytest.raises(ValueError):
            TranslationSchedule(trapezoids_couple, "0.5", [1.0, 0.0])

    def test_independent_axes(self, axes_couple):
        s = TranslationSchedule(
            axes_couple, "1/n", [0.0, 1.0], axis_b=[1.0, 0.0]
        )
        A2, B2 = s.step(2, np.zeros(2))
        assert A2.dist([0, 0.5]) < 1e-12  # x-axis lifted to y = 1/2
        assert B2.dist([0.5, 7.0]) < 1e-12  # y-axis shifted to x = 1/2


class TestJitter:
    def test_vertex_bound(self, trapezoids_couple):
        s = VertexJitterSchedule(trapezoids_couple, "1/n", seed=42)
        A1, B1 = s.step(1, np.zeros(2))
        orig = np.array(trapezoids_couple.A.vertices)
        jit = np.array(A1.vertices)
        assert jit.shape == orig.shape
        assert np.all(np.linalg.norm(jit - orig, axis=1) <= 1.0 + 1e-12)

    def test_cert_bounds_sampled_gap(self, trapezoids_couple):
        s = VertexJitterSchedule(trapezoids_couple, "1/n", seed=7)
        for n in (1, 3, 10, 25):
            A_n, _ = s.step(n, np.zeros(2))
            est = aw_gap(A_n, trapezoids_couple.A, 10)
            assert est.kind == "exact"
            assert est.value <= s.cert(n, 10) + 1e-12

    def test_non_polytopal_rejected(self, tangent_disc_couple):
        with pytest.raises(TypeError):
            VertexJitterSchedule(tangent_disc_couple, "1/n", seed=0)

    def test_deterministic_per_seed(self, trapezoids_couple):
        a = VertexJitterSchedule(trapezoids_couple, "1/n", seed=9).step(3, np.zeros(2))
        b = VertexJitterSchedule(trapezoids_couple, "1/n", seed=9).step(3, np.zeros(2))
        assert np.array_equal(a[0].vertices, b[0].vertices)


class TestMakeWedge:
    def test_defining_points(self):
        w = make_wedge(1, 1.0)
        for p in ([2, -1, 0], [3, 0, 0], [0, 1, 1]):
            assert w.contains(p, 1e-9)
        assert w.contains([1, 0, 0.5], 1e-9)

    def test_invalid_args(self):
        with pytest.raises(ValueError):
            make_wedge(0, 1.0)
        with pytest.raises(ValueError):
            make_wedge(1, 0.5)

    def test_gap_to_limit_shrinks(self):
        halfplane = Wedge([0, 0, 0], [1, 0, 0], [0, 1, 0])
        sampler = GapSampler(boundary_samples=1024, seed=0)
        gaps = [aw_gap(make_wedge(n, 1.0), halfplane, 5, sampler).value for n in (2, 5, 20)]
        assert gaps[0] > gaps[1] > gaps[2]


@pytest.fixture(scope="module")
def couple_53():
    return get_scenario("unbounded-5.3").build_couple()


class TestAdversarial:
    def test_three_blocks(self, couple_53):
        sched = AdversarialSchedule(couple_53)
        tr = run_perturbed_ap(couple_53, sched, [1, 0, 0], cap=2000, cert_levels=(5,))
        assert sched.blocks_completed >= 3
        for _, peak in sched.peaks:
            assert peak >= 0.5 - 1e-3

    def test_reentry_on_axis(self, couple_53):
        sched = AdversarialSchedule(couple_53)
        a = np.array([1.0, 0.0, 0.0])
        reset_steps = []
        for n in range(1, 1000):
            A_n, B_n = sched.step(n, a)
            was_reset = A_n is couple_53.A
            a = A_n.project(B_n.project(a))
            if was_reset:
                reset_steps.append(n)
                assert abs(a[1]) <= 1e-6 and abs(a[2]) <= 1e-6
                assert a[0] >= 1.0
            if len(reset_steps) >= 3:
                break
        assert len(reset_steps) >= 3

    def test_block_certs_decrease(self, couple_53):
        sched = AdversarialSchedule(couple_53)
        a = np.array([1.0, 0.0, 0.0])
        n = 0
        while sched.blocks_completed < 3 and n < 5000:
            n += 1
            A_n, B_n = sched.step(n, a)
            a = A_n.project(B_n.project(a))
        certs = [sched.cert(start, 5) for start, _ in sched._block_starts]
        assert all(x > y for x, y in zip(certs, certs[1:]))

    def test_single_consumer_enforced(self, couple_53):
        sched = AdversarialSchedule(couple_53)
        sched.step(1, np.array([1.0, 0.0, 0.0]))
        with pytest.raises(RuntimeError):
            sched.step(5, np.array([1.0, 0.0, 0.0]))

    def test_bad_start_rejected(self, couple_53):
        with pytest.raises(ValueError):
            AdversarialSchedule(couple_53, a0=(0.5, 0.0, 0.0))
        with pytest.raises(ValueError):
            AdversarialSchedule(couple_53, a0=(1.0, 0.2, 0.0))

    def test_cert_nonincreasing_along_run(self, couple_53):
        sched = AdversarialSchedule(couple_53)
        tr = run_perturbed_ap(couple_53, sched, [1, 0, 0], cap=1500, cert_levels=(5,))
        certs = [r.aw_cert[5] for r in tr.records]
        assert all(x >= y - 1e-12 for x, y in zip(certs, certs[1:]))
