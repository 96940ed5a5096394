"""Generators of set sequences converging to a limit couple, each carrying a
certificate n -> upper bound on the localized gap to the limit.

Stateless schedules (constant, translation, vertex jitter) are shareable;
the adversarial schedule is a stateful single-consumer machine realizing the
unbounded-intersection counterexample: it drives the iterate on excursions
along a sequence of wedges, resetting through the limit sets each time the
iterate strays at least 1/2 from the intersection.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .metrics import Couple, GapSampler, aw_gap
from .sets import ConvexSet, Translate, VPolytope, Wedge, as_point, base_variant


class ScheduleStallError(RuntimeError):
    """An adversarial block failed to reach its excursion target, or the
    re-entry iterate left the positive x-axis form."""


EXCURSION_TARGET = 0.5
EXCURSION_HIT_TOL = 1e-3


def parse_rate_rule(rule) -> "RateRule":
    """Parse a scalar decay rule: "1/n", "1/n^2", "c/n", "2^-n", "0", or a number."""
    if isinstance(rule, RateRule):
        return rule
    if isinstance(rule, (int, float)):
        return RateRule("const", float(rule), text=str(rule))
    text = str(rule).strip().replace(" ", "")
    if text in {"0", "0.0"}:
        return RateRule("const", 0.0, text="0")
    if text == "2^-n":
        return RateRule("exp2", 1.0, text=text)
    if "/n" in text:
        num, _, tail = text.partition("/n")
        coeff = float(num) if num else 1.0
        if tail == "":
            return RateRule("inv", coeff, power=1.0, text=text)
        if tail.startswith("^"):
            return RateRule("inv", coeff, power=float(tail[1:]), text=text)
    try:
        return RateRule("const", float(text), text=text)
    except ValueError:
        raise ValueError(f"cannot parse rate rule {rule!r}") from None


@dataclass(frozen=True)
class RateRule:
    kind: str  # "inv" | "exp2" | "const"
    coeff: float
    power: float = 1.0
    text: str = ""

    def __call__(self, n: int) -> float:
        if self.kind == "inv":
            return self.coeff / float(n) ** self.power
        if self.kind == "exp2":
            return self.coeff * 2.0 ** (-n)
        return self.coeff


def _check_vanishing(rate: RateRule, name: str) -> None:
    probes = [1, 2, 5, 10, 100, 1000, 10**6]
    vals = [abs(rate(n)) for n in probes]
    if any(b > a + 1e-15 for a, b in zip(vals, vals[1:])):
        raise ValueError(f"{name} must be nonincreasing in n")
    if vals[-1] >= 1e-3:
        raise ValueError(f"{name} does not vanish (still {vals[-1]:.2e} at n=1e6)")


class Schedule:
    """Protocol: step(n, a_prev) -> (A_n, B_n); cert(n, N) -> gap upper bound."""

    kind: str
    limit: Couple

    def step(self, n: int, a_prev: np.ndarray) -> tuple[ConvexSet, ConvexSet]:
        raise NotImplementedError

    def cert(self, n: int, N: int) -> float:
        raise NotImplementedError


class ConstantSchedule(Schedule):
    kind = "constant"

    def __init__(self, limit: Couple):
        self.limit = limit

    def step(self, n, a_prev):
        return self.limit.A, self.limit.B

    def cert(self, n, N):
        return 0.0


class TranslationSchedule(Schedule):
    """A_n = A + rule_a(n) * axis_a, B_n = B + rule_b(n) * axis_b.

    Exact certificate: translating a set by t moves no point further than
    ||t||, so cert(n, N) = max shift norm.
    """

    kind = "translation"

    def __init__(self, limit: Couple, rule, axis, *, rule_b=None, axis_b=None):
        self.limit = limit
        self.rule_a = parse_rate_rule(rule)
        self.rule_b = parse_rate_rule(rule if rule_b is None else rule_b)
        a = as_point(axis, limit.dim)
        b = a if axis_b is None else as_point(axis_b, limit.dim)
        self.axis_a = a
        self.axis_b = b
        _check_vanishing(self.rule_a, "translation rule")
        _check_vanishing(self.rule_b, "translation rule (B side)")
        self._norm_a = float(np.linalg.norm(a))
        self._norm_b = float(np.linalg.norm(b))

    def shift_a(self, n: int) -> np.ndarray:
        return self.rule_a(n) * self.axis_a

    def shift_b(self, n: int) -> np.ndarray:
        return self.rule_b(n) * self.axis_b

    def step(self, n, a_prev):
        return self.limit.A.translate(self.shift_a(n)), self.limit.B.translate(self.shift_b(n))

    def cert(self, n, N):
        return max(abs(self.rule_a(n)) * self._norm_a, abs(self.rule_b(n)) * self._norm_b)


def _jitter_vertices(V: np.ndarray, radius: float, rng: np.random.Generator) -> np.ndarray:
    m, d = V.shape
    dirs = rng.standard_normal((m, d))
    norms = np.linalg.norm(dirs, axis=1)
    norms[norms == 0] = 1.0
    dirs /= norms[:, None]
    radii = radius * rng.uniform(0, 1, m) ** (1.0 / d)
    return V + dirs * radii[:, None]


class VertexJitterSchedule(Schedule):
    """Polytopal couples only: every vertex is independently displaced by a
    seeded random vector of norm at most rate(n); cert(n, N) = rate(n)."""

    kind = "jitter"

    def __init__(self, limit: Couple, rate, seed: int = 0):
        if not isinstance(base_variant(limit.A), VPolytope) or not isinstance(
            base_variant(limit.B), VPolytope
        ):
            raise TypeError("vertex jitter needs a polytopal couple")
        self.limit = limit
        self.rate = parse_rate_rule(rate)
        _check_vanishing(self.rate, "jitter rate")
        self.seed = int(seed)

    def _vertices(self, S: ConvexSet) -> np.ndarray:
        if isinstance(S, Translate):
            return S.inner.vertices + S.shift
        return S.vertices

    def step(self, n, a_prev):
        r = self.rate(n)
        rng_a = np.random.default_rng([self.seed, n, 0])
        rng_b = np.random.default_rng([self.seed, n, 1])
        A_n = VPolytope(_jitter_vertices(self._vertices(self.limit.A), r, rng_a))
        B_n = VPolytope(_jitter_vertices(self._vertices(self.limit.B), r, rng_b))
        return A_n, B_n

    def cert(self, n, N):
        return abs(self.rate(n))


def make_wedge(n: int, x0: float) -> Wedge:
    """The n-th excursion wedge anchored at abscissa x0 >= 1: the convex hull
    of the full line through (x0 + n x0, -1, 0) and (0, 1/n, 1/n) with the
    ray from the first point through (x0 + n x0 + 1/(n x0), 0, 0)."""
    if n < 1 or int(n) != n:
        raise ValueError("n must be a positive integer")
    if x0 < 1.0:
        raise ValueError("x0 must be >= 1")
    n = int(n)
    p1 = np.array([x0 + n * x0, -1.0, 0.0])
    p2 = np.array([x0 + n * x0 + 1.0 / (n * x0), 0.0, 0.0])
    p3 = np.array([0.0, 1.0 / n, 1.0 / n])
    return Wedge.from_points(p1, p3, p2)


class AdversarialSchedule(Schedule):
    """Adaptive pull-based schedule for the unbounded-intersection limit
    couple in R^3 (A the half-plane z=0, y>=0; B the plane z=0).

    During block k it emits (wedge_k, B) where wedge_k = make_wedge(k, x_{k-1});
    once the consumer's iterate is at least 1/2 (minus the hit tolerance) away
    from A cap B it emits one step of the limit pair (A, B), which maps the
    iterate back to (x_k, 0, 0); that form is asserted at runtime before block
    k+1 starts.  cert(n, N) is the sampled localized gap of the block's wedge,
    held constant through the block (an upper bound also covers its reset
    step), and decreases across blocks.
    """

    kind = "adversarial"

    def __init__(
        self,
        limit: Couple,
        a0=(1.0, 0.0, 0.0),
        *,
        block_cap: int = 10**6,
        axis_tol: float = 1e-6,
        gap_sampler: GapSampler | None = None,
    ):
        if limit.dim != 3:
            raise ValueError("adversarial schedule lives in R^3")
        start = as_point(a0, 3)
        if start[0] < 1.0 or abs(start[1]) > 0 or abs(start[2]) > 0:
            raise ValueError("start point must be (x, 0, 0) with x >= 1")
        self.limit = limit
        self.block_cap = int(block_cap)
        self.axis_tol = float(axis_tol)
        self.gap_sampler = gap_sampler or GapSampler(boundary_samples=2048, seed=0)
        self._phase = 1
        self._x_entry = float(start[0])
        self._wedge = make_wedge(1, self._x_entry)
        self._mode = "excursion"
        self._steps_in_block = 0
        self._n_last = 0
        self._block_starts: list[tuple[int, Wedge]] = [(1, self._wedge)]
        self._gap_cache: dict[tuple[int, int], float] = {}
        self.blocks_completed = 0
        self.peaks: list[tuple[int, float]] = []

    def step(self, n, a_prev):
        if n != self._n_last + 1:
            raise RuntimeError(
                "adversarial schedule is bound to a single sequential run"
            )
        self._n_last = n
        a_prev = as_point(a_prev, 3)
        if self._mode == "await_reentry":
            if (
                abs(a_prev[1]) > self.axis_tol
                or abs(a_prev[2]) > self.axis_tol
                or a_prev[0] < 1.0 - 1e-9
            ):
                raise ScheduleStallError(
                    f"re-entry iterate {a_prev} is not of the form (x, 0, 0), x >= 1"
                )
            self._phase += 1
            self._x_entry = float(a_prev[0])
            self._wedge = make_wedge(self._phase, self._x_entry)
            self._mode = "excursion"
            self._steps_in_block = 0
            self._block_starts.append((n, self._wedge))
        dist = self.limit.dist_E(a_prev)
        if dist >= EXCURSION_TARGET - EXCURSION_HIT_TOL:
            self.blocks_completed += 1
            self.peaks.append((n - 1, float(dist)))
            self._mode = "await_reentry"
            return self.limit.A, self.limit.B
        self._steps_in_block += 1
        if self._steps_in_block > self.block_cap:
            raise ScheduleStallError(
                f"block {self._phase} exceeded {self.block_cap} steps without "
                f"reaching the excursion target"
            )
        return self._wedge, self.limit.B

    def _block_of(self, n: int) -> tuple[int, Wedge]:
        k = 0
        for i, (start, _w) in enumerate(self._block_starts):
            if n >= start:
                k = i
        return k, self._block_starts[k][1]

    def cert(self, n, N):
        k, wedge = self._block_of(n)
        key = (k, N)
        if key not in self._gap_cache:
            self._gap_cache[key] = aw_gap(wedge, self.limit.A, N, self.gap_sampler).value
        return self._gap_cache[key]
