"""Scenario registry, configuration ingestion, and the batch runner.

Each bundled scenario packages a couple (with its analytic nearest-set
descriptor where one exists), start points, a default perturbation schedule,
iteration budget, tolerances, and expected verdict assertions.  Runs write
trace CSVs plus verdict and regularity JSON under
<out>/<scenario>/<timestamp>/.
"""

from __future__ import annotations

import os
import time
from dataclasses import dataclass, field, replace
from datetime import datetime
from pathlib import Path

import numpy as np

from .dynamics import Verdict, run_perturbed_ap, stability_verdict
from .metrics import Couple, GapSampler, make_couple
from .perturbations import (
    AdversarialSchedule,
    ConstantSchedule,
    Schedule,
    TranslationSchedule,
    VertexJitterSchedule,
)
from .regularity import SamplerSpec, regularity_report
from .serialize import ConfigError, set_from_dict, write_json, write_trace_csv

ENV_SEED = "FEASILAB_SEED"


def default_seed() -> int:
    raw = os.environ.get(ENV_SEED)
    if raw is None:
        return 42
    try:
        return int(raw)
    except ValueError:
        raise ConfigError(f"{ENV_SEED} must be an integer, got {raw!r}") from None


@dataclass(frozen=True)
class ScenarioSpec:
    """Declarative description of one experiment."""

    name: str
    dim: int
    set_a: dict
    set_b: dict
    start_points: tuple[tuple[float, ...], ...]
    schedule: dict
    iterations: int
    tolerances: dict
    e_analytic: dict | None = None
    expected: dict | None = None
    flags: dict = field(default_factory=dict)
    regularity_eps: tuple[float, ...] = (0.1,)
    regularity_region: dict | None = None

    def to_dict(self) -> dict:
        out = {
            "name": self.name,
            "dim": self.dim,
            "set_a": self.set_a,
            "set_b": self.set_b,
            "start_points": [list(p) for p in self.start_points],
            "schedule": self.schedule,
            "iterations": self.iterations,
            "tolerances": self.tolerances,
            "e_analytic": self.e_analytic,
            "expected": self.expected,
            "flags": self.flags,
            "regularity_eps": list(self.regularity_eps),
            "regularity_region": self.regularity_region,
        }
        return out

    @classmethod
    def from_dict(cls, d: dict) -> "ScenarioSpec":
        try:
            return cls(
                name=d["name"],
                dim=int(d["dim"]),
                set_a=d["set_a"],
                set_b=d["set_b"],
                start_points=tuple(tuple(float(x) for x in p) for p in d["start_points"]),
                schedule=d["schedule"],
                iterations=int(d["iterations"]),
                tolerances=dict(d["tolerances"]),
                e_analytic=d.get("e_analytic"),
                expected=d.get("expected"),
                flags=dict(d.get("flags", {})),
                regularity_eps=tuple(d.get("regularity_eps", (0.1,))),
                regularity_region=d.get("regularity_region"),
            )
        except KeyError as exc:
            raise ConfigError(f"scenario config missing {exc}") from None

    def build_couple(self) -> Couple:
        A = set_from_dict(self.set_a)
        B = set_from_dict(self.set_b)
        E = set_from_dict(self.e_analytic) if self.e_analytic else None
        for label, S in (("set_a", A), ("set_b", B), ("e_analytic", E)):
            if S is not None and S.dim != self.dim:
                raise ConfigError(
                    f"{label} has dimension {S.dim}, scenario declares {self.dim}"
                )
        return make_couple(A, B, E=E, tol=self.tolerances.get("couple", 1e-7))

    def build_schedule(self, couple: Couple, *, seed: int | None = None) -> Schedule:
        return schedule_from_dict(self.schedule, couple, seed=seed)

    def sampler(self) -> SamplerSpec:
        region = self.regularity_region
        if region is None:
            lo = [-3.0] * self.dim
            hi = [3.0] * self.dim
            region = {"kind": "box", "lo": lo, "hi": hi, "step": 0.05}
        if region.get("kind", "box") == "box":
            step = region.get("step", 0.05)
            return SamplerSpec.grid_on_box(region["lo"], region["hi"], step)
        return SamplerSpec.random_in_ball(
            region["center"], region["radius"], region.get("count", 20000),
            seed=default_seed(),
        )


def schedule_from_dict(spec: dict, couple: Couple, *, seed: int | None = None) -> Schedule:
    """Build a schedule from its config record: {"kind": "translation",
    "rule": "1/n", "axis": [...]}, {"kind": "jitter", "rate": "1/n",
    "seed": 42}, {"kind": "adversarial"}, or {"kind": "constant"}."""
    if not isinstance(spec, dict) or "kind" not in spec:
        raise ConfigError("schedule spec must be a dict with a 'kind'")
    kind = spec["kind"]
    if kind == "constant":
        return ConstantSchedule(couple)
    if kind == "translation":
        axis = spec.get("axis")
        if axis is None:
            axis = [0.0] * couple.dim
            axis[0] = 1.0
        return TranslationSchedule(
            couple,
            spec.get("rule", "1/n"),
            axis,
            rule_b=spec.get("rule_b"),
            axis_b=spec.get("axis_b"),
        )
    if kind == "jitter":
        s = spec.get("seed", seed if seed is not None else default_seed())
        return VertexJitterSchedule(couple, spec.get("rate", "1/n"), seed=s)
    if kind == "adversarial":
        return AdversarialSchedule(
            couple,
            a0=spec.get("start", (1.0, 0.0, 0.0)),
            gap_sampler=GapSampler(
                boundary_samples=spec.get("cert_samples", 2048),
                seed=seed if seed is not None else default_seed(),
            ),
        )
    raise ConfigError(f"unknown schedule kind {kind!r}")


def _v(x) -> list[list[float]]:
    return [[float(a) for a in row] for row in x]


def _bundled() -> list[ScenarioSpec]:
    seg = {"type": "vpolytope", "vertices": [[-1.0, 0.0], [1.0, 0.0]]}
    trapezoid_a = {"type": "vpolytope", "vertices": _v([[1, 1], [-1, 1], [1, 0], [-1, 0]])}
    trapezoid_b = {"type": "vpolytope", "vertices": _v([[1, -1], [-1, -1], [1, 0], [-1, 0]])}
    halfplane_53 = {
        "type": "wedge",
        "origin": [0.0, 0.0, 0.0],
        "e1": [1.0, 0.0, 0.0],
        "e2": [0.0, 1.0, 0.0],
    }
    plane_53 = {"type": "hyperplane", "normal": [0.0, 0.0, 1.0], "offset": 0.0}
    scenarios = [
        ScenarioSpec(
            name="trapezoids-5.2",
            dim=2,
            set_a=trapezoid_a,
            set_b=trapezoid_b,
            e_analytic=seg,
            start_points=((2.0, 2.0),),
            schedule={"kind": "translation", "rule": "1/n", "axis": [1.0, 0.0]},
            iterations=10_000,
            tolerances={"verdict": 1e-2, "couple": 1e-7},
            expected={"d_stable_observed": True, "d_ab": 0.0},
            regularity_region={"kind": "box", "lo": [-3.0, -3.0], "hi": [3.0, 3.0], "step": 0.01},
        ),
        ScenarioSpec(
            name="unbounded-5.3",
            dim=3,
            set_a=halfplane_53,
            set_b=plane_53,
            e_analytic=halfplane_53,
            start_points=((1.0, 0.0, 0.0),),
            schedule={"kind": "adversarial"},
            iterations=20_000,
            tolerances={"verdict": 1e-2, "couple": 1e-7, "tail_frac": 0.5},
            expected={
                "d_stable_observed": False,
                "min_excursions": 3,
                "d_ab": 0.0,
                "tail_sup_min": 0.499,
            },
            flags={"e_unbounded": True},
        ),
        ScenarioSpec(
            name="subspaces-orthogonal",
            dim=2,
            set_a={"type": "affine", "base": [0.0, 0.0], "basis": [[1.0, 0.0]]},
            set_b={"type": "affine", "base": [0.0, 0.0], "basis": [[0.0, 1.0]]},
            e_analytic={"type": "vpolytope", "vertices": [[0.0, 0.0]]},
            start_points=((1.0, 1.0),),
            schedule={
                "kind": "translation",
                "rule": "1/n",
                "axis": [0.0, 1.0],
                "axis_b": [1.0, 0.0],
            },
            iterations=100_000,
            tolerances={"verdict": 1e-4, "couple": 1e-7},
            expected={
                "d_stable_observed": True,
                "stable_observed": True,
                "limit_point_within": {"point": [0.0, 0.0], "tol": 1e-4},
                "d_ab": 0.0,
            },
        ),
        ScenarioSpec(
            name="subspaces-oblique",
            dim=3,
            set_a={"type": "affine", "base": [0.0, 0.0, 0.0], "basis": [[1.0, 0.0, 0.0]]},
            set_b={
                "type": "affine",
                "base": [0.0, 0.0, 0.0],
                "basis": [[0.7071067811865476, 0.7071067811865476, 0.0]],
            },
            e_analytic={"type": "vpolytope", "vertices": [[0.0, 0.0, 0.0]]},
            start_points=((1.0, 1.0, 0.5),),
            schedule={"kind": "translation", "rule": "1/n", "axis": [0.0, 0.0, 1.0]},
            iterations=100_000,
            tolerances={"verdict": 1e-4, "couple": 1e-7},
            expected={
                "d_stable_observed": True,
                "stable_observed": True,
                "limit_point_within": {"point": [0.0, 0.0, 0.0], "tol": 1e-4},
                "d_ab": 0.0,
            },
        ),
        ScenarioSpec(
            name="disc-vs-halfplane",
            dim=2,
            set_a={"type": "ball", "center": [0.0, 0.0], "radius": 1.0},
            set_b={"type": "halfspace", "normal": [0.0, 1.0], "offset": 1.0},
            e_analytic={"type": "vpolytope", "vertices": [[0.0, 1.0]]},
            start_points=((0.1, 2.0),),
            schedule={"kind": "translation", "rule": "1/n", "axis": [0.0, 1.0]},
            # tangent contact decays like 1/sqrt(n); the tail-sup verdict
            # needs the extra headroom beyond n=1e4
            iterations=20_000,
            tolerances={"verdict": 1e-2, "couple": 1e-7},
            expected={"d_stable_observed": True, "d_ab": 0.0},
            flags={"strongly_exposed": True, "tangent_contact": True},
        ),
        ScenarioSpec(
            name="disc-vs-shifted-halfplane",
            dim=2,
            set_a={"type": "ball", "center": [0.0, 0.0], "radius": 1.0},
            set_b={"type": "halfspace", "normal": [0.0, 1.0], "offset": 2.0},
            e_analytic={"type": "vpolytope", "vertices": [[0.0, 1.0]]},
            start_points=((2.0, 2.0),),
            schedule={"kind": "translation", "rule": "1/n", "axis": [1.0, 0.0]},
            iterations=10_000,
            tolerances={"verdict": 1e-2, "couple": 1e-7},
            expected={"d_stable_observed": True, "d_ab": 1.0, "v": [0.0, 1.0]},
            flags={"tangent_contact": True},
        ),
        ScenarioSpec(
            name="disjoint-rectangles",
            dim=2,
            set_a={"type": "vpolytope", "vertices": _v([[-1, 1], [1, 1], [-1, 2], [1, 2]])},
            set_b={"type": "vpolytope", "vertices": _v([[-1, -2], [1, -2], [-1, -1], [1, -1]])},
            e_analytic={"type": "vpolytope", "vertices": [[-1.0, 1.0], [1.0, 1.0]]},
            start_points=((0.0, 5.0),),
            schedule={"kind": "translation", "rule": "1/n", "axis": [1.0, 0.0]},
            iterations=10_000,
            tolerances={"verdict": 1e-2, "couple": 1e-7},
            expected={"d_stable_observed": True, "d_ab": 2.0, "v": [0.0, -2.0]},
        ),
    ]
    return scenarios


_REGISTRY: dict[str, ScenarioSpec] = {s.name: s for s in _bundled()}


def list_scenarios() -> list[ScenarioSpec]:
    return list(_REGISTRY.values())


def get_scenario(name: str) -> ScenarioSpec:
    if name not in _REGISTRY:
        raise ConfigError(
            f"unknown scenario {name!r}; available: {', '.join(sorted(_REGISTRY))}"
        )
    return _REGISTRY[name]


@dataclass
class RunReport:
    scenario: str
    out_dir: str
    trace_paths: list[str]
    verdicts: list[Verdict]
    verdict_path: str
    regularity_path: str | None
    wall_time: float
    expected_pass: bool | None
    excursions: int | None = None

    def to_dict(self) -> dict:
        return {
            "scenario": self.scenario,
            "out_dir": self.out_dir,
            "trace_paths": self.trace_paths,
            "verdicts": [v.to_dict() for v in self.verdicts],
            "verdict_path": self.verdict_path,
            "regularity_path": self.regularity_path,
            "wall_time": self.wall_time,
            "expected_pass": self.expected_pass,
            "excursions": self.excursions,
        }


def apply_overrides(spec: ScenarioSpec, overrides: dict | None) -> ScenarioSpec:
    if not overrides:
        return spec
    known = {"schedule", "iterations", "start_points", "tolerances"}
    bad = set(overrides) - known
    if bad:
        raise ConfigError(f"unknown overrides: {sorted(bad)}")
    kwargs = {}
    if "schedule" in overrides:
        kwargs["schedule"] = overrides["schedule"]
    if "iterations" in overrides:
        kwargs["iterations"] = int(overrides["iterations"])
    if "start_points" in overrides:
        kwargs["start_points"] = tuple(
            tuple(float(x) for x in p) for p in overrides["start_points"]
        )
    if "tolerances" in overrides:
        merged = dict(spec.tolerances)
        merged.update(overrides["tolerances"])
        kwargs["tolerances"] = merged
    return replace(spec, **kwargs)


def check_expected(
    spec: ScenarioSpec, verdicts: list[Verdict], couple: Couple, excursions: int | None
) -> tuple[bool, dict]:
    """Evaluate the scenario's expected assertions; returns (all pass, detail)."""
    exp = spec.expected or {}
    detail: dict = {}
    ok = True
    for key in ("d_stable_observed", "stable_observed"):
        if key in exp:
            got = all(getattr(v, key) for v in verdicts)
            detail[key] = {"expected": exp[key], "got": got}
            ok = ok and (got == exp[key])
    if "d_ab" in exp:
        got = couple.d_AB
        passed = abs(got - float(exp["d_ab"])) <= 1e-6
        detail["d_ab"] = {"expected": exp["d_ab"], "got": got, "pass": passed}
        ok = ok and passed
    if "v" in exp:
        got = couple.v
        passed = bool(np.linalg.norm(got - np.asarray(exp["v"], dtype=float)) <= 1e-6)
        detail["v"] = {"expected": exp["v"], "got": list(got), "pass": passed}
        ok = ok and passed
    if "limit_point_within" in exp:
        target = np.asarray(exp["limit_point_within"]["point"], dtype=float)
        tol = float(exp["limit_point_within"]["tol"])
        passed = all(
            v.limit_point is not None
            and float(np.linalg.norm(v.limit_point - target)) <= tol
            for v in verdicts
        )
        detail["limit_point_within"] = {"pass": passed}
        ok = ok and passed
    if "tail_sup_min" in exp:
        floor = float(exp["tail_sup_min"])
        passed = all(v.tail_sup_dist >= floor for v in verdicts)
        detail["tail_sup_min"] = {
            "expected": floor,
            "got": [v.tail_sup_dist for v in verdicts],
            "pass": passed,
        }
        ok = ok and passed
    if "min_excursions" in exp:
        passed = excursions is not None and excursions >= int(exp["min_excursions"])
        detail["min_excursions"] = {
            "expected": exp["min_excursions"],
            "got": excursions,
            "pass": passed,
        }
        ok = ok and passed
    return ok, detail


def run_scenario(
    name: str | ScenarioSpec,
    *,
    overrides: dict | None = None,
    out_root="runs",
    seed: int | None = None,
    with_regularity: bool = True,
    timestamp: str | None = None,
) -> RunReport:
    """Build the scenario's couple and schedule, run perturbed alternating
    projections from every start point, and persist trace/verdict/regularity
    files.  Returns the report (with expected-assertion results when the
    scenario declares them)."""
    spec = get_scenario(name) if isinstance(name, str) else name
    spec = apply_overrides(spec, overrides)
    t0 = time.perf_counter()
    couple = spec.build_couple()
    stamp = timestamp or datetime.now().strftime("%Y%m%dT%H%M%S.%f")
    out_dir = Path(out_root) / spec.name / stamp
    out_dir.mkdir(parents=True, exist_ok=True)
    verdict_tol = float(spec.tolerances.get("verdict", 1e-6))
    tail_frac = float(spec.tolerances.get("tail_frac", 0.1))
    trace_paths: list[str] = []
    verdicts: list[Verdict] = []
    excursions: int | None = None
    for i, start in enumerate(spec.start_points):
        schedule = spec.build_schedule(couple, seed=seed)
        trace = run_perturbed_ap(couple, schedule, start, cap=spec.iterations)
        window = max(min(len(trace), 50), int(tail_frac * len(trace)))
        verdict = stability_verdict(couple=couple, trace=trace, tol=verdict_tol, tail_window=window)
        verdicts.append(verdict)
        if isinstance(schedule, AdversarialSchedule):
            blocks = schedule.blocks_completed
            excursions = blocks if excursions is None else min(excursions, blocks)
        fname = "trace.csv" if i == 0 else f"trace_{i}.csv"
        write_trace_csv(trace, out_dir / fname)
        trace_paths.append(str(out_dir / fname))
    regularity_path = None
    if with_regularity:
        report = regularity_report(couple, spec.regularity_eps, spec.sampler())
        regularity_path = str(out_dir / "regularity.json")
        write_json(report.to_dict(), regularity_path)
    expected_pass = None
    detail: dict = {}
    if spec.expected:
        expected_pass, detail = check_expected(spec, verdicts, couple, excursions)
    verdict_path = str(out_dir / "verdict.json")
    write_json(
        {
            "scenario": spec.name,
            "verdicts": [v.to_dict() for v in verdicts],
            "expected_pass": expected_pass,
            "expected_detail": detail,
            "excursions": excursions,
            "d_ab": couple.d_AB,
            "v": list(couple.v),
        },
        verdict_path,
    )
    return RunReport(
        scenario=spec.name,
        out_dir=str(out_dir),
        trace_paths=trace_paths,
        verdicts=verdicts,
        verdict_path=verdict_path,
        regularity_path=regularity_path,
        wall_time=time.perf_counter() - t0,
        expected_pass=expected_pass,
        excursions=excursions,
    )
