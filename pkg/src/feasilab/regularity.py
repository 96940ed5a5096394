"""Empirical regularity moduli for a couple, plus the quantitative geometric
predicates used by the stability analysis (boundary bound on fat bodies,
quasi-orthogonality, modulus of convexity, annulus diameter, strong exposure).

Regularity is estimated on a user-declared compact region: sampling cannot
certify behavior at infinity, and bounded regularity is equivalent to
regularity whenever E is bounded, which every bundled scenario satisfies.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .dynamics import cosine
from .metrics import Couple, diameter_estimate, sample_points
from .sets import ConvexSet, UnboundedSetError, as_point

DELTA_LADDER_FLOOR = 1e-6


class NoPositiveDeltaError(RuntimeError):
    """Even the smallest ladder rung admits a sampled counterexample."""


class PreconditionFailedError(ValueError):
    """A geometric hypothesis (containment, boundary membership) fails."""


class NonpositiveCosineError(ValueError):
    """The boundary bound requires cos(u, w) > 0."""


@dataclass(frozen=True)
class SamplerSpec:
    """Sampling region and mode for regularity estimation.

    region: ("box", lo, hi) or ("ball", center, radius);
    mode: "grid" with a step, or "random" with a count and seed.
    """

    region: tuple
    mode: str = "grid"
    step: float = 0.05
    count: int = 20_000
    seed: int = 0

    @classmethod
    def grid_on_box(cls, lo, hi, step: float) -> "SamplerSpec":
        if step <= 0:
            raise ValueError("step must be positive")
        return cls(region=("box", tuple(lo), tuple(hi)), mode="grid", step=step)

    @classmethod
    def random_in_box(cls, lo, hi, count: int, seed: int = 0) -> "SamplerSpec":
        if count <= 0:
            raise ValueError("count must be positive")
        return cls(region=("box", tuple(lo), tuple(hi)), mode="random", count=count, seed=seed)

    @classmethod
    def random_in_ball(cls, center, radius: float, count: int, seed: int = 0) -> "SamplerSpec":
        return cls(
            region=("ball", tuple(center), float(radius)),
            mode="random",
            count=count,
            seed=seed,
        )

    def points(self) -> np.ndarray:
        kind = self.region[0]
        if kind == "box":
            lo = np.asarray(self.region[1], dtype=float)
            hi = np.asarray(self.region[2], dtype=float)
            if self.mode == "grid":
                axes = [
                    lo[i] + self.step * np.arange(int((hi[i] - lo[i]) / self.step + 1e-9) + 1)
                    for i in range(lo.shape[0])
                ]
                mesh = np.meshgrid(*axes, indexing="ij")
                return np.column_stack([m.ravel() for m in mesh])
            rng = np.random.default_rng(self.seed)
            return rng.uniform(lo, hi, (self.count, lo.shape[0]))
        if kind == "ball":
            center = np.asarray(self.region[1], dtype=float)
            radius = float(self.region[2])
            d = center.shape[0]
            if self.mode == "grid":
                lo, hi = center - radius, center + radius
                axes = [
                    lo[i] + self.step * np.arange(int((hi[i] - lo[i]) / self.step + 1e-9) + 1)
                    for i in range(d)
                ]
                mesh = np.meshgrid(*axes, indexing="ij")
                pts = np.column_stack([m.ravel() for m in mesh])
            else:
                rng = np.random.default_rng(self.seed)
                g = rng.standard_normal((self.count, d))
                g /= np.linalg.norm(g, axis=1)[:, None]
                pts = center + g * (radius * rng.uniform(0, 1, self.count) ** (1.0 / d))[:, None]
            return pts[np.linalg.norm(pts - center, axis=1) <= radius + 1e-12]
        raise ValueError(f"unknown region kind {kind!r}")

    def contains_region(self, pts: np.ndarray) -> bool:
        kind = self.region[0]
        if kind == "box":
            lo = np.asarray(self.region[1], dtype=float)
            hi = np.asarray(self.region[2], dtype=float)
            return bool(np.all(pts >= lo - 1e-12) and np.all(pts <= hi + 1e-12))
        center = np.asarray(self.region[1], dtype=float)
        radius = float(self.region[2])
        return bool(np.all(np.linalg.norm(pts - center, axis=1) <= radius + 1e-12))

    def to_dict(self) -> dict:
        kind = self.region[0]
        out: dict = {"region": kind, "mode": self.mode}
        if kind == "box":
            out["lo"] = list(self.region[1])
            out["hi"] = list(self.region[2])
        else:
            out["center"] = list(self.region[1])
            out["radius"] = self.region[2]
        if self.mode == "grid":
            out["step"] = self.step
        else:
            out["count"] = self.count
            out["seed"] = self.seed
        return out


def _couple_fields(couple: Couple, X: np.ndarray):
    dA = couple.A.dist_many(X)
    dBv = couple.B_minus_v.dist_many(X)
    m = np.maximum(dA, dBv)
    dE = couple.dist_E_many(X)
    return m, dE


def _region_center(sampler: SamplerSpec) -> np.ndarray:
    if sampler.region[0] == "box":
        lo = np.asarray(sampler.region[1], dtype=float)
        hi = np.asarray(sampler.region[2], dtype=float)
        return 0.5 * (lo + hi)
    return np.asarray(sampler.region[1], dtype=float)


def _check_region_covers_E(couple: Couple, eps: float, sampler: SamplerSpec) -> None:
    """The region must contain a 2*eps collar around (a portion of) E; for
    unbounded E only the portion met by the region can be required."""
    center = _region_center(sampler)
    if couple.E is not None:
        central = couple.E.project(center)[None, :]
    else:
        from .metrics import dykstra_project

        central = dykstra_project([couple.A, couple.B_minus_v], center)[None, :]
    es = np.vstack([couple.sample_E(12, seed=3), central])
    collar_ok = np.zeros(es.shape[0], dtype=bool)
    for j, e in enumerate(es):
        probes = [e[None, :]]
        for i in range(couple.dim):
            unit = np.zeros(couple.dim)
            unit[i] = 2.0 * eps
            probes.append((e + unit)[None, :])
            probes.append((e - unit)[None, :])
        collar_ok[j] = sampler.contains_region(np.vstack(probes))
    if not collar_ok.any():
        raise ValueError("sampler region must contain E inflated by at least 2*eps")


@dataclass(frozen=True)
class DeltaEstimate:
    delta: float
    eps: float
    witnesses: np.ndarray  # points that pinned delta (violators just above it)


def estimate_delta(couple: Couple, eps: float, sampler: SamplerSpec) -> DeltaEstimate:
    """Largest sampled delta such that max{dist(x,A), dist(x,B-v)} <= delta
    forces dist(x, E) <= eps.

    Walks a geometric ladder (ratio 1/2 from eps down to 1e-6) and then
    bisects between the last passing and first failing rung, so the returned
    value approaches the sampled supremum min{m(x) : dist(x,E) > eps}.
    """
    if eps <= 0:
        raise ValueError("eps must be positive")
    _check_region_covers_E(couple, eps, sampler)
    X = sampler.points()
    m, dE = _couple_fields(couple, X)
    violators = dE > eps + 1e-12

    def passes(delta: float) -> bool:
        return not np.any(violators & (m <= delta))

    ladder = []
    rung = eps
    while rung >= DELTA_LADDER_FLOOR:
        ladder.append(rung)
        rung *= 0.5
    lo = None
    hi = None
    for rung in ladder:
        if passes(rung):
            lo = rung
            break
        hi = rung
    if lo is None:
        blockers = X[violators & (m <= ladder[-1])]
        raise NoPositiveDeltaError(
            f"no positive delta on the sampled region (eps={eps}); "
            f"{blockers.shape[0]} blocking samples"
        )
    if hi is not None:
        for _ in range(48):
            mid = 0.5 * (lo + hi)
            if passes(mid):
                lo = mid
            else:
                hi = mid
    pinning = X[violators & (m <= (hi if hi is not None else eps * 2))]
    return DeltaEstimate(delta=float(lo), eps=float(eps), witnesses=pinning[:16])


@dataclass(frozen=True)
class LinearKEstimate:
    K: float
    eps: float
    witness: np.ndarray | None
    degenerate: int  # samples with dist(x,E) >= eps but both distances ~ 0


def estimate_linear_K(couple: Couple, eps: float, sampler: SamplerSpec) -> LinearKEstimate:
    """Empirical linear-regularity constant: sup over sampled x with
    dist(x,E) >= eps of dist(x,E) / max{dist(x,A), dist(x,B-v)}, clamped at 1."""
    if eps <= 0:
        raise ValueError("eps must be positive")
    _check_region_covers_E(couple, eps, sampler)
    X = sampler.points()
    m, dE = _couple_fields(couple, X)
    sel = dE >= eps
    if not np.any(sel):
        return LinearKEstimate(K=1.0, eps=eps, witness=None, degenerate=0)
    degenerate = sel & (m <= 1e-14)
    usable = sel & ~degenerate
    if not np.any(usable):
        return LinearKEstimate(K=1.0, eps=eps, witness=None, degenerate=int(degenerate.sum()))
    ratios = dE[usable] / m[usable]
    i = int(np.argmax(ratios))
    K = max(1.0, float(ratios[i]))
    return LinearKEstimate(
        K=K, eps=eps, witness=X[usable][i], degenerate=int(degenerate.sum())
    )


def contraction_factor(K: float) -> float:
    """eta = sqrt(1 - 1/K^2) for K >= 1; strictly increasing, always < 1."""
    if K < 1.0 - 1e-12:
        raise ValueError("K must be >= 1")
    K = max(K, 1.0)
    return math.sqrt(max(0.0, 1.0 - 1.0 / (K * K)))


@dataclass(frozen=True)
class RegularityReport:
    eps_to_delta: dict[float, float]
    K_of_eps: dict[float, float]
    eta_of_eps: dict[float, float]
    sampler: SamplerSpec
    witnesses: list[list[float]]

    def to_dict(self) -> dict:
        return {
            "eps_to_delta": {str(k): v for k, v in self.eps_to_delta.items()},
            "K_of_eps": {str(k): v for k, v in self.K_of_eps.items()},
            "eta_of_eps": {str(k): v for k, v in self.eta_of_eps.items()},
            "sampler": self.sampler.to_dict(),
            "witnesses": self.witnesses,
        }


def regularity_report(
    couple: Couple, eps_values, sampler: SamplerSpec
) -> RegularityReport:
    """Estimate the eps -> delta modulus and linear constants on a grid of eps."""
    eps_to_delta: dict[float, float] = {}
    K_of_eps: dict[float, float] = {}
    eta_of_eps: dict[float, float] = {}
    witnesses: list[list[float]] = []
    for eps in eps_values:
        try:
            d = estimate_delta(couple, eps, sampler)
            eps_to_delta[eps] = d.delta
        except NoPositiveDeltaError:
            pass
        k = estimate_linear_K(couple, eps, sampler)
        K_of_eps[eps] = k.K
        eta_of_eps[eps] = contraction_factor(k.K)
        if k.witness is not None:
            witnesses.append([float(t) for t in k.witness])
    return RegularityReport(
        eps_to_delta=eps_to_delta,
        K_of_eps=K_of_eps,
        eta_of_eps=eta_of_eps,
        sampler=sampler,
        witnesses=witnesses,
    )


def _verify_on_boundary(G: ConvexSet, p: np.ndarray, tol: float = 1e-8) -> None:
    """Check that p sits on the boundary of G within tol (G contains 0 in its
    interior): p must be in G, and the radial crossing bracketed around ||p||
    must agree with ||p||."""
    r = float(np.linalg.norm(p))
    if r == 0.0:
        raise PreconditionFailedError("boundary points must be nonzero")
    scale = max(1.0, r)
    if G.dist(p) > tol * scale:
        raise PreconditionFailedError(f"point at radius {r:.9f} is outside G")
    u = p / r
    lo, hi = r - 2e-6 * scale, r + 2e-6 * scale
    if G.dist(hi * u) <= 1e-12:
        raise PreconditionFailedError(
            f"point at radius {r:.9f} is interior to G (no crossing within 2e-6)"
        )
    for _ in range(24):
        mid = 0.5 * (lo + hi)
        if G.dist(mid * u) <= 1e-12:
            lo = mid
        else:
            hi = mid
    if abs(lo - r) > tol * scale:
        raise PreconditionFailedError(
            f"point at radius {r:.9f} is not on the boundary (crossing at {lo:.9f})"
        )


@dataclass(frozen=True)
class BoundaryBoundResult:
    holds: bool
    lhs: float
    rhs: float
    theta: float


def check_boundary_bound(
    G: ConvexSet,
    eps: float,
    K: float,
    u,
    w,
    *,
    n_dirs: int = 64,
    seed: int = 0,
) -> BoundaryBoundResult:
    """For a body with eps*B subset G subset K*B and boundary points u, w at
    cosine theta > 0: verifies ||u - w||^2 <= K^2 (K^2/eps^2 + 1)(1-theta^2)/theta^2.

    Containment is verified by sampled support directions; boundary membership
    by a radial bisection from the origin (within 1e-8).
    """
    if eps <= 0 or K <= 0:
        raise ValueError("eps and K must be positive")
    u = as_point(u, G.dim)
    w = as_point(w, G.dim)
    rng = np.random.default_rng(seed)
    dirs = rng.standard_normal((n_dirs, G.dim))
    dirs /= np.linalg.norm(dirs, axis=1)[:, None]
    for d in dirs:
        try:
            h = G.support_value(d)
        except UnboundedSetError:
            raise PreconditionFailedError("G is unbounded; containment in K*B fails")
        if h < eps - 1e-9 or h > K + 1e-9:
            raise PreconditionFailedError(
                f"containment eps*B in G in K*B fails in a sampled direction (h={h:.6f})"
            )
    for p in (u, w):
        _verify_on_boundary(G, p)
    theta = cosine(u, w)
    if theta <= 0:
        raise NonpositiveCosineError("the bound requires cos(u, w) > 0")
    lhs = float(np.linalg.norm(u - w) ** 2)
    rhs = K * K * (K * K / (eps * eps) + 1.0) * (1.0 - theta * theta) / (theta * theta)
    return BoundaryBoundResult(holds=bool(lhs <= rhs + 1e-9), lhs=lhs, rhs=rhs, theta=theta)


@dataclass(frozen=True)
class QuasiOrthogonalityResult:
    applicable: bool
    holds: bool


def check_quasi_orthogonality(
    x, y, eta: float, delta: float, eta_prime: float
) -> QuasiOrthogonalityResult:
    """Hypotheses: eta < eta' in (0,1), delta in (0,1) with
    (delta + eta)/(1 - delta) <= eta', cos(x, y) <= eta and
    cos(y - x, -x) <= delta; conclusion ||x|| <= eta' ||y||."""
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    if not (0 < eta < 1 and 0 < eta_prime < 1 and eta < eta_prime):
        raise ValueError("need 0 < eta < eta' < 1")
    if not (0 < delta < 1):
        raise ValueError("need delta in (0, 1)")
    gram = np.array([[x @ x, x @ y], [x @ y, y @ y]])
    if np.linalg.det(gram) <= 1e-14 * max(1.0, float(x @ x) * float(y @ y)):
        raise ValueError("x and y must be linearly independent")
    gate = (delta + eta) / (1.0 - delta) <= eta_prime + 1e-15
    applicable = bool(
        gate and cosine(x, y) <= eta + 1e-15 and cosine(y - x, -x) <= delta + 1e-15
    )
    holds = bool(
        float(np.linalg.norm(x)) <= eta_prime * float(np.linalg.norm(y)) + 1e-12
    )
    return QuasiOrthogonalityResult(applicable=applicable, holds=holds)


def modulus_of_convexity(eta: float) -> float:
    """Euclidean modulus of convexity: 1 - sqrt(1 - eta^2/4) on [0, 2]."""
    if eta < -1e-12 or eta > 2.0 + 1e-12:
        raise ValueError("eta must lie in [0, 2]")
    eta = min(max(eta, 0.0), 2.0)
    return 1.0 - math.sqrt(max(0.0, 1.0 - eta * eta / 4.0))


class AnnulusMembershipError(ValueError):
    """Sampled points of C leave the declared annulus."""


@dataclass(frozen=True)
class AnnulusResult:
    applicable: bool
    holds: bool
    diameter: float


def check_annulus_diameter(
    C: ConvexSet, rho: float, eps_prime: float, M: float, *, n_samples: int = 64
) -> AnnulusResult:
    """Convex C inside the annulus rho-eps' <= ||c|| <= rho+eps': when the
    scaled rotundity condition eps'(2 - delta(M/(rho+eps'))) < rho*delta(...)
    holds, diam(C) <= M must follow."""
    if rho < 0 or eps_prime <= 0 or M <= 0:
        raise ValueError("need rho >= 0, eps' > 0, M > 0")
    pts = sample_points(C, n_samples, seed=5)
    norms = np.linalg.norm(pts, axis=1)
    if np.any(norms < rho - eps_prime - 1e-9) or np.any(norms > rho + eps_prime + 1e-9):
        raise AnnulusMembershipError(
            f"sampled norms in [{norms.min():.6f}, {norms.max():.6f}] leave the annulus"
        )
    arg = min(2.0, M / (rho + eps_prime))
    d = modulus_of_convexity(arg)
    applicable = bool(eps_prime * (2.0 - d) < rho * d)
    diam = diameter_estimate(C)
    return AnnulusResult(applicable=applicable, holds=bool(diam <= M + 1e-9), diameter=diam)


def check_strongly_exposes(
    A: ConvexSet,
    f,
    a,
    *,
    n_probes: int = 64,
    cluster_tol: float = 0.05,
    probe_radius: float = 10.0,
    seed: int = 0,
) -> bool:
    """True iff the functional <f, .> appears to strongly expose A at a:
    f attains its supremum over A at a, and every sampled near-maximizing
    point collapses onto a as the value gap shrinks.

    Near-maximizers are harvested two ways: support points in directions
    tilted off f (which sweep the exposed face), and projections of an
    ambient cloud onto A (which cover unbounded faces).  A far sample whose
    value ladder reaches the supremum is a witness against exposure.
    """
    f = as_point(f, A.dim)
    f = f / float(np.linalg.norm(f))
    a = as_point(a, A.dim)
    if A.dist(a) > 1e-8:
        raise ValueError("a must belong to A")
    sup = A.support_value(f)  # UnboundedSetError propagates
    scale = 1.0 + abs(sup)
    if float(f @ a) < sup - 1e-8 * scale:
        return False
    rng = np.random.default_rng(seed)
    candidates = [a[None, :]]
    tilts = np.geomspace(1e-3, 0.5, 8)
    for t in tilts:
        for _ in range(max(2, n_probes // 8)):
            g = rng.standard_normal(A.dim)
            g -= (g @ f) * f
            gn = float(np.linalg.norm(g))
            if gn == 0.0:
                continue
            direction = f + t * (g / gn)
            try:
                s = A.support_point(direction / np.linalg.norm(direction))
            except UnboundedSetError:
                continue
            candidates.append(s[None, :])
    cloud = a + rng.uniform(-probe_radius, probe_radius, (n_probes, A.dim))
    candidates.append(A.project_many(cloud))
    pts = np.vstack(candidates)
    vals = pts @ f
    dists = np.linalg.norm(pts - a, axis=1)
    tau_min = 1e-6 * scale
    near = vals >= sup - tau_min
    if not np.any(near):
        # nothing sampled close enough in value to distinguish; treat the
        # attained supremum at a with no far witnesses as exposure
        return True
    return bool(np.max(dists[near]) <= cluster_tol)
