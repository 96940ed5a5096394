"""Distances, excess and localized gaps, displacement vector, nearest-set
machinery (the couple's E and F), and Dykstra projection onto intersections.

The localized excess e_N(A, B) restricts the supremum to A intersected with
the ball of radius N.  It is exact (vertex enumeration) for polytopes inside
that ball and a certified lower bound from in-set samples otherwise.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .sets import (
    AffineSubspace,
    Ball,
    ConvexSet,
    DimensionMismatchError,
    Hyperplane,
    Translate,
    VPolytope,
    Wedge,
    as_point,
    base_variant,
    effective_vertices,
)


class NonConvergentError(RuntimeError):
    """An iterative estimate failed its Cauchy/certificate criterion."""


class ValidationFailureError(RuntimeError):
    """A constructed couple violates the nearest-set identities."""


@dataclass(frozen=True)
class GapEstimate:
    """Value of an excess/gap computation.

    kind is "exact" only when the supremum was enumerated (polytope vertices,
    singletons); sampled estimates are certified lower bounds.
    """

    value: float
    kind: str  # "exact" | "lower-bound-sampled"
    samples: int

    def to_dict(self) -> dict:
        return {"value": self.value, "kind": self.kind, "samples": self.samples}


@dataclass(frozen=True)
class GapSampler:
    """Sampling budget for non-enumerable excess estimates."""

    boundary_samples: int = 256
    grid_step: float | None = None
    seed: int = 0

    def to_dict(self) -> dict:
        out: dict = {"seed": self.seed}
        if self.grid_step is not None:
            out["grid_step"] = self.grid_step
        else:
            out["boundary_samples"] = self.boundary_samples
        return out

    @classmethod
    def from_dict(cls, d: dict) -> "GapSampler":
        return cls(
            boundary_samples=int(d.get("boundary_samples", 256)),
            grid_step=d.get("grid_step"),
            seed=int(d.get("seed", 0)),
        )


DEFAULT_SAMPLER = GapSampler()


def point_dist(x, S: ConvexSet, tol: float | None = None) -> float:
    """dist(x, S) = ||x - P_S x||."""
    return S.dist(x, tol)


def _unit_directions(dim: int, count: int, rng: np.random.Generator) -> np.ndarray:
    g = rng.standard_normal((count, dim))
    axes = np.vstack([np.eye(dim), -np.eye(dim)])
    g = np.vstack([axes, g])
    return g / np.linalg.norm(g, axis=1)[:, None]


def _ball_crossing(inside: np.ndarray, outside: np.ndarray, N: float) -> np.ndarray:
    """Point on the segment [inside, outside] with norm N (binary search)."""
    lo, hi = 0.0, 1.0
    for _ in range(60):
        mid = 0.5 * (lo + hi)
        p = inside + mid * (outside - inside)
        if np.linalg.norm(p) <= N:
            lo = mid
        else:
            hi = mid
    return inside + lo * (outside - inside)


def _chart_disc_samples(
    center: np.ndarray, radius2: float, k: int, halfplane: bool, grid_step: float | None, rng
) -> np.ndarray:
    """Sample (u, v) chart coordinates of a disc, optionally cut to v >= 0."""
    if radius2 <= 0:
        return np.zeros((0, 2))
    r = math.sqrt(radius2)
    if grid_step is not None:
        side_u = max(2, int(2 * r / grid_step) + 1)
        u = np.linspace(center[0] - r, center[0] + r, side_u)
        vlo = max(0.0, center[1] - r) if halfplane else center[1] - r
        vhi = center[1] + r
        side_v = max(2, int((vhi - vlo) / grid_step) + 1)
        v = np.linspace(vlo, vhi, side_v)
        U, V = np.meshgrid(u, v)
        pts = np.column_stack([U.ravel(), V.ravel()])
    else:
        ang = rng.uniform(0, 2 * np.pi, k)
        rad = r * np.sqrt(rng.uniform(0, 1, k))
        pts = center + np.column_stack([rad * np.cos(ang), rad * np.sin(ang)])
        # include the disc rim, where suprema of convex functions live
        rim = center + r * np.column_stack([np.cos(ang[: k // 2]), np.sin(ang[: k // 2])])
        pts = np.vstack([pts, rim])
    if halfplane:
        pts[:, 1] = np.maximum(pts[:, 1], 0.0)
    inside = (pts[:, 0] - center[0]) ** 2 + (pts[:, 1] - center[1]) ** 2 <= radius2 + 1e-12
    return pts[inside]


def _flat_samples_in_ball(
    origin: np.ndarray,
    frame: np.ndarray,
    N: float,
    k: int,
    halfplane: bool,
    grid_step: float | None,
    rng,
) -> np.ndarray:
    """Samples of an affine flat {origin + frame^T t (t in R^m)} inside N*B."""
    m = frame.shape[0]
    coords0 = -(frame @ origin)
    h2 = float(origin @ origin) - float(coords0 @ coords0)
    radius2 = N * N - h2
    if radius2 <= 0:
        return np.zeros((0, origin.shape[0]))
    if m == 1:
        r = math.sqrt(radius2)
        lo = coords0[0] - r
        if halfplane:
            lo = max(0.0, lo)
        t = np.linspace(lo, coords0[0] + r, max(2, k))[:, None]
        pts = origin + t @ frame
        return pts
    if m == 2:
        T = _chart_disc_samples(coords0, radius2, k, halfplane, grid_step, rng)
        return origin + T @ frame
    # higher-dimensional flats: random ball samples in chart coordinates
    g = rng.standard_normal((k, m))
    g /= np.linalg.norm(g, axis=1)[:, None]
    rad = math.sqrt(radius2) * rng.uniform(0, 1, k) ** (1.0 / m)
    T = coords0 + g * rad[:, None]
    return origin + T @ frame


def _hyperplane_frame(H: Hyperplane) -> tuple[np.ndarray, np.ndarray]:
    base = H.offset * H.normal
    _, _, vt = np.linalg.svd(H.normal[None, :])
    return base, vt[1:]


def sample_in_ball(S: ConvexSet, N: float, sampler: GapSampler = DEFAULT_SAMPLER) -> np.ndarray:
    """Points of S with norm <= N; empty array when S misses the ball.

    Sampling is seeded and deterministic; extreme regions (vertices, sphere
    crossings, chart rims) are purposely over-represented because excess
    suprema are attained there.
    """
    nearest = S.project(np.zeros(S.dim))
    if np.linalg.norm(nearest) > N + 1e-12:
        return np.zeros((0, S.dim))
    rng = np.random.default_rng(sampler.seed)
    k = sampler.boundary_samples
    grid_step = sampler.grid_step
    if isinstance(S, Translate):
        inner_pts = sample_in_ball(
            S.inner,
            N + float(np.linalg.norm(S.shift)),
            sampler,
        )
        pts = inner_pts + S.shift
    else:
        core = base_variant(S)
        if isinstance(core, VPolytope):
            V = core.vertices
            pts = [V]
            if V.shape[0] > 1:
                w = rng.dirichlet(np.ones(V.shape[0]), size=k)
                pts.append(w @ V)
            norms = np.linalg.norm(V, axis=1)
            if np.any(norms > N):
                inside0 = nearest
                pts.append(
                    np.array([_ball_crossing(inside0, v, N) for v in V[norms > N]])
                )
            pts = np.vstack(pts)
        elif isinstance(core, Ball):
            dirs = _unit_directions(core.dim, k, rng)
            sphere = core.center + core.radius * dirs
            shrink = rng.uniform(0, 1, (dirs.shape[0] // 4, 1))
            interior = core.center + core.radius * dirs[: dirs.shape[0] // 4] * shrink
            pts = np.vstack([sphere, core.center[None, :]])
            bad = np.linalg.norm(pts, axis=1) > N
            if bad.any():
                fixed = np.array([_ball_crossing(nearest, p, N) for p in pts[bad]])
                pts = np.vstack([pts[~bad], fixed])
            interior = interior[np.linalg.norm(interior, axis=1) <= N]
            pts = np.vstack([pts, interior])
        elif isinstance(core, Wedge):
            frame = np.vstack([core.e1, core.e2])
            pts = _flat_samples_in_ball(core.origin, frame, N, k * 4, True, grid_step, rng)
        elif isinstance(core, AffineSubspace):
            if core.subspace_dim == 0:
                pts = core.base[None, :]
            else:
                pts = _flat_samples_in_ball(
                    core.base, core.basis, N, k * 4, False, grid_step, rng
                )
        elif isinstance(core, Hyperplane):
            base, frame = _hyperplane_frame(core)
            pts = _flat_samples_in_ball(base, frame, N, k * 4, False, grid_step, rng)
        else:
            # halfspaces, H-polyhedra: project ball samples into the set
            dirs = _unit_directions(core.dim, k, rng)
            radii = N * rng.uniform(0, 1, dirs.shape[0]) ** (1.0 / core.dim)
            cloud = np.vstack([N * dirs, dirs * radii[:, None], np.zeros((1, core.dim))])
            pts = core.project_many(cloud)
        pts = pts[np.linalg.norm(pts, axis=1) <= N + 1e-9]
    if pts.size == 0:
        pts = nearest[None, :]
    return pts


def excess_local(
    A: ConvexSet, B: ConvexSet, N: int, sampler: GapSampler = DEFAULT_SAMPLER
) -> GapEstimate:
    """Localized excess e_N(A, B): sup of dist(., B) over A within the N-ball."""
    if A.dim != B.dim:
        raise DimensionMismatchError("excess needs sets of equal dimension")
    if N <= 0:
        raise ValueError("N must be positive")
    V = effective_vertices(A)
    if V is not None and np.all(np.linalg.norm(V, axis=1) <= N + 1e-12):
        d = B.dist_many(V)
        return GapEstimate(float(d.max()), "exact", V.shape[0])
    pts = sample_in_ball(A, float(N), sampler)
    if pts.shape[0] == 0:
        return GapEstimate(0.0, "exact", 0)
    d = B.dist_many(pts)
    return GapEstimate(float(d.max()), "lower-bound-sampled", pts.shape[0])


def aw_gap(
    A: ConvexSet, B: ConvexSet, N: int, sampler: GapSampler = DEFAULT_SAMPLER
) -> GapEstimate:
    """Localized symmetric gap h_N(A, B) = max(e_N(A, B), e_N(B, A))."""
    e_ab = excess_local(A, B, N, sampler)
    e_ba = excess_local(B, A, N, sampler)
    kind = "exact" if e_ab.kind == "exact" and e_ba.kind == "exact" else "lower-bound-sampled"
    return GapEstimate(max(e_ab.value, e_ba.value), kind, e_ab.samples + e_ba.samples)


def displacement_vector(
    A: ConvexSet,
    B: ConvexSet,
    *,
    tol: float = 1e-7,
    start=None,
    cap: int = 2_000_000,
) -> np.ndarray:
    """Displacement vector of (A, B), estimated as the limit of b_n - a_n
    along an unperturbed alternating-projections run.

    The run stops once successive difference vectors move less than
    200*tol^2 on two consecutive steps; under the worst (tangent-contact)
    decay profile this bounds the error on ||v|| by about 10*tol, which the
    terminal cross-check against dist(a*, B) enforces.
    """
    if A.dim != B.dim:
        raise DimensionMismatchError("displacement needs sets of equal dimension")
    if tol <= 0:
        raise ValueError("tol must be positive")
    c = np.zeros(A.dim) if start is None else as_point(start, A.dim)
    inc_tol = 200.0 * tol * tol
    v_prev = None
    ok = 0
    v = None
    a = c
    for _n in range(cap):
        b = B.project(a)
        a = A.project(b)
        v = b - a
        if v_prev is not None:
            if float(np.linalg.norm(v - v_prev)) <= inc_tol:
                ok += 1
                if ok >= 2:
                    break
            else:
                ok = 0
        v_prev = v
    else:
        raise NonConvergentError(
            "difference vectors failed the Cauchy criterion within the cap "
            "(distance may be unattained)"
        )
    check = B.dist(a)
    if abs(float(np.linalg.norm(v)) - check) > 10.0 * tol:
        raise NonConvergentError(
            f"terminal cross-check failed: ||v||={np.linalg.norm(v):.3e} "
            f"vs dist(a*, B)={check:.3e}"
        )
    if float(np.linalg.norm(v)) <= 10.0 * tol:
        return np.zeros(A.dim)
    return v


def dykstra_project(
    sets: list[ConvexSet] | tuple[ConvexSet, ...],
    x,
    tol: float = 1e-8,
    cap: int = 20_000,
) -> np.ndarray:
    """Projection of x onto the intersection of the given sets (Dykstra).

    Convergence is monitored by the cycle displacement of the correction
    increments together with feasibility of the iterate.
    """
    if not sets:
        raise ValueError("need at least one set")
    dims = {S.dim for S in sets}
    if len(dims) != 1:
        raise DimensionMismatchError("sets have differing dimensions")
    p = as_point(x, sets[0].dim)
    if len(sets) == 1:
        return sets[0].project(p)
    y = np.array(p)
    incs = [np.zeros(p.shape[0]) for _ in sets]
    stop2 = (0.1 * tol) ** 2
    for _cycle in range(cap):
        cdelta = 0.0
        for i, S in enumerate(sets):
            w = y + incs[i]
            y_new = S.project(w)
            new_inc = w - y_new
            diff = new_inc - incs[i]
            cdelta += float(diff @ diff)
            incs[i] = new_inc
            y = y_new
        if cdelta <= stop2:
            if max(S.dist(y) for S in sets) <= tol:
                return y
    raise NonConvergentError("Dykstra projection exceeded the cycle cap")


def diameter_estimate(S: ConvexSet, *, samples: int = 128, seed: int = 0) -> float:
    """Diameter of a bounded set: exact for polytopes and balls, a
    support-sampled lower bound otherwise; unbounded variants raise."""
    core = base_variant(S)
    if not core.is_bounded:
        from .sets import UnboundedSetError

        raise UnboundedSetError("diameter of an unbounded set")
    if isinstance(core, Ball):
        return 2.0 * core.radius
    V = effective_vertices(S)
    if V is None and isinstance(core, AffineSubspace) and core.subspace_dim == 0:
        return 0.0
    if V is not None:
        if V.shape[0] == 1:
            return 0.0
        diff = V[:, None, :] - V[None, :, :]
        return float(np.sqrt(np.max(np.einsum("ijk,ijk->ij", diff, diff))))
    rng = np.random.default_rng(seed)
    dirs = _unit_directions(S.dim, samples, rng)
    best = 0.0
    for u in dirs:
        p = S.support_point(u)
        q = S.support_point(-u)
        best = max(best, float(np.linalg.norm(p - q)))
    return best


def sample_points(S: ConvexSet, count: int, *, radius: float = 10.0, seed: int = 0) -> np.ndarray:
    """Deterministic points of S (a bounded patch of it when S is unbounded)."""
    rng = np.random.default_rng(seed)
    core = base_variant(S)
    shift = S.shift if isinstance(S, Translate) else np.zeros(S.dim)
    V = effective_vertices(S)
    if V is not None:
        if V.shape[0] == 1:
            return np.repeat(V, max(1, count), axis=0)
        w = rng.dirichlet(np.ones(V.shape[0]), size=max(count, 1))
        return np.vstack([V, w @ V])[: max(count, 1)]
    if isinstance(core, Ball):
        dirs = _unit_directions(core.dim, count, rng)[:count]
        radii = core.radius * rng.uniform(0, 1, count) ** (1.0 / core.dim)
        return core.center + dirs * radii[:, None] + shift
    if isinstance(core, Wedge):
        u = rng.uniform(-radius, radius, count)
        v = rng.uniform(0, radius, count)
        pts = core.origin + u[:, None] * core.e1 + v[:, None] * core.e2
        return pts + shift
    if isinstance(core, AffineSubspace):
        if core.subspace_dim == 0:
            return np.repeat(core.base[None, :] + shift, max(1, count), axis=0)
        t = rng.uniform(-radius, radius, (count, core.subspace_dim))
        return core.base + t @ core.basis + shift
    if isinstance(core, Hyperplane):
        base, frame = _hyperplane_frame(core)
        t = rng.uniform(-radius, radius, (count, frame.shape[0]))
        return base + t @ frame + shift
    # halfspaces / polyhedra: project a deterministic cloud into the set
    cloud = rng.uniform(-radius, radius, (count, core.dim))
    return core.project_many(cloud) + shift


@dataclass(frozen=True, eq=False)
class Couple:
    """A pair (A, B) with its displacement vector and nearest-set descriptors.

    E is the set of points of A nearest to B and F its mirror in B; they
    satisfy F = E + v.  When a scenario supplies an analytic descriptor for E
    it is stored here; otherwise distances to E are computed through Dykstra
    on the implicit intersection A cap (B - v).
    """

    A: ConvexSet
    B: ConvexSet
    v: np.ndarray
    d_AB: float
    E: ConvexSet | None
    F: ConvexSet | None
    B_minus_v: ConvexSet
    A_plus_v: ConvexSet
    tol: float = 1e-7

    @property
    def dim(self) -> int:
        return self.A.dim

    @property
    def has_analytic_E(self) -> bool:
        return self.E is not None

    def dist_E(self, x) -> float:
        if self.E is not None:
            return self.E.dist(x)
        p = as_point(x, self.dim)
        return float(np.linalg.norm(p - dykstra_project([self.A, self.B_minus_v], p)))

    def dist_E_many(self, X) -> np.ndarray:
        if self.E is not None:
            return self.E.dist_many(X)
        return np.array([self.dist_E(x) for x in np.asarray(X, dtype=float)])

    def dist_F(self, x) -> float:
        if self.F is not None:
            return self.F.dist(x)
        p = as_point(x, self.dim)
        return float(np.linalg.norm(p - dykstra_project([self.B, self.A_plus_v], p)))

    def sample_E(self, count: int = 16, *, radius: float = 10.0, seed: int = 0) -> np.ndarray:
        if self.E is not None:
            return sample_points(self.E, count, radius=radius, seed=seed)
        rng = np.random.default_rng(seed)
        probes = rng.uniform(-radius, radius, (count, self.dim))
        return np.array(
            [dykstra_project([self.A, self.B_minus_v], p) for p in probes]
        )


def dist_to_E(couple: Couple, x) -> float:
    """dist(x, E), analytic when a descriptor exists, Dykstra otherwise."""
    return couple.dist_E(x)


def make_couple(
    A: ConvexSet,
    B: ConvexSet,
    *,
    E: ConvexSet | None = None,
    tol: float = 1e-7,
    start=None,
    validate: bool = True,
    n_check: int = 8,
) -> Couple:
    """Build a Couple: estimate v dynamically, cache descriptors, and check
    the nearest-set identities P_B e = e + v and P_A P_B e = e on samples."""
    if A.dim != B.dim:
        raise DimensionMismatchError("couple needs sets of equal dimension")
    v = displacement_vector(A, B, tol=tol, start=start)
    d = float(np.linalg.norm(v))
    B_minus_v = B.translate(-v)
    A_plus_v = A.translate(v)
    F = E.translate(v) if E is not None else None
    couple = Couple(
        A=A, B=B, v=v, d_AB=d, E=E, F=F,
        B_minus_v=B_minus_v, A_plus_v=A_plus_v, tol=tol,
    )
    if validate:
        slack = 10.0 * tol
        es = couple.sample_E(n_check, seed=7)
        for e in es:
            if E is not None:
                if A.dist(e) > slack or B_minus_v.dist(e) > slack:
                    raise ValidationFailureError(
                        "analytic E descriptor is not inside A cap (B - v)"
                    )
            pb = B.project(e)
            if np.linalg.norm(pb - (e + v)) > slack:
                raise ValidationFailureError(
                    f"P_B e deviates from e + v by {np.linalg.norm(pb - (e + v)):.3e}"
                )
            if np.linalg.norm(A.project(pb) - e) > slack:
                raise ValidationFailureError("P_A P_B e deviates from e")
    return couple
