"""Closed convex subsets of R^d with projection, membership, and support oracles.

Every set variant is an immutable value object: construction normalizes and
validates the data, after which all operations are pure and safe to share
between threads.  Projections are exact closed forms where available
(halfspace, hyperplane, affine subspace, ball, wedge, translate) and
certified iterative schemes otherwise (V-polytopes via Wolfe's nearest-point
algorithm, H-polyhedra via Hildreth's dual coordinate ascent).
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np
from scipy.optimize import linprog

DEFAULT_CLOSED_FORM_TOL = 1e-10
DEFAULT_ITERATIVE_TOL = 1e-8

# Direction vectors whose relative residual is below this are treated as
# exactly aligned in support computations.
_DIRECTION_TOL = 1e-12


class DimensionMismatchError(ValueError):
    """A point's dimension does not match the set's ambient dimension."""


class UnboundedSetError(ValueError):
    """The requested quantity is infinite in the given direction."""


class InfeasibleSetError(ValueError):
    """An H-polyhedron admits no witness point."""


class ProjectionNonConvergenceError(RuntimeError):
    """The inner iterative projection solver failed to certify its answer."""


def as_point(x, dim: int | None = None) -> np.ndarray:
    """Coerce to a finite float64 vector, optionally checking the dimension."""
    p = np.asarray(x, dtype=float)
    if p.ndim != 1:
        raise ValueError(f"expected a 1-d point, got shape {p.shape}")
    if not np.all(np.isfinite(p)):
        raise ValueError("point has non-finite entries")
    if dim is not None and p.shape[0] != dim:
        raise DimensionMismatchError(f"point has dim {p.shape[0]}, set has dim {dim}")
    return p


def _unit(v: np.ndarray, what: str = "vector") -> np.ndarray:
    n = float(np.linalg.norm(v))
    if n == 0.0:
        raise ValueError(f"{what} must be nonzero")
    return v / n


def _frozen(a: np.ndarray) -> np.ndarray:
    out = np.array(a, dtype=float)
    out.setflags(write=False)
    return out


class ConvexSet:
    """Base class: a nonempty closed convex subset of R^d."""

    dim: int

    # Subclasses implement _project(x) exactly or within the given tol.
    def _project(self, x: np.ndarray, tol: float) -> np.ndarray:
        raise NotImplementedError

    def _default_tol(self) -> float:
        return DEFAULT_CLOSED_FORM_TOL

    def project(self, x, tol: float | None = None) -> np.ndarray:
        """Nearest point of the set to x (within tol for iterative variants)."""
        p = as_point(x, self.dim)
        t = self._default_tol() if tol is None else float(tol)
        if t <= 0:
            raise ValueError("tol must be positive")
        return self._project(p, t)

    def project_many(self, X, tol: float | None = None) -> np.ndarray:
        """Row-wise projection of an (n, d) array of points."""
        pts = np.asarray(X, dtype=float)
        if pts.ndim != 2 or pts.shape[1] != self.dim:
            raise DimensionMismatchError(f"expected (n, {self.dim}) array, got {pts.shape}")
        t = self._default_tol() if tol is None else float(tol)
        return self._project_many(pts, t)

    def _project_many(self, X: np.ndarray, tol: float) -> np.ndarray:
        return np.array([self._project(x, tol) for x in X])

    def dist(self, x, tol: float | None = None) -> float:
        return float(np.linalg.norm(as_point(x, self.dim) - self.project(x, tol)))

    def dist_many(self, X, tol: float | None = None) -> np.ndarray:
        pts = np.asarray(X, dtype=float)
        return np.linalg.norm(pts - self.project_many(pts, tol), axis=1)

    def contains(self, x, tol: float = 0.0) -> bool:
        """True iff dist(x, S) <= tol."""
        if tol < 0:
            raise ValueError("tol must be nonnegative")
        return self.dist(x) <= tol + self._default_tol()

    def support_value(self, u) -> float:
        """sup over the set of <u, .>; raises UnboundedSetError if infinite."""
        raise NotImplementedError

    def support_point(self, u) -> np.ndarray:
        """A point attaining support_value(u) (within tolerance)."""
        raise NotImplementedError

    @property
    def is_bounded(self) -> bool:
        return False

    def translate(self, shift) -> "ConvexSet":
        """The set shifted by the given vector (exact, via the Translate variant)."""
        t = as_point(shift, self.dim)
        if not t.any():
            return self
        return Translate(self, t)

    def anchor(self) -> np.ndarray:
        """A deterministic point of the set."""
        raise NotImplementedError


@dataclass(frozen=True, eq=False)
class Halfspace(ConvexSet):
    """{x : <normal, x> >= offset}; the normal is normalized at construction."""

    normal: np.ndarray
    offset: float

    def __init__(self, normal, offset: float):
        n = as_point(normal)
        scale = float(np.linalg.norm(n))
        if scale == 0.0:
            raise ValueError("halfspace normal must be nonzero")
        object.__setattr__(self, "normal", _frozen(n / scale))
        object.__setattr__(self, "offset", float(offset) / scale)
        object.__setattr__(self, "dim", n.shape[0])

    def margin(self, x) -> float:
        """Signed slack <normal, x> - offset (nonnegative inside)."""
        return float(self.normal @ as_point(x, self.dim)) - self.offset

    def _project(self, x, tol):
        m = float(self.normal @ x) - self.offset
        return x if m >= 0 else x - m * self.normal

    def _project_many(self, X, tol):
        m = X @ self.normal - self.offset
        shift = np.minimum(m, 0.0)
        return X - shift[:, None] * self.normal

    def contains(self, x, tol: float = 0.0) -> bool:
        return self.margin(x) >= -tol - DEFAULT_CLOSED_FORM_TOL

    def support_value(self, u):
        d = as_point(u, self.dim)
        alpha = float(d @ self.normal)
        resid = d - alpha * self.normal
        if np.linalg.norm(resid) > _DIRECTION_TOL * max(1.0, np.linalg.norm(d)) or alpha > _DIRECTION_TOL:
            raise UnboundedSetError("halfspace is unbounded in this direction")
        return alpha * self.offset

    def support_point(self, u):
        self.support_value(u)
        return self.offset * self.normal

    def anchor(self):
        return self.offset * self.normal


@dataclass(frozen=True, eq=False)
class Hyperplane(ConvexSet):
    """{x : <normal, x> = offset}; the normal is normalized at construction."""

    normal: np.ndarray
    offset: float

    def __init__(self, normal, offset: float):
        n = as_point(normal)
        scale = float(np.linalg.norm(n))
        if scale == 0.0:
            raise ValueError("hyperplane normal must be nonzero")
        object.__setattr__(self, "normal", _frozen(n / scale))
        object.__setattr__(self, "offset", float(offset) / scale)
        object.__setattr__(self, "dim", n.shape[0])

    def _project(self, x, tol):
        return x - (float(self.normal @ x) - self.offset) * self.normal

    def _project_many(self, X, tol):
        m = X @ self.normal - self.offset
        return X - m[:, None] * self.normal

    def support_value(self, u):
        d = as_point(u, self.dim)
        alpha = float(d @ self.normal)
        resid = d - alpha * self.normal
        if np.linalg.norm(resid) > _DIRECTION_TOL * max(1.0, np.linalg.norm(d)):
            raise UnboundedSetError("hyperplane is unbounded in this direction")
        return alpha * self.offset

    def support_point(self, u):
        self.support_value(u)
        return self.offset * self.normal

    def anchor(self):
        return self.offset * self.normal


@dataclass(frozen=True, eq=False)
class AffineSubspace(ConvexSet):
    """base + span(basis); the basis is orthonormalized at construction.

    An empty basis yields a singleton.
    """

    base: np.ndarray
    basis: np.ndarray  # (k, d), orthonormal rows

    def __init__(self, base, basis: Sequence = ()):
        p = as_point(base)
        rows = [as_point(b, p.shape[0]) for b in basis]
        if rows:
            q, r = np.linalg.qr(np.array(rows).T)  # (d, k)
            keep = np.abs(np.diag(r)) > 1e-12
            ortho = q.T[keep]
        else:
            ortho = np.zeros((0, p.shape[0]))
        object.__setattr__(self, "base", _frozen(p))
        object.__setattr__(self, "basis", _frozen(ortho))
        object.__setattr__(self, "dim", p.shape[0])

    @property
    def subspace_dim(self) -> int:
        return self.basis.shape[0]

    def _project(self, x, tol):
        r = x - self.base
        return self.base + self.basis.T @ (self.basis @ r)

    def _project_many(self, X, tol):
        R = X - self.base
        return self.base + (R @ self.basis.T) @ self.basis

    @property
    def is_bounded(self) -> bool:
        return self.subspace_dim == 0

    def support_value(self, u):
        d = as_point(u, self.dim)
        if self.subspace_dim:
            w = self.basis @ d
            if np.linalg.norm(w) > _DIRECTION_TOL * max(1.0, np.linalg.norm(d)):
                raise UnboundedSetError("affine subspace is unbounded in this direction")
        return float(d @ self.base)

    def support_point(self, u):
        self.support_value(u)
        return np.array(self.base)

    def anchor(self):
        return np.array(self.base)


@dataclass(frozen=True, eq=False)
class Ball(ConvexSet):
    """Closed Euclidean ball; radius zero gives a singleton."""

    center: np.ndarray
    radius: float

    def __init__(self, center, radius: float):
        c = as_point(center)
        r = float(radius)
        if r < 0:
            raise ValueError("radius must be nonnegative")
        object.__setattr__(self, "center", _frozen(c))
        object.__setattr__(self, "radius", r)
        object.__setattr__(self, "dim", c.shape[0])

    def _project(self, x, tol):
        r = x - self.center
        n = float(np.linalg.norm(r))
        if n <= self.radius:
            return np.array(x)
        return self.center + (self.radius / n) * r

    def _project_many(self, X, tol):
        R = X - self.center
        n = np.linalg.norm(R, axis=1)
        scale = np.ones_like(n)
        outside = n > self.radius
        scale[outside] = self.radius / n[outside]
        return self.center + scale[:, None] * R

    @property
    def is_bounded(self) -> bool:
        return True

    def support_value(self, u):
        d = as_point(u, self.dim)
        return float(d @ self.center) + self.radius * float(np.linalg.norm(d))

    def support_point(self, u):
        d = _unit(as_point(u, self.dim), "direction")
        return self.center + self.radius * d

    def anchor(self):
        return np.array(self.center)


def _dedup_rows(V: np.ndarray, tol: float = 1e-12) -> np.ndarray:
    keep: list[int] = []
    for i in range(V.shape[0]):
        if all(np.linalg.norm(V[i] - V[j]) > tol for j in keep):
            keep.append(i)
    return V[keep]


def _hull_2d(points: np.ndarray) -> np.ndarray:
    """Indices of the convex hull of 2-d points in counterclockwise order."""
    order = np.lexsort((points[:, 1], points[:, 0]))

    def chain(indices):
        out: list[int] = []
        for i in indices:
            while len(out) >= 2:
                o, a = points[out[-2]], points[out[-1]]
                if (a[0] - o[0]) * (points[i][1] - o[1]) - (a[1] - o[1]) * (points[i][0] - o[0]) <= 1e-15:
                    out.pop()
                else:
                    break
            out.append(i)
        return out

    lower = chain(order)
    upper = chain(order[::-1])
    return np.array(lower[:-1] + upper[:-1], dtype=int)


def _min_norm_point(P: np.ndarray, gap_tol: float, max_iter: int) -> tuple[np.ndarray, float]:
    """Wolfe's algorithm: the minimum-norm point of conv(rows of P).

    Returns (w, gap) where gap = ||w||^2 - min_i <w, P_i> is the Frank-Wolfe
    optimality gap; ||w - w*||^2 <= gap at return.
    """
    norms2 = np.einsum("ij,ij->i", P, P)
    idx = [int(np.argmin(norms2))]
    lam = np.array([1.0])
    w = P[idx[0]].copy()
    gap = float("inf")
    for _ in range(max_iter):
        dots = P @ w
        j = int(np.argmin(dots))
        gap = float(w @ w - dots[j])
        if gap <= gap_tol or j in idx:
            return w, gap
        idx.append(j)
        lam = np.append(lam, 0.0)
        for _minor in range(2 * P.shape[0] + 8):
            Q = P[idx]
            k = len(idx)
            # affine min-norm over the corral: w = q0 + D^T t with rows of D
            # the offsets from q0; plain least squares is backward stable
            # where the bordered Gram system is not
            if k == 1:
                mu = np.array([1.0])
            else:
                D = Q[1:] - Q[0]
                t = np.linalg.lstsq(D.T, -Q[0], rcond=None)[0]
                mu = np.concatenate([[1.0 - t.sum()], t])
            if np.all(mu > 1e-13):
                lam = mu
                w = Q.T @ mu
                break
            diff = lam - mu
            with np.errstate(divide="ignore", invalid="ignore"):
                steps = np.where(diff > 1e-16, lam / diff, np.inf)
            theta = min(1.0, float(np.min(steps)))
            lam = (1.0 - theta) * lam + theta * mu
            lam[lam < 1e-13] = 0.0
            keep = lam > 0
            if not keep.any():
                keep[int(np.argmin(np.einsum("ij,ij->i", Q, Q)))] = True
                lam[keep] = 1.0
            idx = [idx[i] for i in range(k) if keep[i]]
            lam = lam[keep] / lam[keep].sum()
            w = P[idx].T @ lam
    return w, gap


def _project_segment_many(X: np.ndarray, a: np.ndarray, b: np.ndarray) -> np.ndarray:
    e = b - a
    denom = float(e @ e)
    if denom == 0.0:
        return np.broadcast_to(a, X.shape).copy()
    t = np.clip((X - a) @ e / denom, 0.0, 1.0)
    return a + t[:, None] * e


@dataclass(frozen=True, eq=False)
class VPolytope(ConvexSet):
    """Convex hull of finitely many vertices (deduplicated at construction)."""

    vertices: np.ndarray  # (m, d)

    def __init__(self, vertices):
        V = np.asarray(vertices, dtype=float)
        if V.ndim != 2 or V.shape[0] == 0:
            raise ValueError("vertices must be a nonempty (m, d) array")
        if not np.all(np.isfinite(V)):
            raise ValueError("vertices have non-finite entries")
        V = _dedup_rows(V)
        object.__setattr__(self, "vertices", _frozen(V))
        object.__setattr__(self, "dim", V.shape[1])
        hull = None
        if V.shape[1] == 2 and V.shape[0] >= 3:
            hull_idx = _hull_2d(V)
            if len(hull_idx) >= 3:
                hull = _frozen(V[hull_idx])
        object.__setattr__(self, "_hull2d", hull)
        # facet form A x <= b for full-dimensional 3-d hulls: an exact inside
        # test that short-circuits the iterative projection
        facets = None
        if V.shape[1] == 3 and V.shape[0] >= 4:
            try:
                from scipy.spatial import ConvexHull, QhullError

                hull3 = ConvexHull(V)
                facets = (
                    _frozen(hull3.equations[:, :-1]),
                    _frozen(-hull3.equations[:, -1]),
                )
            except (QhullError, ValueError):
                facets = None
        object.__setattr__(self, "_facets", facets)

    def _default_tol(self) -> float:
        return DEFAULT_ITERATIVE_TOL

    @property
    def n_vertices(self) -> int:
        return self.vertices.shape[0]

    def _inside_facets(self, x: np.ndarray) -> bool:
        A, b = self._facets
        return bool(np.all(A @ x <= b + 1e-12))

    def _project(self, x, tol):
        V = self.vertices
        if V.shape[0] == 1:
            return np.array(V[0])
        if V.shape[0] == 2:
            return _project_segment_many(x[None, :], V[0], V[1])[0]
        if self._hull2d is not None:
            return self._project_polygon(x[None, :])[0]
        if self._facets is not None and self._inside_facets(x):
            return np.array(x)
        P = V - x
        scale = max(1.0, float(np.max(np.einsum("ij,ij->i", P, P))))
        gap_tol = max(0.5 * tol * tol, 4e-15 * scale)
        w, gap = _min_norm_point(P, gap_tol, max_iter=16 * V.shape[0] + 64)
        if gap > max(gap_tol, 1e-9 * scale):
            raise ProjectionNonConvergenceError(
                f"polytope projection gap {gap:.3e} above certificate threshold"
            )
        return x + w

    def _project_polygon(self, X: np.ndarray) -> np.ndarray:
        H = self._hull2d
        nxt = np.roll(H, -1, axis=0)
        edges = nxt - H
        # CCW hull: inside iff every cross product is nonnegative.
        cross = (
            edges[None, :, 0] * (X[:, None, 1] - H[None, :, 1])
            - edges[None, :, 1] * (X[:, None, 0] - H[None, :, 0])
        )
        inside = np.all(cross >= -1e-12, axis=1)
        out = np.array(X)
        if not inside.all():
            Xo = X[~inside]
            best = np.full(Xo.shape[0], np.inf)
            best_pts = np.zeros_like(Xo)
            for a, b in zip(H, nxt):
                cand = _project_segment_many(Xo, a, b)
                d = np.einsum("ij,ij->i", Xo - cand, Xo - cand)
                upd = d < best
                best[upd] = d[upd]
                best_pts[upd] = cand[upd]
            out[~inside] = best_pts
        return out

    def _project_many(self, X, tol):
        V = self.vertices
        if V.shape[0] == 1:
            return np.broadcast_to(V[0], X.shape).copy()
        if V.shape[0] == 2:
            return _project_segment_many(X, V[0], V[1])
        if self._hull2d is not None:
            return self._project_polygon(X)
        return np.array([self._project(x, tol) for x in X])

    @property
    def is_bounded(self) -> bool:
        return True

    def support_value(self, u):
        d = as_point(u, self.dim)
        return float(np.max(self.vertices @ d))

    def support_point(self, u):
        d = as_point(u, self.dim)
        return np.array(self.vertices[int(np.argmax(self.vertices @ d))])

    def anchor(self):
        return self.vertices.mean(axis=0)


@dataclass(frozen=True, eq=False)
class HPolyhedron(ConvexSet):
    """Intersection of finitely many halfspaces <n_i, x> >= c_i.

    Construction solves a Chebyshev-style LP for a witness point; it fails
    with InfeasibleSetError if the system is infeasible.  Projection runs
    Hildreth's dual coordinate ascent with a primal-dual gap certificate
    (a strictly feasible witness permits feasibility restoration by blending).
    """

    halfspaces: tuple[Halfspace, ...]

    def __init__(self, halfspaces: Sequence[Halfspace]):
        hs = tuple(halfspaces)
        if not hs:
            raise ValueError("need at least one halfspace")
        dim = hs[0].dim
        for h in hs:
            if not isinstance(h, Halfspace):
                raise TypeError("HPolyhedron takes Halfspace constraints")
            if h.dim != dim:
                raise DimensionMismatchError("halfspace dimensions disagree")
        object.__setattr__(self, "halfspaces", hs)
        object.__setattr__(self, "dim", dim)
        A = np.array([h.normal for h in hs])
        b = np.array([h.offset for h in hs])
        object.__setattr__(self, "_A", _frozen(A))
        object.__setattr__(self, "_b", _frozen(b))
        witness, slater = self._find_witness(A, b)
        object.__setattr__(self, "_witness", _frozen(witness))
        object.__setattr__(self, "_slater", float(slater))

    @staticmethod
    def _find_witness(A: np.ndarray, b: np.ndarray) -> tuple[np.ndarray, float]:
        m, d = A.shape
        # max t  s.t.  A x - t >= b, t <= 1  (Chebyshev margin, capped)
        c = np.zeros(d + 1)
        c[-1] = -1.0
        A_ub = np.hstack([-A, np.ones((m, 1))])
        b_ub = -b
        bounds = [(None, None)] * d + [(None, 1.0)]
        res = linprog(c, A_ub=A_ub, b_ub=b_ub, bounds=bounds, method="highs")
        if not res.success or res.x is None:
            raise InfeasibleSetError("no witness point found for the halfspace system")
        x, t = res.x[:-1], res.x[-1]
        if t < -1e-9:
            raise InfeasibleSetError("halfspace system is infeasible")
        return x, max(0.0, float(t))

    def _default_tol(self) -> float:
        return DEFAULT_ITERATIVE_TOL

    def _project(self, x, tol):
        A, b = self._A, self._b
        m = A.shape[0]
        viol0 = float(np.max(b - A @ x))
        if viol0 <= 0.0:
            return np.array(x)
        lam = np.zeros(m)
        z = np.array(x)
        cap = max(5000, 400 * m)
        scale = 1.0 + float(np.linalg.norm(x))
        for _sweep in range(cap):
            delta = 0.0
            for i in range(m):
                r = b[i] - float(A[i] @ z)
                new_lam = lam[i] + r
                if new_lam < 0.0:
                    new_lam = 0.0
                change = new_lam - lam[i]
                if change != 0.0:
                    z = z + change * A[i]
                    lam[i] = new_lam
                    if abs(change) > delta:
                        delta = abs(change)
            if delta > 0.1 * tol:
                continue
            viol = float(np.max(b - A @ z))
            cand = z
            if viol > 0.0 and self._slater > 1e-12:
                t = viol / (viol + self._slater)
                cand = (1.0 - t) * z + t * self._witness
                viol = float(np.max(b - A @ cand))
            if viol <= max(1e-15, 1e-12 * scale):
                primal = 0.5 * float((cand - x) @ (cand - x))
                dual = -0.5 * float((z - x) @ (z - x)) + float(lam @ (b - A @ x))
                err2 = 2.0 * max(0.0, primal - dual)
                # the gap computation cancels O(primal)-sized terms, so it
                # bottoms out near machine epsilon times those magnitudes
                floor = 8e-15 * (1.0 + abs(primal) + abs(dual))
                if err2 <= max(tol * tol, floor):
                    return cand
            if delta <= 8e-16 * scale:
                # dual ascent is absorbing sub-ulp residuals; converged
                return cand
        raise ProjectionNonConvergenceError("Hildreth projection did not converge")

    def contains(self, x, tol: float = 0.0) -> bool:
        p = as_point(x, self.dim)
        return bool(np.all(self._A @ p - self._b >= -tol - DEFAULT_CLOSED_FORM_TOL))

    def support_value(self, u):
        d = as_point(u, self.dim)
        res = linprog(
            -d,
            A_ub=-self._A,
            b_ub=-self._b,
            bounds=[(None, None)] * self.dim,
            method="highs",
        )
        if res.status == 3:
            raise UnboundedSetError("polyhedron is unbounded in this direction")
        if not res.success:
            raise ProjectionNonConvergenceError(f"support LP failed: {res.message}")
        return float(-res.fun)

    def support_point(self, u):
        d = as_point(u, self.dim)
        res = linprog(
            -d,
            A_ub=-self._A,
            b_ub=-self._b,
            bounds=[(None, None)] * self.dim,
            method="highs",
        )
        if res.status == 3:
            raise UnboundedSetError("polyhedron is unbounded in this direction")
        if not res.success:
            raise ProjectionNonConvergenceError(f"support LP failed: {res.message}")
        return np.array(res.x)

    def anchor(self):
        return np.array(self._witness)


@dataclass(frozen=True, eq=False)
class Wedge(ConvexSet):
    """conv(line U ray): a closed half of a 2-d affine plane embedded in R^d.

    The chart is spanned by e1 (the line direction) and e2 (the unit in-plane
    normal pointing toward the ray); the set is {p0 + u e1 + v e2 : v >= 0}.
    Projection is the plane projection followed by clamping v at zero.
    """

    origin: np.ndarray
    e1: np.ndarray
    e2: np.ndarray

    def __init__(self, origin, e1, e2):
        p0 = as_point(origin)
        a = _unit(as_point(e1, p0.shape[0]), "line direction")
        b = as_point(e2, p0.shape[0])
        b = b - (b @ a) * a
        b = _unit(b, "ray direction (must be independent of the line)")
        object.__setattr__(self, "origin", _frozen(p0))
        object.__setattr__(self, "e1", _frozen(a))
        object.__setattr__(self, "e2", _frozen(b))
        object.__setattr__(self, "dim", p0.shape[0])

    @classmethod
    def from_points(cls, common, line_point, ray_point) -> "Wedge":
        """Wedge through the full line (common, line_point) and the ray from
        common through ray_point."""
        p0 = as_point(common)
        lp = as_point(line_point, p0.shape[0])
        rp = as_point(ray_point, p0.shape[0])
        return cls(p0, lp - p0, rp - p0)

    def chart_coords(self, x) -> tuple[float, float]:
        r = as_point(x, self.dim) - self.origin
        return float(r @ self.e1), float(r @ self.e2)

    def from_chart(self, u: float, v: float) -> np.ndarray:
        return self.origin + u * self.e1 + v * self.e2

    def _project(self, x, tol):
        r = x - self.origin
        u = float(r @ self.e1)
        v = float(r @ self.e2)
        return self.origin + u * self.e1 + max(v, 0.0) * self.e2

    def _project_many(self, X, tol):
        R = X - self.origin
        u = R @ self.e1
        v = np.maximum(R @ self.e2, 0.0)
        return self.origin + u[:, None] * self.e1 + v[:, None] * self.e2

    def support_value(self, u):
        d = as_point(u, self.dim)
        scale = max(1.0, float(np.linalg.norm(d)))
        c1 = float(d @ self.e1)
        c2 = float(d @ self.e2)
        if abs(c1) > _DIRECTION_TOL * scale or c2 > _DIRECTION_TOL * scale:
            raise UnboundedSetError("wedge is unbounded in this direction")
        return float(d @ self.origin)

    def support_point(self, u):
        self.support_value(u)
        return np.array(self.origin)

    def anchor(self):
        return np.array(self.origin)


@dataclass(frozen=True, eq=False)
class Translate(ConvexSet):
    """inner + shift, with projections conjugated through the shift."""

    inner: ConvexSet
    shift: np.ndarray

    def __init__(self, inner: ConvexSet, shift):
        t = as_point(shift, inner.dim)
        if isinstance(inner, Translate):
            t = t + inner.shift
            inner = inner.inner
        object.__setattr__(self, "inner", inner)
        object.__setattr__(self, "shift", _frozen(t))
        object.__setattr__(self, "dim", inner.dim)

    def _default_tol(self) -> float:
        return self.inner._default_tol()

    def _project(self, x, tol):
        return self.inner._project(x - self.shift, tol) + self.shift

    def _project_many(self, X, tol):
        return self.inner._project_many(X - self.shift, tol) + self.shift

    def contains(self, x, tol: float = 0.0) -> bool:
        return self.inner.contains(as_point(x, self.dim) - self.shift, tol)

    @property
    def is_bounded(self) -> bool:
        return self.inner.is_bounded

    def support_value(self, u):
        d = as_point(u, self.dim)
        return self.inner.support_value(d) + float(d @ self.shift)

    def support_point(self, u):
        return self.inner.support_point(u) + self.shift

    def anchor(self):
        return self.inner.anchor() + self.shift


def base_variant(S: ConvexSet) -> ConvexSet:
    """Strip Translate wrappers."""
    return S.inner if isinstance(S, Translate) else S


def effective_vertices(S: ConvexSet) -> np.ndarray | None:
    """Vertex array of S if it is (a translate of) a V-polytope, else None."""
    if isinstance(S, VPolytope):
        return np.array(S.vertices)
    if isinstance(S, Translate) and isinstance(S.inner, VPolytope):
        return S.inner.vertices + S.shift
    return None


def box(lo, hi) -> VPolytope:
    """Axis-aligned box as a V-polytope (dimensions 1-3)."""
    lo = as_point(lo)
    hi = as_point(hi, lo.shape[0])
    if np.any(hi < lo):
        raise ValueError("box needs lo <= hi")
    d = lo.shape[0]
    if d > 3:
        raise ValueError("box() enumerates vertices; use HPolyhedron beyond d=3")
    corners = np.array(np.meshgrid(*[[lo[i], hi[i]] for i in range(d)], indexing="ij"))
    return VPolytope(corners.reshape(d, -1).T)
