"""Independent oracles used by the tests: coordinate-clamp projections for
boxes, exhaustive-facet search for small polytopes, and a cvxpy-backed QP
solver for intersection projections.  These deliberately share no code with
the package's projection paths."""

from itertools import combinations

import numpy as np


def clamp_box(lo, hi, x):
    """Projection onto an axis-aligned box by coordinate clamping."""
    return np.minimum(np.maximum(np.asarray(x, dtype=float), lo), hi)


def dist_box(lo, hi, x):
    return float(np.linalg.norm(np.asarray(x, dtype=float) - clamp_box(lo, hi, x)))


def segment_dist(a, b, x):
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    x = np.asarray(x, dtype=float)
    e = b - a
    t = np.clip((x - a) @ e / (e @ e), 0.0, 1.0)
    return float(np.linalg.norm(x - (a + t * e)))


def exhaustive_polytope_project(vertices, x):
    """Projection onto conv(vertices) by searching every vertex subset: the
    nearest affine-hull projection with nonnegative barycentric weights."""
    V = np.asarray(vertices, dtype=float)
    x = np.asarray(x, dtype=float)
    best, best_d = None, np.inf
    for k in range(1, V.shape[0] + 1):
        for idx in combinations(range(V.shape[0]), k):
            Q = V[list(idx)]
            if k == 1:
                cand = Q[0]
            else:
                kkt = np.zeros((k + 1, k + 1))
                kkt[:k, :k] = Q @ Q.T
                kkt[:k, k] = 1.0
                kkt[k, :k] = 1.0
                rhs = np.concatenate([Q @ x, [1.0]])
                w = np.linalg.lstsq(kkt, rhs, rcond=None)[0][:k]
                if np.any(w < -1e-9):
                    continue
                w = np.clip(w, 0.0, None)
                s = w.sum()
                if s <= 0:
                    continue
                cand = (w / s) @ Q
            d = float(np.linalg.norm(cand - x))
            if d < best_d:
                best_d, best = d, cand
    return best


def cvxpy_intersection_project(constraints_spec, x):
    """Projection of x onto an intersection described by tagged records:
    ("ball", center, radius), ("halfspace", normal, offset)  [<n,y> >= c],
    ("vpolytope", vertices).  Solved as a conic QP by cvxpy."""
    import cvxpy as cp

    x = np.asarray(x, dtype=float)
    d = x.shape[0]
    y = cp.Variable(d)
    cons = []
    for spec in constraints_spec:
        kind = spec[0]
        if kind == "ball":
            center, radius = np.asarray(spec[1], dtype=float), float(spec[2])
            cons.append(cp.norm(y - center, 2) <= radius)
        elif kind == "halfspace":
            normal, offset = np.asarray(spec[1], dtype=float), float(spec[2])
            cons.append(normal @ y >= offset)
        elif kind == "vpolytope":
            V = np.asarray(spec[1], dtype=float)
            lam = cp.Variable(V.shape[0], nonneg=True)
            cons.append(cp.sum(lam) == 1)
            cons.append(V.T @ lam == y)
        else:
            raise ValueError(f"unknown constraint kind {kind}")
    prob = cp.Problem(cp.Minimize(cp.sum_squares(y - x)), cons)
    try:
        prob.solve(
            solver=cp.CLARABEL, tol_gap_abs=1e-12, tol_gap_rel=1e-12, tol_feas=1e-12
        )
    except cp.SolverError:
        prob.solve(solver=cp.SCS, eps=1e-10, max_iters=200_000)
    if y.value is None:
        raise RuntimeError("cvxpy oracle failed to solve")
    return np.asarray(y.value, dtype=float)
