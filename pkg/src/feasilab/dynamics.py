"""Alternating projections and perturbed alternating projections engines with
per-iteration diagnostics and stability verdicts.

Distances in a trace are always measured against the limit couple's nearest
sets E and F: that is the quantity the stability notions are defined by, even
while the iteration projects onto perturbed sets.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .metrics import Couple
from .sets import as_point

STATUS_CONVERGED = "Converged"
STATUS_CAP = "CapReached"
STATUS_DIVERGED = "DivergedDiagnostic"


class ZeroVectorError(ValueError):
    """cosine() requires nonzero vectors."""


def cosine(u, w) -> float:
    """cos(u, w) = <u, w> / (||u|| ||w||), clamped to [-1, 1]."""
    a = np.asarray(u, dtype=float)
    b = np.asarray(w, dtype=float)
    na = float(np.linalg.norm(a))
    nb = float(np.linalg.norm(b))
    if na == 0.0 or nb == 0.0:
        raise ZeroVectorError("cosine of a zero vector")
    return float(np.clip((a @ b) / (na * nb), -1.0, 1.0))


@dataclass
class TraceRecord:
    n: int
    a: np.ndarray
    b: np.ndarray
    dist_a_E: float
    dist_b_F: float
    dist_a_A: float
    dist_b_B: float
    cos_diag: float | None = None
    aw_cert: dict[int, float] | None = None


@dataclass
class Trace:
    records: list[TraceRecord]
    terminal_status: str
    dim: int

    def __len__(self) -> int:
        return len(self.records)

    def tail(self, window: int) -> list[TraceRecord]:
        return self.records[-window:]

    def column(self, name: str) -> np.ndarray:
        return np.array([getattr(r, name) for r in self.records])


def _finite(*vecs) -> bool:
    return all(np.all(np.isfinite(v)) for v in vecs)


def run_ap(couple: Couple, c0, *, cap: int = 10_000, tol: float = 1e-10) -> Trace:
    """Unperturbed alternating projections d_n = P_B(c_{n-1}), c_n = P_A(d_n).

    Stops when successive c-iterates move by at most tol (tol=0 keeps
    iterating to the cap, matching the cap-only perturbed runs).  Each record
    carries the contraction diagnostic dist(c_n, E)/dist(d_n, F) whenever the
    denominator exceeds tol.
    """
    if cap < 1:
        raise ValueError("cap must be >= 1")
    c = as_point(c0, couple.dim)
    A, B = couple.A, couple.B
    records: list[TraceRecord] = []
    status = STATUS_CAP
    for n in range(1, cap + 1):
        d = B.project(c)
        c_next = A.project(d)
        if not _finite(d, c_next):
            status = STATUS_DIVERGED
            break
        dist_a_E = couple.dist_E(c_next)
        dist_b_F = couple.dist_F(d)
        ratio = dist_a_E / dist_b_F if dist_b_F > max(tol, 1e-300) else None
        records.append(
            TraceRecord(
                n=n,
                a=c_next,
                b=d,
                dist_a_E=dist_a_E,
                dist_b_F=dist_b_F,
                dist_a_A=A.dist(c_next),
                dist_b_B=B.dist(d),
                cos_diag=ratio,
            )
        )
        moved = float(np.linalg.norm(c_next - c))
        c = c_next
        if moved <= tol:
            status = STATUS_CONVERGED
            break
    return Trace(records=records, terminal_status=status, dim=couple.dim)


def run_perturbed_ap(
    couple: Couple,
    schedule,
    a0,
    *,
    cap: int = 10_000,
    cert_levels: tuple[int, ...] = (10,),
) -> Trace:
    """Perturbed alternating projections b_n = P_{B_n}(a_{n-1}), a_n = P_{A_n}(b_n).

    The schedule is pulled with the running iterate (adaptive schedules choose
    their sets from it), runs are cap-only, and every record stores the
    schedule's per-step convergence certificate at the requested levels.
    """
    if cap < 1:
        raise ValueError("cap must be >= 1")
    a = as_point(a0, couple.dim)
    records: list[TraceRecord] = []
    status = STATUS_CAP
    for n in range(1, cap + 1):
        pair = schedule.step(n, a)
        if pair is None:
            break
        A_n, B_n = pair
        b = B_n.project(a)
        a = A_n.project(b)
        if not _finite(a, b):
            status = STATUS_DIVERGED
            break
        cert = {N: schedule.cert(n, N) for N in cert_levels}
        records.append(
            TraceRecord(
                n=n,
                a=a,
                b=b,
                dist_a_E=couple.dist_E(a),
                dist_b_F=couple.dist_F(b),
                dist_a_A=couple.A.dist(a),
                dist_b_B=couple.B.dist(b),
                cos_diag=None,
                aw_cert=cert,
            )
        )
    return Trace(records=records, terminal_status=status, dim=couple.dim)


@dataclass
class Verdict:
    d_stable_observed: bool
    stable_observed: bool
    limit_point: np.ndarray | None
    tail_sup_dist: float

    def to_dict(self) -> dict:
        return {
            "d_stable_observed": self.d_stable_observed,
            "stable_observed": self.stable_observed,
            "limit_point": None if self.limit_point is None else list(self.limit_point),
            "tail_sup_dist": self.tail_sup_dist,
        }


def default_tail_window(length: int, frac: float = 0.1, minimum: int = 50) -> int:
    """Last 10% of the run, at least 50 records (clamped to the length)."""
    return max(1, min(length, max(minimum, int(frac * length))))


def stability_verdict(
    trace: Trace,
    couple: Couple,
    *,
    tol: float = 1e-6,
    tail_window: int | None = None,
) -> Verdict:
    """Observed d-stability/stability over the trace's tail window.

    d-stable: the tail's distances to E and F stay within tol.  Stable
    additionally requires the tail a-iterates to be Cauchy within tol and the
    terminal b to sit at (lim a) + v.
    """
    if not trace.records:
        raise ValueError("empty trace")
    window = default_tail_window(len(trace)) if tail_window is None else tail_window
    if window > len(trace):
        raise ValueError("tail_window exceeds trace length")
    tail = trace.tail(window)
    tail_sup = max(max(r.dist_a_E, r.dist_b_F) for r in tail)
    d_stable = tail_sup <= tol
    a_last = tail[-1].a
    cauchy = max(float(np.linalg.norm(r.a - a_last)) for r in tail) <= tol
    b_check = float(np.linalg.norm(tail[-1].b - (a_last + couple.v))) <= tol
    stable = bool(d_stable and cauchy and b_check)
    return Verdict(
        d_stable_observed=bool(d_stable),
        stable_observed=stable,
        limit_point=np.array(a_last) if stable else None,
        tail_sup_dist=float(tail_sup),
    )
