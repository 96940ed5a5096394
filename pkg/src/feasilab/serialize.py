"""Tagged JSON schema for set descriptions, trace CSV persistence, and the
JSON sidecars for verdicts and reports.

Floats in trace CSVs are rendered with 17 significant digits so a re-parse
reproduces the in-memory trace bit for bit.
"""

from __future__ import annotations

import csv
import json
from pathlib import Path

import numpy as np

from .dynamics import Trace, TraceRecord
from .sets import (
    AffineSubspace,
    Ball,
    ConvexSet,
    HPolyhedron,
    Halfspace,
    Hyperplane,
    Translate,
    VPolytope,
    Wedge,
)


class ConfigError(ValueError):
    """Malformed configuration input."""


def set_to_dict(S: ConvexSet) -> dict:
    """Tagged description of a set, inverse of set_from_dict."""
    if isinstance(S, Halfspace):
        return {"type": "halfspace", "normal": list(S.normal), "offset": S.offset}
    if isinstance(S, Hyperplane):
        return {"type": "hyperplane", "normal": list(S.normal), "offset": S.offset}
    if isinstance(S, AffineSubspace):
        return {
            "type": "affine",
            "base": list(S.base),
            "basis": [list(b) for b in S.basis],
        }
    if isinstance(S, Ball):
        return {"type": "ball", "center": list(S.center), "radius": S.radius}
    if isinstance(S, VPolytope):
        return {"type": "vpolytope", "vertices": [list(v) for v in S.vertices]}
    if isinstance(S, HPolyhedron):
        return {
            "type": "hpolyhedron",
            "halfspaces": [
                {"normal": list(h.normal), "offset": h.offset} for h in S.halfspaces
            ],
        }
    if isinstance(S, Wedge):
        return {
            "type": "wedge",
            "origin": list(S.origin),
            "e1": list(S.e1),
            "e2": list(S.e2),
        }
    if isinstance(S, Translate):
        return {"type": "translate", "inner": set_to_dict(S.inner), "shift": list(S.shift)}
    raise ConfigError(f"cannot serialize set of type {type(S).__name__}")


def set_from_dict(d: dict) -> ConvexSet:
    """Build a set from its tagged description.

    halfspace: {normal, offset} meaning <normal, x> >= offset.
    wedge accepts either the chart form {origin, e1, e2} or the three-point
    form {common, line_point, ray_point}.
    """
    if not isinstance(d, dict) or "type" not in d:
        raise ConfigError("set description must be a dict with a 'type' tag")
    t = d["type"]
    try:
        if t == "halfspace":
            return Halfspace(d["normal"], d["offset"])
        if t == "hyperplane":
            return Hyperplane(d["normal"], d["offset"])
        if t == "affine":
            return AffineSubspace(d["base"], d.get("basis", []))
        if t == "ball":
            return Ball(d["center"], d["radius"])
        if t == "vpolytope":
            return VPolytope(d["vertices"])
        if t == "hpolyhedron":
            return HPolyhedron(
                [Halfspace(h["normal"], h["offset"]) for h in d["halfspaces"]]
            )
        if t == "wedge":
            if "origin" in d:
                return Wedge(d["origin"], d["e1"], d["e2"])
            return Wedge.from_points(d["common"], d["line_point"], d["ray_point"])
        if t == "translate":
            return Translate(set_from_dict(d["inner"]), d["shift"])
    except KeyError as exc:
        raise ConfigError(f"set description of type {t!r} is missing {exc}") from None
    raise ConfigError(f"unknown set type {t!r}")


def _fmt(x: float) -> str:
    return format(float(x), ".17g")


def trace_columns(dim: int, cert_levels: tuple[int, ...] = ()) -> list[str]:
    cols = ["n"]
    cols += [f"a{i}" for i in range(dim)]
    cols += [f"b{i}" for i in range(dim)]
    cols += ["dist_a_E", "dist_b_F", "dist_a_A", "dist_b_B", "cos_diag"]
    for j, N in enumerate(cert_levels):
        cols.append("aw_cert" if j == 0 else f"aw_cert_{N}")
    if not cert_levels:
        cols.append("aw_cert")
    return cols


def write_trace_csv(trace: Trace, path) -> None:
    """Write the trace as CSV plus a JSON sidecar (<path>.meta.json) carrying
    the terminal status and the certificate levels."""
    path = Path(path)
    levels: tuple[int, ...] = ()
    for r in trace.records:
        if r.aw_cert:
            levels = tuple(sorted(r.aw_cert.keys()))
            break
    cols = trace_columns(trace.dim, levels)
    with path.open("w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(cols)
        for r in trace.records:
            row = [str(r.n)]
            row += [_fmt(x) for x in r.a]
            row += [_fmt(x) for x in r.b]
            row += [_fmt(r.dist_a_E), _fmt(r.dist_b_F), _fmt(r.dist_a_A), _fmt(r.dist_b_B)]
            row.append("" if r.cos_diag is None else _fmt(r.cos_diag))
            if levels:
                row += [_fmt(r.aw_cert[N]) for N in levels]
            else:
                row.append("")
            writer.writerow(row)
    meta = {
        "terminal_status": trace.terminal_status,
        "dim": trace.dim,
        "cert_levels": list(levels),
    }
    Path(str(path) + ".meta.json").write_text(json.dumps(meta, indent=2))


def read_trace_csv(path) -> Trace:
    path = Path(path)
    meta = json.loads(Path(str(path) + ".meta.json").read_text())
    dim = int(meta["dim"])
    levels = tuple(int(N) for N in meta["cert_levels"])
    records: list[TraceRecord] = []
    with path.open() as fh:
        reader = csv.reader(fh)
        header = next(reader)
        expected = trace_columns(dim, levels)
        if header != expected:
            raise ConfigError(f"trace header {header} does not match {expected}")
        for row in reader:
            i = 0
            n = int(row[i]); i += 1
            a = np.array([float(v) for v in row[i : i + dim]]); i += dim
            b = np.array([float(v) for v in row[i : i + dim]]); i += dim
            dist_a_E = float(row[i]); i += 1
            dist_b_F = float(row[i]); i += 1
            dist_a_A = float(row[i]); i += 1
            dist_b_B = float(row[i]); i += 1
            cos_diag = None if row[i] == "" else float(row[i]); i += 1
            cert = None
            if levels:
                cert = {N: float(row[i + j]) for j, N in enumerate(levels)}
            records.append(
                TraceRecord(
                    n=n, a=a, b=b,
                    dist_a_E=dist_a_E, dist_b_F=dist_b_F,
                    dist_a_A=dist_a_A, dist_b_B=dist_b_B,
                    cos_diag=cos_diag, aw_cert=cert,
                )
            )
    return Trace(records=records, terminal_status=meta["terminal_status"], dim=dim)


def write_json(obj: dict, path) -> None:
    Path(path).write_text(json.dumps(obj, indent=2) + "\n")


def read_json(path) -> dict:
    return json.loads(Path(path).read_text())
