"""Command-line entry point.

Subcommands:
  list                     registered scenarios
  run --scenario NAME      run one scenario (trace/verdict/regularity files)
  verify [--filter NAME]   run the invariant suites
  gap --setA F1 --setB F2 --N K   ad-hoc localized gap query

Exit codes: 0 ok, 1 verification failure, 2 config error, 3 numeric
non-convergence.  FEASILAB_SEED overrides the default seeds.
"""

from __future__ import annotations

import argparse
import json
import sys

from .metrics import GapSampler, NonConvergentError, aw_gap
from .scenarios import default_seed, list_scenarios, run_scenario
from .serialize import ConfigError, read_json, set_from_dict
from .sets import ProjectionNonConvergenceError

EXIT_OK = 0
EXIT_VERIFY_FAIL = 1
EXIT_CONFIG = 2
EXIT_NONCONVERGENT = 3


def _parse_start(text: str) -> tuple[float, ...]:
    try:
        return tuple(float(t) for t in text.split(","))
    except ValueError:
        raise ConfigError(f"cannot parse start point {text!r}") from None


def _parse_schedule(text: str) -> dict:
    text = text.strip()
    if text.startswith("{"):
        try:
            return json.loads(text)
        except json.JSONDecodeError as exc:
            raise ConfigError(f"bad schedule JSON: {exc}") from None
    if text in ("constant", "adversarial"):
        return {"kind": text}
    if ":" in text:
        kind, _, rule = text.partition(":")
        if kind == "translation":
            return {"kind": "translation", "rule": rule}
        if kind == "jitter":
            return {"kind": "jitter", "rate": rule, "seed": default_seed()}
    raise ConfigError(f"cannot parse schedule spec {text!r}")


def cmd_list(_args) -> int:
    for spec in list_scenarios():
        flags = " ".join(f"[{k}]" for k, v in spec.flags.items() if v)
        extra = f" {flags}" if flags else ""
        print(
            f"{spec.name:28s} dim={spec.dim} iters={spec.iterations} "
            f"schedule={spec.schedule['kind']}{extra}"
        )
    return EXIT_OK


def cmd_run(args) -> int:
    overrides: dict = {}
    if args.schedule:
        overrides["schedule"] = _parse_schedule(args.schedule)
    if args.iters is not None:
        overrides["iterations"] = args.iters
    if args.start:
        overrides["start_points"] = [_parse_start(args.start)]
    report = run_scenario(
        args.scenario,
        overrides=overrides or None,
        out_root=args.out,
        seed=default_seed(),
    )
    print(json.dumps(report.to_dict(), indent=2))
    if report.expected_pass is False:
        return EXIT_VERIFY_FAIL
    return EXIT_OK


def cmd_verify(args) -> int:
    from .verification import verify_suite

    code, summary = verify_suite(args.filter)
    print(json.dumps(summary))
    return code


def cmd_gap(args) -> int:
    A = set_from_dict(read_json(args.setA))
    B = set_from_dict(read_json(args.setB))
    if args.sampler:
        try:
            sampler = GapSampler.from_dict(json.loads(args.sampler))
        except (json.JSONDecodeError, TypeError, ValueError) as exc:
            raise ConfigError(f"bad sampler spec: {exc}") from None
    else:
        sampler = GapSampler(seed=default_seed())
    est = aw_gap(A, B, args.N, sampler)
    print(json.dumps(est.to_dict()))
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="feasilab", description=__doc__)
    sub = p.add_subparsers(dest="command", required=True)

    sub.add_parser("list", help="list registered scenarios").set_defaults(fn=cmd_list)

    run_p = sub.add_parser("run", help="run one scenario")
    run_p.add_argument("--scenario", required=True)
    run_p.add_argument("--schedule", help='e.g. translation:1/n or {"kind":"jitter",...}')
    run_p.add_argument("--iters", type=int)
    run_p.add_argument("--start", help='comma-separated coordinates, e.g. "2,2"')
    run_p.add_argument("--out", default="runs")
    run_p.set_defaults(fn=cmd_run)

    ver_p = sub.add_parser("verify", help="run the invariant suites")
    ver_p.add_argument("--filter", default=None)
    ver_p.set_defaults(fn=cmd_verify)

    gap_p = sub.add_parser("gap", help="localized gap between two set files")
    gap_p.add_argument("--setA", required=True)
    gap_p.add_argument("--setB", required=True)
    gap_p.add_argument("--N", type=int, required=True)
    gap_p.add_argument("--sampler", help='e.g. {"boundary_samples":512,"seed":1}')
    gap_p.set_defaults(fn=cmd_gap)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.fn(args)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except FileNotFoundError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except (NonConvergentError, ProjectionNonConvergenceError) as exc:
        print(f"numeric non-convergence: {exc}", file=sys.stderr)
        return EXIT_NONCONVERGENT


if __name__ == "__main__":
    sys.exit(main())
