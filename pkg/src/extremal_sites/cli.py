"""Command-line interface: ``extremal-sites <command> ...``.

Exit codes: 0 success or all checks passed, 1 a verification check failed,
2 bad usage or invalid input.
"""
from __future__ import annotations

import argparse
import json
import math
import sys
from dataclasses import dataclass, field
from datetime import datetime, timezone
from typing import Dict, List, Optional

from . import constructions as cons
from .errors import GeometryError
from .geometry import PointSet, dump_json, functionals, load_point_set
from .search import (
    SearchConfig,
    conjecture_41_report,
    conjecture_42_report,
    grid_oracle_2_4,
    optimize_omega,
)
from .verify import verify_landscape, verify_lemma, verify_thm33
from ._parallel import resolve_threads

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2


class UsageError(Exception):
    pass


@dataclass
class RunRecord:
    command: str
    args: Dict[str, str]
    started_at: str
    finished_at: str = ""
    outputs: List[str] = field(default_factory=list)
    summary: dict = field(default_factory=dict)
    error: Optional[str] = None

    def to_dict(self) -> dict:
        out = {
            "command": self.command,
            "args": self.args,
            "started_at": self.started_at,
            "finished_at": self.finished_at,
            "outputs": self.outputs,
            "summary": self.summary,
        }
        if self.error is not None:
            out["error"] = self.error
        return out


def _now() -> str:
    return datetime.now(timezone.utc).isoformat()


def _emit(data: dict, path: Optional[str], record: RunRecord) -> None:
    if path:
        dump_json(data, path)
        record.outputs.append(path)
    else:
        print(json.dumps(data, indent=2))


def cmd_eval(args, record: RunRecord) -> int:
    ps = load_point_set(args.input)
    summary = functionals(ps).to_dict()
    _emit(summary, args.output, record)
    record.summary = summary
    return EXIT_OK


def cmd_construct(args, record: RunRecord) -> int:
    if args.kind == "extremal-quad":
        ps, value = cons.extremal_quadrilateral(), cons.SUP_OMEGA_2_4
    else:
        if args.n is None:
            raise UsageError(f"construct {args.kind} requires --n")
        if args.kind == "regular-simplex":
            ps, value = cons.regular_simplex(args.n), float(math.comb(args.n + 1, 2))
        else:
            if args.n < 2:
                raise UsageError("construct thm33 requires --n >= 2")
            ps, value = cons.thm33_configuration(args.n), cons.thm33_bound(args.n)
    if args.output:
        dump_json(ps.to_dict(), args.output)
        record.outputs.append(args.output)
    else:
        print(ps.to_json())
    print(f"omega = {value:.12f}")
    record.summary = {"kind": args.kind, "omega": value}
    return EXIT_OK


def cmd_verify(args, record: RunRecord) -> int:
    if args.target == "lemma":
        result = verify_lemma(args.dim, args.simplices, args.points, args.seed, threads=args.threads)
    elif args.target == "landscape":
        result = verify_landscape(
            args.resolution, args.band, args.fd_points, args.arcs, args.seed, threads=args.threads
        )
    else:
        result = verify_thm33(args.nmax)
    data = result.to_dict()
    if args.csv and args.target == "landscape":
        from .landscape import write_scan_csv

        write_scan_csv(args.csv, args.resolution, args.band)
        record.outputs.append(args.csv)
    _emit(data, args.output, record)
    for c in result.checks:
        status = "PASS" if c.passed else "FAIL"
        print(f"{status} {c.name} = {c.value:.6e} (tolerance {c.tolerance:.1e})", file=sys.stderr)
    record.summary = {"target": args.target, "passed": result.passed}
    return EXIT_OK if result.passed else EXIT_FAIL


def _search_config(args, m: int, n: int, warm: Optional[PointSet] = None) -> SearchConfig:
    return SearchConfig(
        m=m,
        n=n,
        starts=args.starts,
        max_iters=args.iters,
        seed=args.seed,
        step_init=args.step_init,
        step_min=args.step_min,
        warm_start=warm,
        polish=not args.no_polish,
    )


def cmd_optimize(args, record: RunRecord) -> int:
    warm = load_point_set(args.warm_start) if args.warm_start else None
    result = optimize_omega(_search_config(args, args.m, args.n, warm), threads=args.threads)
    data = result.to_dict()
    if args.output:
        dump_json(data, args.output)
        record.outputs.append(args.output)
    print(f"{result.best_omega:.12f}")
    record.summary = {"best_omega": result.best_omega}
    return EXIT_OK


def cmd_oracle(args, record: RunRecord) -> int:
    result = grid_oracle_2_4(args.resolution, threads=args.threads)
    if args.output:
        dump_json(result.to_dict(), args.output)
        record.outputs.append(args.output)
    print(f"{result.best_omega:.12f}")
    record.summary = {"best_omega": result.best_omega}
    return EXIT_OK


def cmd_conjecture(args, record: RunRecord) -> int:
    if args.claim == "g41":
        m, n = args.m, args.n
        report = conjecture_41_report(m, n, _search_config(args, m, n), threads=args.threads)
    else:
        n = args.n if args.n is not None else args.m
        report = conjecture_42_report(n, _search_config(args, n, n + 2), threads=args.threads)
    data = report.to_dict()
    if args.output:
        dump_json(data, args.output)
        record.outputs.append(args.output)
    print(f"{report.claim}: lhs={report.lhs} rhs={report.rhs} gap={report.gap} verdict={report.verdict}")
    if report.verdict == "violated":
        print(f"WARNING: numeric search contradicts '{report.claim}'", file=sys.stderr)
    record.summary = {k: data[k] for k in ("claim", "lhs", "rhs", "gap", "verdict")}
    return EXIT_OK


def _add_search_options(p: argparse.ArgumentParser, starts: int) -> None:
    p.add_argument("--starts", type=int, default=starts)
    p.add_argument("--iters", type=int, default=2000, help="maximum pattern-search sweeps per start")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--step-init", type=float, default=0.1)
    p.add_argument("--step-min", type=float, default=1e-10)
    p.add_argument("--no-polish", action="store_true", help="skip the SLSQP polish of each start")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="extremal-sites", description=__doc__.splitlines()[0])
    parser.add_argument("--threads", type=int, default=None, help="worker threads (results never depend on it)")
    parser.add_argument("--record", help="write a run record JSON to this path")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("eval", help="distance functionals of a point-set JSON file")
    p.add_argument("input")
    p.add_argument("-o", "--output")
    p.set_defaults(func=cmd_eval)

    p = sub.add_parser("construct", help="write an explicit configuration")
    p.add_argument("kind", choices=["regular-simplex", "thm33", "extremal-quad"])
    p.add_argument("--n", type=int)
    p.add_argument("-o", "--output")
    p.set_defaults(func=cmd_construct)

    p = sub.add_parser("verify", help="run a verification suite")
    p.add_argument("target", choices=["lemma", "landscape", "thm33"])
    p.add_argument("--dim", type=int, default=2)
    p.add_argument("--simplices", type=int, default=1000)
    p.add_argument("--points", type=int, default=100)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--resolution", type=float, default=1e-3)
    p.add_argument("--band", type=float, default=1e-3, help="chord exclusion band for grid scans")
    p.add_argument("--fd-points", type=int, default=1000)
    p.add_argument("--arcs", type=int, default=100)
    p.add_argument("--nmax", type=int, default=12)
    p.add_argument("--csv", help="landscape only: dump the grid scan as CSV")
    p.add_argument("-o", "--output")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("optimize", help="maximise omega over n points in E^m")
    p.add_argument("--m", type=int, required=True)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--warm-start", help="point-set JSON used for start 0")
    _add_search_options(p, starts=50)
    p.add_argument("-o", "--output")
    p.set_defaults(func=cmd_optimize)

    p = sub.add_parser("oracle", help="brute-force grid search for four planar points")
    p.add_argument("--resolution", type=float, default=0.02)
    p.add_argument("-o", "--output")
    p.set_defaults(func=cmd_oracle)

    p = sub.add_parser("conjecture", help="numeric evidence for the open conjectures")
    p.add_argument("claim", choices=["g41", "g42"])
    p.add_argument("--m", type=int, default=2)
    p.add_argument("--n", type=int, default=None)
    _add_search_options(p, starts=50)
    p.add_argument("-o", "--output")
    p.set_defaults(func=cmd_conjecture)
    return parser


def main(argv: Optional[List[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code else EXIT_OK
    if args.command == "conjecture" and args.claim == "g41" and args.n is None:
        args.n = args.m + 2
    record = RunRecord(
        command=args.command,
        args={k: str(v) for k, v in vars(args).items() if k != "func"},
        started_at=_now(),
    )
    try:
        args.threads = resolve_threads(args.threads)
        code = args.func(args, record)
    except (GeometryError, UsageError, OSError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        record.error = str(exc)
        code = EXIT_USAGE
    record.finished_at = _now()
    if args.record:
        dump_json(record.to_dict(), args.record)
    return code


if __name__ == "__main__":
    sys.exit(main())
