"""Command line interface.

Verbs:

    run SCENARIO        simulate once, verify, write trace/report/CSV/figures
    sweep               batch campaign over random configurations
    verify TRACE        re-run all checks on a stored trace
    render TRACE        draw trajectory and coverage figures from a trace
    check-exhaustive    explore all activation interleavings of a tiny swarm

SCENARIO is a path to a scenario JSON file or the name of a bundled one
(e.g. ``table1_instance1``).  Exit status is nonzero when any verification
check fails; the trace is still written for debugging.
"""

from __future__ import annotations

import argparse
import csv
import dataclasses
import json
import sys
from pathlib import Path

from .engine import LivenessError, Trace
from .errors import ConfigurationError
from .geometry import WorldRect
from .scenario import (
    Scenario,
    bundled_names,
    random_scenario,
    resolve_scenario,
    run_scenario,
)
from .traceio import read_trace, trace_hash, write_trace
from .verify import exhaustive_schedule_check, nominal_paint_time, run_all_checks

SUMMARY_FIELDS = [
    "scenario",
    "seed",
    "n",
    "t1_sim",
    "t2_sim",
    "t2_nominal",
    "path_length",
    "completion",
    "passed",
]


def summary_row(trace: Trace, report: dict) -> dict:
    world = WorldRect(**trace.config["world"])
    v = trace.config["schedule"]["velocity"]
    durations = trace.paint_durations()
    lengths = trace.paint_lengths()
    return {
        "scenario": trace.config["name"],
        "seed": trace.config["schedule"]["seed"],
        "n": trace.n_robots,
        "t1_sim": f"{trace.t1():.6g}",
        "t2_sim": f"{max(durations):.6g}",
        "t2_nominal": f"{nominal_paint_time(world, trace.n_robots, v):.6g}",
        "path_length": f"{max(lengths):.6g}",
        "completion": f"{trace.completion_time:.6g}",
        "passed": report["passed"],
    }


def write_summary(rows: list[dict], path: Path):
    with open(path, "w", newline="") as fh:
        writer = csv.DictWriter(fh, fieldnames=SUMMARY_FIELDS)
        writer.writeheader()
        writer.writerows(rows)


def write_report(report: dict, path: Path):
    path.write_text(json.dumps(report, indent=2, default=_json_default) + "\n")


def _json_default(obj):
    if isinstance(obj, (set, frozenset)):
        return sorted(obj)
    if isinstance(obj, tuple):
        return list(obj)
    if dataclasses.is_dataclass(obj):
        return dataclasses.asdict(obj)
    raise TypeError(f"not JSON serializable: {type(obj)!r}")


def _apply_overrides(sc: Scenario, args) -> Scenario:
    if getattr(args, "eta", None) is not None:
        sc = dataclasses.replace(sc, eta=args.eta, eps=sc.eps if args.eps else args.eta / 4.0)
    if getattr(args, "eps", None) is not None:
        sc = dataclasses.replace(sc, eps=args.eps)
    return sc


def _run_one(sc: Scenario, seed: int | None, out: Path, figures: bool) -> int:
    out.mkdir(parents=True, exist_ok=True)
    try:
        trace = run_scenario(sc, seed=seed)
    except LivenessError as exc:
        if exc.trace is not None:
            write_trace(exc.trace, out / "trace.jsonl")
        print(f"FAIL {sc.name}: {exc}", file=sys.stderr)
        return 1
    report = run_all_checks(trace)
    report["trace_hash"] = trace_hash(trace)
    write_trace(trace, out / "trace.jsonl")
    write_report(report, out / "report.json")
    write_summary([summary_row(trace, report)], out / "summary.csv")
    if figures:
        from .figures import save_coverage_figure, save_trajectory_figure

        save_trajectory_figure(trace, out / "trajectories.svg")
        save_coverage_figure(trace, out / "coverage.svg")
    status = "ok" if report["passed"] else "FAILED CHECKS"
    print(f"{sc.name} seed={trace.config['schedule']['seed']}: {status} "
          f"(completion {trace.completion_time:.6g} s) -> {out}")
    if not report["passed"]:
        for name, chk in report["checks"].items():
            if not chk["passed"]:
                print(f"  failed: {name}", file=sys.stderr)
        return 1
    return 0


def cmd_run(args) -> int:
    sc = _apply_overrides(resolve_scenario(args.scenario), args)
    return _run_one(sc, args.seed, Path(args.out), not args.no_figures)


def _parse_n_range(spec: str) -> list[int]:
    if ".." in spec:
        lo, hi = spec.split("..", 1)
        return list(range(int(lo), int(hi) + 1))
    return [int(spec)]


def cmd_sweep(args) -> int:
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    rows = []
    failures = 0
    for n in _parse_n_range(args.n):
        for trial in range(args.trials):
            seed = args.seed + trial
            sc = random_scenario(n, seed, eta=args.eta, eps=args.eps)
            try:
                trace = run_scenario(sc)
            except LivenessError as exc:
                failures += 1
                if exc.trace is not None:
                    fail_dir = out / "failures"
                    fail_dir.mkdir(exist_ok=True)
                    write_trace(exc.trace, fail_dir / f"{sc.name}.jsonl")
                print(f"FAIL {sc.name}: {exc}", file=sys.stderr)
                continue
            report = run_all_checks(trace)
            rows.append(summary_row(trace, report))
            if not report["passed"]:
                failures += 1
                fail_dir = out / "failures"
                fail_dir.mkdir(exist_ok=True)
                write_trace(trace, fail_dir / f"{sc.name}.jsonl")
                write_report(report, fail_dir / f"{sc.name}.report.json")
                print(f"FAIL {sc.name}: verification checks failed", file=sys.stderr)
    write_summary(rows, out / "summary.csv")
    print(f"sweep: {len(rows)} runs, {failures} failures -> {out / 'summary.csv'}")
    return 1 if failures else 0


def cmd_verify(args) -> int:
    trace = read_trace(args.trace)
    report = run_all_checks(trace)
    report["trace_hash"] = trace_hash(trace)
    out = Path(args.out) if args.out else Path(args.trace).with_name("report.json")
    write_report(report, out)
    print(f"{'ok' if report['passed'] else 'FAILED'}: report -> {out}")
    if not report["passed"]:
        for name, chk in report["checks"].items():
            if not chk["passed"]:
                print(f"  failed: {name}", file=sys.stderr)
    return 0 if report["passed"] else 1


def cmd_render(args) -> int:
    from .figures import save_coverage_figure, save_trajectory_figure

    trace = read_trace(args.trace)
    out = Path(args.out) if args.out else Path(args.trace).parent
    out.mkdir(parents=True, exist_ok=True)
    t = save_trajectory_figure(trace, out / "trajectories.svg")
    c = save_coverage_figure(trace, out / "coverage.svg")
    print(f"rendered {t} and {c}")
    return 0


def cmd_check_exhaustive(args) -> int:
    eta = args.eta or 0.75
    eps = args.eps or eta / 4.0
    if args.scenario:
        sc = resolve_scenario(args.scenario)
        world = sc.world
        robots = [((r.x, r.y), r.orientation, r.scale) for r in sc.robots]
        eta, eps = sc.eta, sc.eps
    else:
        world = WorldRect(-20.0, 20.0, -15.0, 15.0)
        sc = random_scenario(args.n, args.seed, eta=eta, eps=eps, random_scales=False)
        robots = [((r.x, r.y), r.orientation, r.scale) for r in sc.robots]
    report = exhaustive_schedule_check(world, robots, eta=eta, eps=eps, depth=args.depth)
    ok = not report["violations"] and not report["partial"]
    print(
        f"explored {report['explored_states']} states, "
        f"{report['completed_runs']} completed interleavings, "
        f"{len(report['violations'])} violations"
        + (", PARTIAL (depth exhausted)" if report["partial"] else "")
    )
    for v in report["violations"][:10]:
        print(f"  violation: {v}", file=sys.stderr)
    return 0 if ok else 1


def make_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="swarmpaint",
        description=__doc__,
        formatter_class=argparse.RawDescriptionHelpFormatter,
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("run", help="simulate a scenario, verify it, write artifacts")
    p.add_argument("scenario", help=f"scenario file or bundled name ({', '.join(bundled_names())})")
    p.add_argument("--seed", type=int, default=None, help="override the scenario seed")
    p.add_argument("--eta", type=float, default=None, help="override brush half-width")
    p.add_argument("--eps", type=float, default=None, help="override halt distance")
    p.add_argument("--out", default="out", help="output directory")
    p.add_argument("--no-figures", action="store_true", help="skip SVG rendering")
    p.set_defaults(func=cmd_run)

    p = sub.add_parser("sweep", help="random-configuration campaign")
    p.add_argument("--n", default="4..8", help="robot counts, e.g. 6 or 4..8")
    p.add_argument("--trials", type=int, default=100, help="runs per robot count")
    p.add_argument("--seed", type=int, default=0, help="base seed")
    p.add_argument("--eta", type=float, default=None)
    p.add_argument("--eps", type=float, default=None)
    p.add_argument("--out", default="sweep", help="output directory")
    p.set_defaults(func=cmd_sweep)

    p = sub.add_parser("verify", help="re-check a stored trace")
    p.add_argument("trace", help="trace.jsonl file")
    p.add_argument("--out", default=None, help="report path (default: alongside trace)")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("render", help="draw figures from a stored trace")
    p.add_argument("trace", help="trace.jsonl file")
    p.add_argument("--out", default=None, help="output directory (default: alongside trace)")
    p.set_defaults(func=cmd_render)

    p = sub.add_parser("check-exhaustive", help="enumerate all schedules of a tiny swarm")
    p.add_argument("--scenario", default=None, help="scenario file or bundled name")
    p.add_argument("--n", type=int, default=2, help="robot count for a generated micro-scenario")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--depth", type=int, default=12, help="max activations per interleaving")
    p.add_argument("--eta", type=float, default=None)
    p.add_argument("--eps", type=float, default=None)
    p.set_defaults(func=cmd_check_exhaustive)

    return parser


def main(argv: list[str] | None = None) -> int:
    args = make_parser().parse_args(argv)
    try:
        return args.func(args)
    except ConfigurationError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
