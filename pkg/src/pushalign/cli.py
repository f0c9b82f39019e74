"""Command-line interface.

Three subcommands:

  run    execute one campaign cell and write a per-trial report CSV
  trace  execute a single trial and write its force trace CSV
  paths  emit waypoints of a named exploration trajectory

Each subcommand also renders a figure next to its CSV (same stem, .png)
unless --no-figures is given.  Exit code 0 means the command completed —
including campaigns that contain failed trials; nonzero is reserved for
configuration and I/O errors.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

from .baselines import TrajectoryKind, generate_trajectory
from .harness import (
    GROUPS,
    METHODS,
    format_summary,
    make_trial_config,
    phase_labels,
    run_campaign,
    run_trial,
    export_trace,
    write_report,
)
from .scenario import ScenarioError, load_scenario


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="pushalign",
        description="Quasi-static pushing-alignment simulator and benchmark harness")
    sub = parser.add_subparsers(dest="command", required=True)

    run_p = sub.add_parser("run", help="run one campaign cell, write a report CSV")
    run_p.add_argument("--scenario", required=True, help="scenario JSON file")
    run_p.add_argument("--method", required=True, choices=METHODS)
    run_p.add_argument("--group", required=True, choices=GROUPS)
    run_p.add_argument("--trials", type=int, default=100)
    run_p.add_argument("--seed", type=int, default=0, help="base seed")
    run_p.add_argument("--out", required=True, help="report CSV path")
    run_p.add_argument("--traces", metavar="DIR", default=None,
                       help="also write one trace CSV per trial into DIR")
    run_p.add_argument("--no-figures", action="store_true",
                       help="skip figure rendering")

    trace_p = sub.add_parser("trace", help="run one trial, write its force trace")
    trace_p.add_argument("--scenario", required=True)
    trace_p.add_argument("--method", required=True, choices=METHODS)
    trace_p.add_argument("--group", required=True, choices=GROUPS)
    trace_p.add_argument("--seed", type=int, default=0)
    trace_p.add_argument("--out", required=True, help="trace CSV path")
    trace_p.add_argument("--no-figures", action="store_true")

    paths_p = sub.add_parser("paths", help="emit a named trajectory as CSV")
    paths_p.add_argument("--kind", required=True,
                         choices=[k.value for k in TrajectoryKind])
    paths_p.add_argument("--out", required=True, help="waypoint CSV path")
    paths_p.add_argument("--no-figures", action="store_true")
    return parser


def _figure_path(out: str | Path) -> Path:
    return Path(out).with_suffix(".png")


def _cmd_run(args) -> int:
    bundle = load_scenario(args.scenario)
    if args.trials <= 0:
        raise ScenarioError("--trials must be positive")
    report = run_campaign(bundle, [args.method], [args.group], args.trials,
                          base_seed=args.seed, traces_dir=args.traces)
    write_report(report, args.out)
    print(format_summary(report))
    print(f"report written to {args.out}")
    if not args.no_figures:
        from .plots import plot_report
        fig = plot_report(report, _figure_path(args.out))
        print(f"figure written to {fig}")
    return 0


def _cmd_trace(args) -> int:
    bundle = load_scenario(args.scenario)
    cfg = make_trial_config(args.seed, args.group, args.method, bundle.name)
    result = run_trial(cfg, bundle, keep_trace=True)
    export_trace(result, args.out)
    print(f"method={cfg.method} group={cfg.group} seed={cfg.seed} "
          f"success={str(result.success).lower()} "
          f"final_error={result.final_error:.4f} mm "
          f"peak_force={result.peak_force:.3f} N steps={result.steps}")
    print(f"trace written to {args.out}")
    if not args.no_figures and result.trace:
        from .plots import plot_trace
        fig = plot_trace(result.trace, phase_labels(result.trace),
                         _figure_path(args.out))
        print(f"figure written to {fig}")
    return 0


def _cmd_paths(args) -> int:
    pts = generate_trajectory(TrajectoryKind(args.kind))
    lines = ["x,y"] + [f"{repr(x)},{repr(y)}" for x, y in pts]
    try:
        Path(args.out).write_text("\n".join(lines) + "\n")
    except OSError as exc:
        raise ScenarioError(f"cannot write {args.out}: {exc}") from exc
    print(f"{len(pts)} waypoints written to {args.out}")
    if not args.no_figures:
        from .plots import plot_path
        fig = plot_path(pts, _figure_path(args.out))
        print(f"figure written to {fig}")
    return 0


def main(argv=None) -> int:
    args = _build_parser().parse_args(argv)
    handlers = {"run": _cmd_run, "trace": _cmd_trace, "paths": _cmd_paths}
    try:
        return handlers[args.command](args)
    except (ScenarioError, OSError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
