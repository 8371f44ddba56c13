"""Command-line front end.

Subcommands: ``gen`` (write a task-set file), ``analyze`` (single file),
``grid`` (synthetic sweep), ``casestudy`` (accelerator suites), and
``simulate`` (trace export).
"""

from __future__ import annotations

import argparse
import sys
from fractions import Fraction

from .experiments import (
    DEFAULT_NONPREEMPTIVE_TESTS,
    DEFAULT_TESTS,
    ExperimentGrid,
    analyze_file,
    run_case_study,
    run_grid,
)
from .generate import GenSpec, gen_taskset
from .model import (
    GANG_EDF_P,
    GANG_FP_NP,
    GANG_FP_P,
    Platform,
    UNI_EDF_P,
    UNI_FP_NP,
    UNI_FP_P,
    hyperperiod,
)
from .partition import PartitionerConfig
from .sim import ReleasePattern, format_trace, simulate
from .taskset_io import ParseError, load_taskset, save_taskset

_KINDS = {
    "uni-fp-p": UNI_FP_P,
    "uni-fp-np": UNI_FP_NP,
    "uni-edf-p": UNI_EDF_P,
    "gang-fp-p": GANG_FP_P,
    "gang-fp-np": GANG_FP_NP,
    "gang-edf-p": GANG_EDF_P,
}


def _cmd_gen(args) -> int:
    spec = GenSpec(
        processors=args.processors,
        n=args.tasks,
        volume_level=args.volume_level,
        normalized_utilization=args.norm_util,
        seed=args.seed,
    )
    result = gen_taskset(spec)
    save_taskset(args.out, Platform(args.processors), result.taskset)
    print(
        f"wrote {args.out}: n={args.tasks} M={args.processors} "
        f"target U={result.target_utilization:.3f} "
        f"realized U={float(result.realized_utilization):.3f}"
    )
    return 0


def _config_from_args(args) -> PartitionerConfig:
    variant = args.variant
    if variant == "sp-b":
        return PartitionerConfig("sp-b", u_b=Fraction(args.ub))
    kind = _KINDS[f"{'uni' if variant == 'sp-u' else 'gang'}-{args.policy}-{args.preemption}"]
    return PartitionerConfig(variant, kind, u_b=Fraction(args.ub))


def _cmd_analyze(args) -> int:
    try:
        config = _config_from_args(args)
    except KeyError:
        print("error: unsupported policy/preemption combination", file=sys.stderr)
        return 2
    code, report = analyze_file(args.taskset, config)
    print(report)
    return code


def _cmd_grid(args) -> int:
    tests = DEFAULT_TESTS
    if args.tests:
        wanted = {name.strip() for name in args.tests.split(",")}
        tests = tuple((n, c) for n, c in DEFAULT_TESTS if n in wanted)
        missing = wanted - {n for n, _ in tests}
        if missing:
            print(f"error: unknown tests {sorted(missing)}", file=sys.stderr)
            return 2
    grid = ExperimentGrid(
        sets_per_cell=1000 if args.paper_scale else args.sets_per_cell,
        seed=args.seed,
        tests=tests,
    )
    rows = run_grid(grid, args.out)
    print(f"wrote {args.out} ({len(rows)} rows) and the averaged companion view")
    return 0


def _cmd_casestudy(args) -> int:
    tests = DEFAULT_NONPREEMPTIVE_TESTS
    if args.tests:
        wanted = {name.strip() for name in args.tests.split(",")}
        tests = tuple((n, c) for n, c in DEFAULT_NONPREEMPTIVE_TESTS if n in wanted)
        missing = wanted - {n for n, _ in tests}
        if missing:
            print(f"error: unknown non-preemptive tests {sorted(missing)}", file=sys.stderr)
            return 2
    rows = run_case_study(
        args.card,
        args.out,
        seed=args.seed,
        sets_per_util=1000 if args.paper_scale else args.sets_per_cell,
        tests=tests,
    )
    print(f"wrote {args.out} ({len(rows)} rows)")
    return 0


def _cmd_simulate(args) -> int:
    try:
        platform, taskset = load_taskset(args.taskset)
    except ParseError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    kind = _KINDS[args.scheduler]
    horizon = args.horizon
    if horizon is None:
        horizon = hyperperiod(taskset)
        if horizon is None:
            print("error: hyperperiod exceeds the cap; pass --horizon", file=sys.stderr)
            return 2
    if args.offset:
        offsets = {}
        for item in args.offset:
            tid, _, tick = item.partition(":")
            offsets[int(tid)] = int(tick)
        release = ReleasePattern.explicit(offsets, horizon)
    else:
        release = ReleasePattern.synchronous(horizon)
    trace = simulate(taskset, kind, release, platform=platform)
    text = format_trace(trace)
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(text)
        print(f"wrote {args.out} ({len(trace.events)} events)")
    else:
        sys.stdout.write(text)
    if trace.first_miss is not None:
        task, tick = trace.first_miss
        print(f"first deadline miss: task {task} at tick {tick}", file=sys.stderr)
        return 1
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="gangsched",
        description="Strict partitioning and schedulability analysis for rigid gang tasks.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("gen", help="generate a synthetic task-set file")
    p.add_argument("--processors", "-M", type=int, required=True)
    p.add_argument("--tasks", "-n", type=int, required=True)
    p.add_argument("--volume-level", choices=("low", "medium", "high"), default="medium")
    p.add_argument("--norm-util", type=float, required=True)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", required=True)
    p.set_defaults(func=_cmd_gen)

    p = sub.add_parser("analyze", help="analyze one task-set file")
    p.add_argument("taskset")
    p.add_argument("--variant", choices=("sp-u", "sp-g", "sp-b"), default="sp-u")
    p.add_argument("--policy", choices=("fp", "edf"), default="fp")
    p.add_argument("--preemption", choices=("p", "np"), default="p")
    p.add_argument("--ub", default="1", help="scheduler utilization bound (sp-b)")
    p.set_defaults(func=_cmd_analyze)

    p = sub.add_parser("grid", help="run the synthetic parameter sweep")
    p.add_argument("--out", required=True)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--sets-per-cell", type=int, default=100)
    p.add_argument("--paper-scale", action="store_true", help="1000 sets per cell")
    p.add_argument("--tests", help="comma-separated test names (default: all)")
    p.set_defaults(func=_cmd_grid)

    p = sub.add_parser("casestudy", help="run an accelerator benchmark suite")
    p.add_argument("--card", choices=("8tpu", "16tpu"), required=True)
    p.add_argument("--out", required=True)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--sets-per-cell", type=int, default=100)
    p.add_argument("--paper-scale", action="store_true")
    p.add_argument("--tests", help="comma-separated non-preemptive test names")
    p.set_defaults(func=_cmd_casestudy)

    p = sub.add_parser("simulate", help="simulate a task set and export the trace")
    p.add_argument("taskset")
    p.add_argument("--scheduler", choices=sorted(_KINDS), default="gang-fp-p")
    p.add_argument("--horizon", type=int)
    p.add_argument("--offset", action="append",
                   help="task:tick explicit first release (repeatable); "
                        "tasks without an offset never release")
    p.add_argument("--out")
    p.set_defaults(func=_cmd_simulate)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
