"""Experiment harness: parameter-grid sweeps and the accelerator case study.

Each grid cell (processors, task count, volume level, normalized
utilization) draws the same seeded task sets for every schedulability
test, counts accepts, and writes one CSV row per cell and test.  A
companion view averaged over processors and task count is written next
to the per-cell file for plotting.  One percent of accepted sets are
re-simulated as a soundness spot check.
"""

from __future__ import annotations

import csv
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .generate import EDGE_TPU_CARDS, GenSpec, edge_tpu_suite, gen_taskset
from .model import (
    GANG_FP_NP,
    GANG_FP_P,
    TaskSet,
    UNI_EDF_P,
    UNI_FP_NP,
    UNI_FP_P,
    hyperperiod,
)
from .partition import (
    PartitionerConfig,
    PartitionFailure,
    PartitionPlan,
    sp_b,
    sp_g,
    sp_u,
)
from .sim import ReleasePattern, simulate
from .taskset_io import ParseError, load_taskset, plan_to_dict

CSV_HEADER = ("scenario", "M", "n", "volume_level", "norm_util", "test", "schedulable", "total", "ratio")

SPOT_CHECK_EVERY = 100  # re-simulate one accepted set in a hundred
SPOT_CHECK_HORIZON = 10_000


class IoFailure(OSError):
    pass


DEFAULT_PREEMPTIVE_TESTS: tuple[tuple[str, PartitionerConfig], ...] = (
    ("SP-U(FP-P)", PartitionerConfig("sp-u", UNI_FP_P)),
    ("SP-U(EDF)", PartitionerConfig("sp-u", UNI_EDF_P)),
    ("SP-G(FP-P)", PartitionerConfig("sp-g", GANG_FP_P)),
    ("SP-B", PartitionerConfig("sp-b")),
)

DEFAULT_NONPREEMPTIVE_TESTS: tuple[tuple[str, PartitionerConfig], ...] = (
    ("SP-U(FP-NP)", PartitionerConfig("sp-u", UNI_FP_NP)),
    ("SP-G(FP-NP)", PartitionerConfig("sp-g", GANG_FP_NP)),
)

DEFAULT_TESTS = DEFAULT_PREEMPTIVE_TESTS + DEFAULT_NONPREEMPTIVE_TESTS


@dataclass(frozen=True)
class ExperimentGrid:
    """The synthetic sweep lattice."""

    processor_counts: tuple[int, ...] = (8, 16)
    tasks_per_processor: tuple[int, ...] = (1, 2)  # n = factor * M
    volume_levels: tuple[str, ...] = ("low", "medium", "high")
    normalized_utilizations: tuple[float, ...] = tuple(round(0.1 * k, 1) for k in range(1, 11))
    sets_per_cell: int = 100
    seed: int = 0
    tests: tuple[tuple[str, PartitionerConfig], ...] = DEFAULT_TESTS

    def __post_init__(self) -> None:
        if self.sets_per_cell < 1:
            raise ValueError("sets_per_cell must be >= 1")
        if any(not 0 < u <= 1 for u in self.normalized_utilizations):
            raise ValueError("normalized utilizations must lie in (0, 1]")


def run_partitioner(config: PartitionerConfig, taskset: TaskSet, processors: int,
                    registry=None):
    """Run one configured test; returns (accepted, plan or failure or None).

    ``registry`` holds externally registered gang tests; the config's
    ``gang_test`` name selects one for the sp-g variant.
    """
    if config.variant == "sp-u":
        result = sp_u(taskset, processors, config.scheduler_kind, config.u_b)
    elif config.variant == "sp-g":
        from .gang import resolve_gang_test

        handle = resolve_gang_test(config.scheduler_kind, registry, name=config.gang_test)
        result = sp_g(taskset, processors, config.scheduler_kind,
                      gang_test=handle, u_b=config.u_b)
    else:
        report = sp_b(taskset, processors, config.u_b)
        if not report.accepted:
            return False, None
        # The bound guarantees the packing exists; materialize it for checks.
        plan = sp_u(taskset, processors, UNI_EDF_P, config.u_b)
        return True, (plan if isinstance(plan, PartitionPlan) else None)
    if isinstance(result, PartitionFailure):
        return False, result
    return True, result


def _spot_check(plan: PartitionPlan, taskset: TaskSet, test_name: str) -> None:
    h = hyperperiod(taskset)
    horizon = min(h or SPOT_CHECK_HORIZON, SPOT_CHECK_HORIZON)
    trace = simulate(taskset, plan.scheduler_kind, ReleasePattern.synchronous(horizon), plan=plan)
    if not trace.no_miss:
        raise AssertionError(
            f"soundness spot check failed for {test_name}: "
            f"first miss {trace.first_miss} in plan {plan_to_dict(plan)}"
        )


def _cell_sets(grid: ExperimentGrid, m_idx: int, n_idx: int, lvl_idx: int, u_idx: int):
    processors = grid.processor_counts[m_idx]
    n = grid.tasks_per_processor[n_idx] * processors
    level = grid.volume_levels[lvl_idx]
    util = grid.normalized_utilizations[u_idx]
    sets = []
    for k in range(grid.sets_per_cell):
        seq = np.random.SeedSequence(
            grid.seed, spawn_key=(m_idx, n_idx, lvl_idx, u_idx, k)
        )
        spec = GenSpec(processors, n, level, util, seed=int(seq.generate_state(1)[0]))
        sets.append(gen_taskset(spec).taskset)
    return processors, n, level, util, sets


def run_grid(grid: ExperimentGrid, out_path: str | Path, spot_check: bool = True) -> list[dict]:
    """Sweep the grid, write per-cell CSV plus an averaged companion view.

    Returns the per-cell rows as dicts.  Deterministic in the grid seed:
    the same grid writes byte-identical files.
    """
    rows: list[dict] = []
    accept_counter = {name: 0 for name, _ in grid.tests}
    for m_idx in range(len(grid.processor_counts)):
        for n_idx in range(len(grid.tasks_per_processor)):
            for lvl_idx in range(len(grid.volume_levels)):
                for u_idx in range(len(grid.normalized_utilizations)):
                    processors, n, level, util, sets = _cell_sets(
                        grid, m_idx, n_idx, lvl_idx, u_idx
                    )
                    for name, config in grid.tests:
                        accepted = 0
                        for ts in sets:
                            ok, plan = run_partitioner(config, ts, processors)
                            if not ok:
                                continue
                            accepted += 1
                            accept_counter[name] += 1
                            if (
                                spot_check
                                and plan is not None
                                and accept_counter[name] % SPOT_CHECK_EVERY == 1
                            ):
                                _spot_check(plan, ts, name)
                        rows.append({
                            "scenario": "synthetic",
                            "M": processors,
                            "n": n,
                            "volume_level": level,
                            "norm_util": f"{util:.1f}",
                            "test": name,
                            "schedulable": accepted,
                            "total": len(sets),
                            "ratio": f"{accepted / len(sets):.4f}",
                        })
    _write_csv(out_path, rows)
    _write_csv(_averaged_path(out_path), averaged_view(rows))
    return rows


def averaged_view(rows: list[dict]) -> list[dict]:
    """Aggregate counts over processors and task count (plotting parity)."""
    acc: dict[tuple, list[int]] = {}
    order: list[tuple] = []
    for row in rows:
        key = (row["scenario"], row["volume_level"], row["norm_util"], row["test"])
        if key not in acc:
            acc[key] = [0, 0]
            order.append(key)
        acc[key][0] += int(row["schedulable"])
        acc[key][1] += int(row["total"])
    out = []
    for key in order:
        scenario, level, util, test = key
        sched, total = acc[key]
        out.append({
            "scenario": scenario,
            "M": "all",
            "n": "all",
            "volume_level": level,
            "norm_util": util,
            "test": test,
            "schedulable": sched,
            "total": total,
            "ratio": f"{sched / total:.4f}",
        })
    return out


def _averaged_path(out_path: str | Path) -> Path:
    p = Path(out_path)
    return p.with_name(p.stem + ".avg" + p.suffix)


def _write_csv(path: str | Path, rows: list[dict]) -> None:
    try:
        with open(path, "w", newline="") as fh:
            writer = csv.DictWriter(fh, fieldnames=CSV_HEADER)
            writer.writeheader()
            writer.writerows(rows)
    except OSError as exc:
        raise IoFailure(str(exc)) from exc


def run_case_study(
    card: str,
    out_path: str | Path,
    seed: int = 0,
    sets_per_util: int = 100,
    utilizations: tuple[float, ...] = tuple(round(0.1 * k, 1) for k in range(1, 11)),
    tests: tuple[tuple[str, PartitionerConfig], ...] = DEFAULT_NONPREEMPTIVE_TESTS,
    spot_check: bool = True,
) -> list[dict]:
    """Accelerator case study: non-preemptive tests over the benchmark suite."""
    processors, n = EDGE_TPU_CARDS[card]
    rows: list[dict] = []
    accept_counter = {name: 0 for name, _ in tests}
    for u_idx, util in enumerate(utilizations):
        sets = []
        for k in range(sets_per_util):
            seq = np.random.SeedSequence(seed, spawn_key=(u_idx, k))
            sets.append(edge_tpu_suite(card, util, seq).taskset)
        for name, config in tests:
            accepted = 0
            for ts in sets:
                ok, plan = run_partitioner(config, ts, processors)
                if not ok:
                    continue
                accepted += 1
                accept_counter[name] += 1
                if spot_check and plan is not None and accept_counter[name] % SPOT_CHECK_EVERY == 1:
                    _spot_check(plan, ts, name)
            rows.append({
                "scenario": f"edge-tpu-{card}",
                "M": processors,
                "n": n,
                "volume_level": "-",
                "norm_util": f"{util:.1f}",
                "test": name,
                "schedulable": accepted,
                "total": len(sets),
                "ratio": f"{accepted / len(sets):.4f}",
            })
    _write_csv(out_path, rows)
    return rows


def analyze_file(path: str | Path, config: PartitionerConfig) -> tuple[int, str]:
    """Analyze one task-set file; (exit code, printable report).

    Exit codes: 0 schedulable, 1 unschedulable, 2 malformed input.
    """
    import json

    try:
        platform, taskset = load_taskset(path)
    except ParseError as exc:
        return 2, f"error: {exc}"
    if config.variant == "sp-b":
        report = sp_b(taskset, platform.processors, config.u_b)
        lines = [
            f"weighted-bound: {'holds' if report.weighted.holds else 'fails'}"
            + (f" ({report.weighted.reason})" if report.weighted.reason else ""),
            f"plain-bound: {'holds' if report.plain.holds else 'fails'}",
            f"split-bound: {'holds' if report.split.holds else 'fails'}"
            + (f" (p={report.split.split})" if report.split.split else ""),
            f"accepted: {report.accepted}",
        ]
        return (0 if report.accepted else 1), "\n".join(lines)
    ok, result = run_partitioner(config, taskset, platform.processors)
    if not ok:
        failed_at = result.task_id if isinstance(result, PartitionFailure) else "?"
        return 1, f"unschedulable: no partitioning found (first unplaceable task: {failed_at})"
    plan = result
    out = {"schedulable": True, "plan": plan_to_dict(plan)}
    responses = _plan_responses(plan, taskset)
    if responses is not None:
        out["responses"] = responses
    return 0, json.dumps(out, indent=2)


def _plan_responses(plan: PartitionPlan, taskset: TaskSet) -> dict[int, int] | None:
    """Per-task worst-case responses for FP plans, where the tests report them."""
    from .gang import baseline_gang_rta_fp, pairwise_sequential
    from .model import Policy, Preemption, Scope, dm_priority_order
    from .uniproc import rta_fp_nonpreemptive, rta_fp_preemptive

    kind = plan.scheduler_kind
    if kind.policy is not Policy.FP:
        return None
    responses: dict[int, int] = {}
    for part in plan.partitions:
        subset = taskset.subset(part.members)
        order = dm_priority_order(subset)
        if kind.scope is Scope.UNIPROCESSOR or pairwise_sequential(subset, part.volume):
            rta = (
                rta_fp_preemptive
                if kind.preemption is Preemption.PREEMPTIVE
                else rta_fp_nonpreemptive
            )
            verdict = rta(subset, order)
        elif kind.preemption is Preemption.PREEMPTIVE:
            verdict = baseline_gang_rta_fp(subset, part.volume, order)
        else:
            return None
        if verdict.responses:
            responses.update(verdict.responses)
    return responses
