"""Exact uniprocessor schedulability tests.

A processor partition under a uniprocessor-scope scheduler behaves like a
single serialized resource, so the classic single-processor tests apply:

* preemptive FP response-time analysis,
  R = C_i + sum_{j in hp(i)} ceil(R / T_j) * C_j;
* non-preemptive FP multi-job busy-period analysis with blocking
  B_i = max_{k in lp(i)} (C_k - 1) (integer time: a lower-priority job can
  start at the latest one tick before the release under analysis);
* the EDF utilization bound (sum u_i <= u_b, implicit deadlines);
* the EDF processor-demand test for constrained deadlines.

All tests are pure functions of their inputs.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .model import TaskSet

BUSY_PERIOD_CAP = 10_000_000


class AnalysisError(ValueError):
    pass


class EmptyTaskSet(AnalysisError):
    pass


class BusyPeriodOverflow(AnalysisError):
    pass


class HorizonOverflow(AnalysisError):
    pass


class ConstrainedDeadlinePresent(AnalysisError):
    pass


@dataclass(frozen=True)
class SchedVerdict:
    """Outcome of a schedulability test.

    ``responses`` maps task id to the worst-case response computed by the
    test, where the test produces one.  If ``schedulable`` is True every
    reported response is at or below that task's deadline.
    """

    schedulable: bool
    responses: dict[int, int] | None
    reason: str = "ok"

    def __bool__(self) -> bool:
        return self.schedulable


def _check_order(taskset: TaskSet, order: Sequence[int]) -> None:
    if len(taskset) == 0:
        raise EmptyTaskSet("schedulability test on an empty task set")
    if sorted(order) != list(range(len(taskset))):
        raise AnalysisError(f"priority order {order!r} is not a permutation")


def rta_fp_preemptive(taskset: TaskSet, order: Sequence[int]) -> SchedVerdict:
    """Exact preemptive FP response-time analysis (constrained deadlines).

    ``order`` lists task indices from highest to lowest priority.
    Iteration starts at R = C_i and aborts as unschedulable once the
    iterate exceeds D_i; iterates approach the least fixed point from
    below, so the abort is exact.
    """
    _check_order(taskset, order)
    responses: dict[int, int] = {}
    for rank, idx in enumerate(order):
        task = taskset[idx]
        hp = [taskset[j] for j in order[:rank]]
        r = task.wcet
        while True:
            nxt = task.wcet + sum(-(-r // h.period) * h.wcet for h in hp)
            if nxt > task.deadline:
                return SchedVerdict(False, responses, f"deadline:{task.id}")
            if nxt == r:
                break
            r = nxt
        responses[task.id] = r
    return SchedVerdict(True, responses)


def _fixed_point(f, start: int, cap: int) -> int:
    x = start
    while True:
        nxt = f(x)
        if nxt == x:
            return x
        if nxt > cap:
            raise BusyPeriodOverflow(f"fixed point exceeded {cap}")
        x = nxt


def rta_fp_nonpreemptive(taskset: TaskSet, order: Sequence[int]) -> SchedVerdict:
    """Exact non-preemptive FP analysis (blocking + multi-job busy period).

    For each task i: B_i = max_{lp}(C_k - 1); the level-i busy period L_i
    solves L = B_i + sum_{hep} ceil(L/T_j) C_j; for each job q in the busy
    period, the start time w_i(q) solves
    w = B_i + q C_i + sum_{hp}(floor(w/T_j) + 1) C_j and the response is
    w_i(q) + C_i - q T_i.  The first job is checked before the busy period
    is computed so that overloaded sets report unschedulable instead of
    overflowing.
    """
    _check_order(taskset, order)
    responses: dict[int, int] = {}
    for rank, idx in enumerate(order):
        task = taskset[idx]
        hp = [taskset[j] for j in order[:rank]]
        lp = [taskset[j] for j in order[rank + 1:]]
        blocking = max((t.wcet - 1 for t in lp), default=0)

        # A task below a saturated higher-priority load never stabilizes,
        # and its start-time recurrence would diverge.
        hp_util = sum((h.seq_utilization for h in hp), Fraction(0))
        if hp_util >= 1:
            return SchedVerdict(False, responses, f"hp-util:{task.id}")

        def start_time(q: int) -> int:
            base = blocking + q * task.wcet
            return _fixed_point(
                lambda w: base + sum((w // h.period + 1) * h.wcet for h in hp),
                base + sum(h.wcet for h in hp),
                BUSY_PERIOD_CAP,
            )

        w0 = start_time(0)
        r0 = w0 + task.wcet
        if r0 > task.deadline:
            responses[task.id] = r0
            return SchedVerdict(False, responses, f"deadline:{task.id}")

        if hp_util + task.seq_utilization > 1:
            return SchedVerdict(False, responses, f"hep-util:{task.id}")

        busy = _fixed_point(
            lambda length: blocking
            + sum(-(-length // t.period) * t.wcet for t in [task, *hp]),
            blocking + task.wcet + sum(h.wcet for h in hp),
            BUSY_PERIOD_CAP,
        )
        worst = r0
        for q in range(1, -(-busy // task.period)):
            r = start_time(q) + task.wcet - q * task.period
            if r > task.deadline:
                responses[task.id] = r
                return SchedVerdict(False, responses, f"deadline:{task.id}")
            worst = max(worst, r)
        responses[task.id] = worst
    return SchedVerdict(True, responses)


def edf_utilization_test(taskset: TaskSet, u_b: Fraction | int = 1) -> SchedVerdict:
    """EDF utilization-bound test: schedulable iff sum u_i <= u_b.

    Exact only for implicit deadlines; raises if any deadline is
    constrained (use :func:`edf_demand_test` there instead).
    Comparisons are exact rationals, so boundary sums classify correctly.
    """
    if len(taskset) == 0:
        raise EmptyTaskSet("schedulability test on an empty task set")
    for t in taskset:
        if t.deadline < t.period:
            raise ConstrainedDeadlinePresent(
                f"task {t.id} has deadline {t.deadline} < period {t.period}"
            )
    total = taskset.total_seq_utilization
    if total <= Fraction(u_b):
        return SchedVerdict(True, None)
    return SchedVerdict(False, None, f"util:{float(total):.6f}")


def dbf(taskset: TaskSet, t: int) -> int:
    """Processor demand of jobs with both release and deadline inside [0, t]."""
    total = 0
    for task in taskset:
        if t >= task.deadline:
            total += ((t - task.deadline) // task.period + 1) * task.wcet
    return total


def edf_demand_test(taskset: TaskSet, horizon_cap: int = BUSY_PERIOD_CAP) -> SchedVerdict:
    """Exact EDF test for constrained deadlines via processor demand.

    Checks dbf(t) <= t at every absolute deadline up to the smaller of the
    synchronous busy period and the hyperperiod.
    """
    if len(taskset) == 0:
        raise EmptyTaskSet("schedulability test on an empty task set")
    if taskset.total_seq_utilization > 1:
        return SchedVerdict(False, None, "util-exceeds-one")

    bounds = []
    try:
        bounds.append(
            _fixed_point(
                lambda length: sum(
                    -(-length // t.period) * t.wcet for t in taskset
                ),
                sum(t.wcet for t in taskset),
                horizon_cap,
            )
        )
    except BusyPeriodOverflow:
        pass
    h = 1
    for t in taskset:
        h = math.lcm(h, t.period)
        if h > horizon_cap:
            h = None
            break
    if h is not None:
        bounds.append(h)
    if not bounds:
        raise HorizonOverflow("demand checkpoint bound exceeds the horizon cap")
    bound = min(bounds)

    checkpoints: set[int] = set()
    for task in taskset:
        d = task.deadline
        while d <= bound:
            checkpoints.add(d)
            d += task.period
    for t in sorted(checkpoints):
        if dbf(taskset, t) > t:
            return SchedVerdict(False, None, f"demand:{t}")
    return SchedVerdict(True, None)
