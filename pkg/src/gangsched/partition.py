"""Strict partitioning of rigid gang tasks onto identical processors.

The first-fit decreasing-volume (FFDV) heuristic sorts tasks by
non-increasing volume (ties: increasing period, then id) and assigns each
to the first existing partition that stays schedulable with it; failing
that it opens a new partition sized to the task, while spare processors
remain.  Three partitioner variants build on it:

* sp_u: per-partition uniprocessor scheduler, exact uniprocessor tests;
* sp_g: per-partition gang scheduler; the test per candidate subset is
  the exact uniprocessor test whenever the subset is pairwise sequential
  on the partition, otherwise a pluggable gang test, plus a one-shot
  volume increase of the last partition from leftover processors;
* sp_b: closed-form utilization-bound admission (no plan construction),
  sound for sp_u with a preemptive-EDF partition scheduler.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Callable

from .gang import GangTestHandle, pairwise_sequential, resolve_gang_test
from .model import (
    GangTask,
    Partition,
    PartitionPlan,
    Policy,
    Preemption,
    SchedulerKind,
    Scope,
    TaskSet,
    dm_priority_order,
)
from .uniproc import (
    AnalysisError,
    BusyPeriodOverflow,
    HorizonOverflow,
    edf_demand_test,
    edf_utilization_test,
    rta_fp_nonpreemptive,
    rta_fp_preemptive,
)


class DomainViolation(AnalysisError):
    pass


@dataclass(frozen=True)
class PartitionFailure:
    """FFDV could not place a task; carries the first unplaceable task."""

    task_id: int
    reason: str

    def __bool__(self) -> bool:
        return False


PlanOrFailure = PartitionPlan | PartitionFailure

# A per-partition admission test: (members plus candidate, partition volume).
SubsetTest = Callable[[TaskSet, int], bool]


@dataclass(frozen=True)
class PartitionerConfig:
    """Which strict-partitioning variant to run and with what scheduler."""

    variant: str  # "sp-u" | "sp-g" | "sp-b"
    scheduler_kind: SchedulerKind | None = None
    gang_test: str | None = None  # registry name, sp-g only
    u_b: Fraction = Fraction(1)

    def __post_init__(self) -> None:
        if self.variant not in ("sp-u", "sp-g", "sp-b"):
            raise AnalysisError(f"unknown variant {self.variant!r}")
        if not 0 < self.u_b <= 1:
            raise AnalysisError("u_b must lie in (0, 1]")
        if self.variant == "sp-b":
            if self.scheduler_kind is not None and (
                self.scheduler_kind.policy is not Policy.EDF
                or self.scheduler_kind.preemption is not Preemption.PREEMPTIVE
            ):
                raise AnalysisError("sp-b is only meaningful for preemptive EDF")
        elif self.scheduler_kind is None:
            raise AnalysisError(f"{self.variant} needs a scheduler kind")


def ffdv_order(taskset: TaskSet) -> list[GangTask]:
    """Volume-descending processing order; ties by period, then id."""
    return sorted(taskset, key=lambda t: (-t.volume, t.period, t.id))


def ffdv(
    taskset: TaskSet,
    processors: int,
    subset_test: SubsetTest,
    scheduler_kind: SchedulerKind,
    volume_increase_test: SubsetTest | None = None,
) -> PlanOrFailure:
    """First-fit decreasing-volume packing with a pluggable admission test.

    ``volume_increase_test`` enables the one-shot growth of the last
    partition by the leftover processors when a task fits nowhere and the
    leftovers alone are too few for a new partition (gang variant only).
    """
    spare = processors
    volumes: list[int] = []
    members: list[list[GangTask]] = []
    for task in ffdv_order(taskset):
        placed = False
        for j in range(len(volumes)):
            if task.volume > volumes[j]:
                continue
            if subset_test(TaskSet(members[j] + [task]), volumes[j]):
                members[j].append(task)
                placed = True
                break
        if placed:
            continue
        if task.volume <= spare:
            volumes.append(task.volume)
            members.append([task])
            spare -= task.volume
            continue
        if volume_increase_test is not None and 0 < spare and volumes:
            grown = volumes[-1] + spare
            if task.volume <= grown and volume_increase_test(
                TaskSet(members[-1] + [task]), grown
            ):
                volumes[-1] = grown
                members[-1].append(task)
                spare = 0
                continue
        return PartitionFailure(task.id, "no-partition-fits")
    partitions = tuple(
        Partition(id=j, volume=volumes[j], members=tuple(t.id for t in members[j]))
        for j in range(len(volumes))
    )
    return PartitionPlan(partitions, spare, scheduler_kind)


def _reject_on_overflow(test: Callable[[TaskSet], bool]) -> Callable[[TaskSet], bool]:
    def wrapped(subset: TaskSet) -> bool:
        try:
            return test(subset)
        except (BusyPeriodOverflow, HorizonOverflow):
            return False  # cannot prove schedulable, so do not admit

    return wrapped


def uniproc_subset_test(kind: SchedulerKind, u_b: Fraction = Fraction(1)) -> SubsetTest:
    """The exact uniprocessor test matching a scheduler kind.

    Priorities are deadline-monotonic, recomputed per candidate subset
    (priorities are partition-local).  For EDF the utilization bound is
    used on implicit-deadline subsets and the processor-demand test when
    any deadline is constrained.
    """
    if kind.policy is Policy.FP:
        rta = (
            rta_fp_preemptive
            if kind.preemption is Preemption.PREEMPTIVE
            else rta_fp_nonpreemptive
        )
        check = _reject_on_overflow(
            lambda subset: rta(subset, dm_priority_order(subset)).schedulable
        )
    else:
        def edf_check(subset: TaskSet) -> bool:
            if subset.implicit_deadlines:
                return edf_utilization_test(subset, u_b).schedulable
            return u_b >= 1 and edf_demand_test(subset).schedulable

        check = _reject_on_overflow(edf_check)
    return lambda subset, volume: check(subset)


def sp_u(
    taskset: TaskSet,
    processors: int,
    scheduler_kind: SchedulerKind,
    u_b: Fraction = Fraction(1),
) -> PlanOrFailure:
    """Strict partitioning with uniprocessor online schedulers."""
    if scheduler_kind.scope is not Scope.UNIPROCESSOR:
        raise AnalysisError("sp_u needs a uniprocessor-scope scheduler kind")
    return ffdv(taskset, processors, uniproc_subset_test(scheduler_kind, u_b), scheduler_kind)


def sp_g(
    taskset: TaskSet,
    processors: int,
    scheduler_kind: SchedulerKind,
    gang_test: GangTestHandle | None = None,
    registry: dict[str, GangTestHandle] | None = None,
    u_b: Fraction = Fraction(1),
) -> PlanOrFailure:
    """Strict partitioning with gang online schedulers.

    Per candidate subset the admission test is the exact uniprocessor
    test of the same policy if the subset is pairwise sequential on the
    partition volume, else the resolved gang test.  When a task fits no
    partition and the spare processors are too few for a new one, the
    last partition is grown once by all spare processors iff the enlarged
    partition admits the union.
    """
    if scheduler_kind.scope is not Scope.GANG:
        raise AnalysisError("sp_g needs a gang-scope scheduler kind")
    if gang_test is None:
        gang_test = resolve_gang_test(scheduler_kind, registry)
    uni_kind = SchedulerKind(
        scheduler_kind.policy, scheduler_kind.preemption, Scope.UNIPROCESSOR
    )
    uni_test = uniproc_subset_test(uni_kind, u_b)

    def test(subset: TaskSet, volume: int) -> bool:
        if pairwise_sequential(subset, volume):
            return uni_test(subset, volume)
        try:
            return gang_test.test(subset, volume, dm_priority_order(subset)).schedulable
        except (BusyPeriodOverflow, HorizonOverflow):
            return False

    return ffdv(taskset, processors, test, scheduler_kind, volume_increase_test=test)


# --- closed-form utilization-bound admission -------------------------------

_SIXTH = Fraction(1, 6)
_THIRD = Fraction(1, 3)
_HALF = Fraction(1, 2)


def packing_weight(util: Fraction, u_b: Fraction | int = 1) -> Fraction:
    """Piecewise first-fit packing weight of one task's utilization.

    Defined on [0, u_b] with range [0, 8/5 u_b]; exact rationals so the
    breakpoints at u_b/6, u_b/3 and u_b/2 classify without drift.
    """
    u_b = Fraction(u_b)
    util = Fraction(util)
    if util < 0 or util > u_b:
        raise DomainViolation(f"utilization {util} outside [0, {u_b}]")
    if util <= _SIXTH * u_b:
        return Fraction(6, 5) * util
    if util <= _THIRD * u_b:
        return Fraction(9, 5) * util - Fraction(1, 10) * u_b
    if util <= _HALF * u_b:
        return Fraction(6, 5) * util + Fraction(1, 10) * u_b
    return Fraction(6, 5) * util + Fraction(4, 10) * u_b


@dataclass(frozen=True)
class BoundCheck:
    """One admission inequality: holds iff lhs <= rhs."""

    holds: bool
    lhs: Fraction | None
    rhs: Fraction | None
    reason: str = ""
    split: int | None = None  # small-utilization bound only


@dataclass(frozen=True)
class BoundReport:
    weighted: BoundCheck
    plain: BoundCheck
    split: BoundCheck

    @property
    def accepted(self) -> bool:
        return self.weighted.holds or self.plain.holds or self.split.holds


def weighted_util_bound(
    taskset: TaskSet, processors: int, u_b: Fraction | int = 1
) -> BoundCheck:
    """Accept iff sum of packing weights <= (M - max volume) * u_b.

    Inapplicable (reported as a non-holding check, not an error) when any
    task utilization exceeds u_b, since the weight is undefined there.
    """
    u_b = Fraction(u_b)
    if any(t.utilization > u_b for t in taskset):
        return BoundCheck(False, None, (processors - taskset.max_volume) * u_b,
                          reason="task-utilization-above-domain")
    lhs = sum((packing_weight(t.utilization, u_b) for t in taskset), Fraction(0))
    rhs = (processors - taskset.max_volume) * u_b
    return BoundCheck(lhs <= rhs, lhs, rhs)


def plain_util_bound(
    taskset: TaskSet, processors: int, u_b: Fraction | int = 1
) -> BoundCheck:
    """Accept iff U <= (M - max volume + min volume) * u_b / 2."""
    u_b = Fraction(u_b)
    lhs = taskset.total_utilization
    rhs = (processors - taskset.max_volume + taskset.min_volume) * u_b / 2
    return BoundCheck(lhs <= rhs, lhs, rhs)


def split_util_bound(
    taskset: TaskSet, processors: int, u_b: Fraction | int = 1
) -> BoundCheck:
    """Accept iff some integer p >= 2 has every sequential utilization
    <= u_b/p and U <= p/(p+1) * (M - max volume) * u_b.

    Both sides are monotone in p in opposite directions, so only the
    largest feasible p = floor(u_b / max_i u_i) needs checking.  A set
    with no positive sequential utilization (empty set) is vacuously
    accepted with an unbounded split.
    """
    u_b = Fraction(u_b)
    max_seq = max((t.seq_utilization for t in taskset), default=Fraction(0))
    if max_seq == 0:
        return BoundCheck(True, Fraction(0), None, reason="unbounded", split=None)
    p = int(u_b / max_seq)
    if p < 2:
        return BoundCheck(False, taskset.total_utilization, None,
                          reason="no-feasible-split", split=p)
    lhs = taskset.total_utilization
    rhs = Fraction(p, p + 1) * (processors - taskset.max_volume) * u_b
    return BoundCheck(lhs <= rhs, lhs, rhs, split=p)


def sp_b(taskset: TaskSet, processors: int, u_b: Fraction | int = 1) -> BoundReport:
    """Utilization-bound admission: accept if any of the three bounds holds."""
    return BoundReport(
        weighted=weighted_util_bound(taskset, processors, u_b),
        plain=plain_util_bound(taskset, processors, u_b),
        split=split_util_bound(taskset, processors, u_b),
    )
