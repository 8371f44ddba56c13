"""Task, platform, and partition model for rigid gang scheduling.

A rigid gang task releases a potentially infinite sequence of jobs, at
least ``period`` ticks apart; every job needs ``volume`` processors
simultaneously for up to ``wcet`` ticks and must finish within
``deadline`` ticks of its release.  All parameters are positive integers
and deadlines are constrained (wcet <= deadline <= period).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum
from fractions import Fraction

HYPERPERIOD_CAP = 10_000_000


class TaskModelError(ValueError):
    """Base class for invalid task/platform/partition parameters."""


class NonPositiveField(TaskModelError):
    pass


class DeadlineExceedsPeriod(TaskModelError):
    pass


class WcetExceedsDeadline(TaskModelError):
    pass


@dataclass(frozen=True)
class GangTask:
    """One sporadic rigid gang task (C, T, D, m)."""

    id: int
    wcet: int
    period: int
    deadline: int
    volume: int

    def __post_init__(self) -> None:
        for name in ("wcet", "period", "deadline", "volume"):
            value = getattr(self, name)
            if not isinstance(value, int) or isinstance(value, bool) or value < 1:
                raise NonPositiveField(f"task {self.id}: {name}={value!r} must be an integer >= 1")
        if self.deadline > self.period:
            raise DeadlineExceedsPeriod(
                f"task {self.id}: deadline {self.deadline} > period {self.period}"
            )
        if self.wcet > self.deadline:
            raise WcetExceedsDeadline(
                f"task {self.id}: wcet {self.wcet} > deadline {self.deadline}"
            )

    @property
    def seq_utilization(self) -> Fraction:
        """Sequential utilization C/T (exact)."""
        return Fraction(self.wcet, self.period)

    @property
    def utilization(self) -> Fraction:
        """Processor utilization m*C/T (exact)."""
        return self.volume * Fraction(self.wcet, self.period)


def validate_task(id: int, wcet: int, period: int, deadline: int, volume: int) -> GangTask:
    """Build a task from raw integer fields, naming the violated invariant on error."""
    return GangTask(id=id, wcet=wcet, period=period, deadline=deadline, volume=volume)


@dataclass(frozen=True)
class TaskSet:
    """An ordered, immutable collection of gang tasks with unique ids."""

    tasks: tuple[GangTask, ...]

    def __init__(self, tasks) -> None:
        object.__setattr__(self, "tasks", tuple(tasks))
        seen: set[int] = set()
        for t in self.tasks:
            if t.id in seen:
                raise TaskModelError(f"duplicate task id {t.id}")
            seen.add(t.id)

    def __len__(self) -> int:
        return len(self.tasks)

    def __iter__(self):
        return iter(self.tasks)

    def __getitem__(self, i: int) -> GangTask:
        return self.tasks[i]

    def by_id(self, task_id: int) -> GangTask:
        for t in self.tasks:
            if t.id == task_id:
                return t
        raise KeyError(task_id)

    def subset(self, ids) -> "TaskSet":
        wanted = set(ids)
        return TaskSet(t for t in self.tasks if t.id in wanted)

    @property
    def total_utilization(self) -> Fraction:
        return sum((t.utilization for t in self.tasks), Fraction(0))

    @property
    def total_seq_utilization(self) -> Fraction:
        return sum((t.seq_utilization for t in self.tasks), Fraction(0))

    @property
    def max_volume(self) -> int:
        return max((t.volume for t in self.tasks), default=0)

    @property
    def min_volume(self) -> int:
        return min((t.volume for t in self.tasks), default=0)

    @property
    def implicit_deadlines(self) -> bool:
        return all(t.deadline == t.period for t in self.tasks)


@dataclass(frozen=True)
class Platform:
    """A set of identical processors."""

    processors: int

    def __post_init__(self) -> None:
        if not isinstance(self.processors, int) or self.processors < 1:
            raise NonPositiveField(f"processors={self.processors!r} must be an integer >= 1")


class Policy(str, Enum):
    FP = "fp"
    EDF = "edf"


class Preemption(str, Enum):
    PREEMPTIVE = "preemptive"
    NON_PREEMPTIVE = "non-preemptive"


class Scope(str, Enum):
    UNIPROCESSOR = "uniprocessor"
    GANG = "gang"


@dataclass(frozen=True)
class SchedulerKind:
    """Which online scheduler runs inside a partition.

    A uniprocessor-scope kind serializes the whole partition (one job at a
    time); a gang-scope kind lets jobs run in parallel whenever enough
    processors are free inside the partition.
    """

    policy: Policy
    preemption: Preemption
    scope: Scope

    def __post_init__(self) -> None:
        if self.policy is Policy.EDF and self.preemption is Preemption.NON_PREEMPTIVE:
            raise TaskModelError("non-preemptive EDF is not supported")

    @property
    def label(self) -> str:
        pre = "P" if self.preemption is Preemption.PREEMPTIVE else "NP"
        return f"{self.scope.value}/{self.policy.value.upper()}-{pre}"


UNI_FP_P = SchedulerKind(Policy.FP, Preemption.PREEMPTIVE, Scope.UNIPROCESSOR)
UNI_FP_NP = SchedulerKind(Policy.FP, Preemption.NON_PREEMPTIVE, Scope.UNIPROCESSOR)
UNI_EDF_P = SchedulerKind(Policy.EDF, Preemption.PREEMPTIVE, Scope.UNIPROCESSOR)
GANG_FP_P = SchedulerKind(Policy.FP, Preemption.PREEMPTIVE, Scope.GANG)
GANG_FP_NP = SchedulerKind(Policy.FP, Preemption.NON_PREEMPTIVE, Scope.GANG)
GANG_EDF_P = SchedulerKind(Policy.EDF, Preemption.PREEMPTIVE, Scope.GANG)


@dataclass(frozen=True)
class Partition:
    """A block of processors plus the tasks statically assigned to it."""

    id: int
    volume: int
    members: tuple[int, ...]  # task ids, in assignment order

    def __post_init__(self) -> None:
        if self.volume < 1:
            raise NonPositiveField(f"partition {self.id}: volume must be >= 1")


@dataclass(frozen=True)
class PartitionPlan:
    """Disjoint processor partitions covering a platform.

    Partition volumes plus ``unassigned`` always add up to the platform
    size, every task appears in exactly one partition, and all partitions
    run the same online scheduler kind.
    """

    partitions: tuple[Partition, ...]
    unassigned: int
    scheduler_kind: SchedulerKind

    def __post_init__(self) -> None:
        seen: set[int] = set()
        for p in self.partitions:
            for tid in p.members:
                if tid in seen:
                    raise TaskModelError(f"task {tid} assigned to more than one partition")
                seen.add(tid)
        if self.unassigned < 0:
            raise TaskModelError("unassigned processor count must be >= 0")

    @property
    def processors(self) -> int:
        return sum(p.volume for p in self.partitions) + self.unassigned

    def member_ids(self) -> set[int]:
        return {tid for p in self.partitions for tid in p.members}

    def partition_of(self, task_id: int) -> Partition:
        for p in self.partitions:
            if task_id in p.members:
                return p
        raise KeyError(task_id)


def dm_priority_order(taskset: TaskSet) -> tuple[int, ...]:
    """Deadline-monotonic priority order as indices into the task set.

    Index 0 is the highest priority.  Sorted by non-decreasing deadline;
    ties broken by ascending task id so the order is deterministic.
    """
    return tuple(
        sorted(range(len(taskset)), key=lambda i: (taskset[i].deadline, taskset[i].id))
    )


def hyperperiod(taskset: TaskSet, cap: int = HYPERPERIOD_CAP) -> int | None:
    """LCM of all periods, or None once it exceeds ``cap`` ticks.

    Callers must treat None as "simulation horizon unavailable", not as
    an error.
    """
    h = 1
    for t in taskset:
        h = math.lcm(h, t.period)
        if h > cap:
            return None
    return h
