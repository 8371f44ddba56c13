"""Intra-partition gang schedulability.

When every pair of tasks in a partition together needs more processors
than the partition has, no two jobs can ever overlap, the gang scheduler
degrades to a uniprocessor scheduler, and the exact uniprocessor tests
apply.  Otherwise a (sufficient-only) gang test is needed; external
analyses plug in through :class:`GangTestHandle` and a conservative
in-house response-time bound serves as the default for preemptive FP.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Iterable, Sequence

from .model import (
    GANG_FP_P,
    Preemption,
    SchedulerKind,
    Scope,
    TaskSet,
)
from .uniproc import AnalysisError, SchedVerdict, _check_order


class NonPreemptiveUnsupported(AnalysisError):
    pass


class VolumeExceedsPartition(AnalysisError):
    pass


GangTest = Callable[[TaskSet, int, Sequence[int]], SchedVerdict]


@dataclass(frozen=True)
class GangTestHandle:
    """A named gang schedulability test.

    The test callable maps (task set, partition volume, priority order)
    to a verdict and must be sound: an accept implies the set is
    schedulable by the corresponding online scheduler.  Soundness is a
    documented contract on registrants, spot-checked against simulation.
    """

    name: str
    applicable: frozenset[SchedulerKind]
    test: GangTest


def pairwise_sequential(tasks: Iterable, partition_volume: int) -> bool:
    """True iff no two distinct tasks fit in the partition simultaneously.

    Checks m_x + m_y > partition volume for every unordered pair; a
    singleton (or empty) collection is trivially sequential.
    """
    volumes = sorted(t.volume for t in tasks)
    if len(volumes) < 2:
        return True
    # The two smallest volumes witness any violating pair.
    return volumes[0] + volumes[1] > partition_volume


def baseline_gang_rta_fp(
    taskset: TaskSet,
    partition_volume: int,
    order: Sequence[int],
    preemption: Preemption = Preemption.PREEMPTIVE,
) -> SchedVerdict:
    """Sufficient response-time bound for preemptive FP gang scheduling
    under synchronous periodic releases.

    Per task k, in priority order:

    * if all higher-priority volumes plus m_k fit into the partition
      volume V simultaneously, the task is never delayed: R = C_k;
    * if the higher-or-equal-priority subset is pairwise sequential on V
      (no two of those jobs can ever overlap), the schedule of that
      subset is a serialized uniprocessor schedule and the exact
      response-time analysis applies: R = C_k + sum ceil(R/T_j) C_j;
    * otherwise the task is delayed only while higher-priority jobs hold
      at least V - m_k + 1 processors, so

          R = C_k + floor(sum_hp min(m_j, V-m_k+1) * W_j(R) / (V-m_k+1))

      where W_j bounds task j's execution time inside any window of
      length R that starts at a release of task k: ceil(R/T_j) * C_j
      when T_j divides T_k (the window start is then also a release
      point of j, so no job of j carries in), and otherwise the
      carry-in form with completion jitter J_j = R_j - C_j,
      floor((R+J_j)/T_j) * C_j + min(C_j, (R+J_j) mod T_j).

    Accept iff every R_k <= D_k.  The bound stays deliberately
    conservative in the parallel branch; a plain ceil(R/T_j) count there
    undercounts carry-in jobs and is falsified by simulation.  Growing V
    can flip the second branch into the third and is therefore not
    monotone across that boundary (the exact serialized test is simply
    stronger than the parallel-case bound).
    """
    if preemption is not Preemption.PREEMPTIVE:
        raise NonPreemptiveUnsupported(
            "the baseline gang bound is only sound for preemptive FP"
        )
    _check_order(taskset, order)
    for t in taskset:
        if t.volume > partition_volume:
            raise VolumeExceedsPartition(
                f"task {t.id} volume {t.volume} exceeds partition volume {partition_volume}"
            )
    responses: dict[int, int] = {}
    for rank, idx in enumerate(order):
        task = taskset[idx]
        hp = [taskset[j] for j in order[:rank]]
        gap = partition_volume - task.volume

        if sum(h.volume for h in hp) <= gap:
            responses[task.id] = task.wcet
            continue

        if pairwise_sequential([task, *hp], partition_volume):
            r = task.wcet
            while True:
                nxt = task.wcet + sum(-(-r // h.period) * h.wcet for h in hp)
                if nxt > task.deadline:
                    return SchedVerdict(False, responses, f"deadline:{task.id}")
                if nxt == r:
                    break
                r = nxt
            responses[task.id] = r
            continue

        threshold = gap + 1

        def window_work(h, length: int) -> int:
            if task.period % h.period == 0:
                return -(-length // h.period) * h.wcet
            jitter = responses[h.id] - h.wcet
            jobs = (length + jitter) // h.period
            return jobs * h.wcet + min(h.wcet, length + jitter - jobs * h.period)

        r = task.wcet
        while True:
            workload = sum(
                min(h.volume, threshold) * window_work(h, r) for h in hp
            )
            nxt = task.wcet + workload // threshold
            if nxt > task.deadline:
                return SchedVerdict(False, responses, f"deadline:{task.id}")
            if nxt == r:
                break
            r = nxt
        responses[task.id] = r
    return SchedVerdict(True, responses)


REJECT_HANDLE = GangTestHandle(
    name="reject",
    applicable=frozenset(),
    test=lambda taskset, volume, order: SchedVerdict(False, None, "no-sound-gang-test"),
)

BASELINE_HANDLE = GangTestHandle(
    name="baseline-gang-rta",
    applicable=frozenset({GANG_FP_P}),
    test=lambda taskset, volume, order: baseline_gang_rta_fp(
        taskset, volume, order, Preemption.PREEMPTIVE
    ),
)


def resolve_gang_test(
    scheduler_kind: SchedulerKind,
    registry: dict[str, GangTestHandle] | None = None,
    name: str | None = None,
) -> GangTestHandle:
    """Pick the gang test for a scheduler kind.

    Preference order: the named registered test, any registered test
    applicable to the kind (registration order), the in-house baseline
    for preemptive FP, and finally an always-reject handle for kinds with
    no sound default (non-preemptive gang, gang EDF).
    """
    if scheduler_kind.scope is not Scope.GANG:
        raise AnalysisError("gang tests only apply to gang-scope scheduler kinds")
    registry = registry or {}
    if name is not None:
        handle = registry.get(name)
        if handle is None:
            raise AnalysisError(f"no registered gang test named {name!r}")
        return handle
    for handle in registry.values():
        if scheduler_kind in handle.applicable:
            return handle
    if scheduler_kind == GANG_FP_P:
        return BASELINE_HANDLE
    return REJECT_HANDLE
