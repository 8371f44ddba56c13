"""Discrete-time execution oracle for partitioned and global gang schedules.

Time is integer ticks; jobs release periodically at offset + k*T, demand C
ticks on exactly m processors, and must finish within D ticks.  The
simulator is event-driven (state changes only at releases and
completions), deterministic, and records job lifecycle events plus
optional per-interval processor occupancy.

Scheduler semantics per decision instant:

* uniprocessor FP-P: the highest-priority pending job runs, one job at a
  time per partition;
* uniprocessor FP-NP: a started job runs to completion, otherwise the
  highest-priority pending job starts;
* uniprocessor EDF-P: earliest absolute deadline runs, ties by task id;
* gang FP-P: pending jobs are scanned in priority order, each allocated
  its m processors iff that many are free after higher-priority
  allocations;
* gang FP-NP: running jobs retain their processors, then pending jobs
  start in priority order iff they fit (work-conserving, so small later
  jobs may start ahead of a wide pending job and block it).
"""

from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path
from typing import Sequence

from .model import (
    GangTask,
    Partition,
    PartitionPlan,
    Platform,
    Policy,
    Preemption,
    SchedulerKind,
    Scope,
    TaskSet,
    dm_priority_order,
)

HORIZON_CAP = 10_000_000

_KIND_RANK = {"release": 0, "finish": 1, "deadline-miss": 2, "start": 3}


class SimError(ValueError):
    pass


class HorizonOverflow(SimError):
    pass


class VolumeExceedsPartition(SimError):
    pass


class NoCompletion(SimError):
    pass


@dataclass(frozen=True)
class ReleasePattern:
    """First-release offsets and the simulation horizon.

    In synchronous mode every task releases its first job at tick 0.  In
    explicit mode ``offsets`` maps task id to its first release tick and
    tasks absent from the map never release at all.
    """

    mode: str
    offsets: dict[int, int] | None
    horizon: int

    def __post_init__(self) -> None:
        if self.horizon < 1:
            raise SimError("horizon must be >= 1")
        if self.horizon > HORIZON_CAP:
            raise HorizonOverflow(f"horizon {self.horizon} exceeds cap {HORIZON_CAP}")
        if self.mode not in ("synchronous", "explicit"):
            raise SimError(f"unknown release mode {self.mode!r}")
        if self.mode == "explicit":
            if self.offsets is None:
                raise SimError("explicit mode needs an offsets map")
            if any(o < 0 for o in self.offsets.values()):
                raise SimError("offsets must be >= 0")

    @staticmethod
    def synchronous(horizon: int) -> "ReleasePattern":
        return ReleasePattern("synchronous", None, horizon)

    @staticmethod
    def explicit(offsets: dict[int, int], horizon: int) -> "ReleasePattern":
        return ReleasePattern("explicit", dict(offsets), horizon)


@dataclass(frozen=True)
class SimTrace:
    """Job lifecycle events plus optional occupancy intervals.

    ``events`` holds (tick, kind, task id, partition id, processors)
    tuples sorted by tick; ``occupancy`` holds (start, end, partition id,
    task id, processors) execution intervals when recorded.
    """

    horizon: int
    events: tuple[tuple[int, str, int, int, int], ...]
    occupancy: tuple[tuple[int, int, int, int, int], ...] | None
    first_miss: tuple[int, int] | None  # (task id, tick)

    @property
    def no_miss(self) -> bool:
        return self.first_miss is None

    def occupancy_at(self, tick: int) -> dict[int, set[tuple[int, int]]]:
        """Per-partition set of (task id, processors used) at one tick."""
        if self.occupancy is None:
            raise SimError("trace was recorded without occupancy")
        busy: dict[int, set[tuple[int, int]]] = {}
        for start, end, par, task, procs in self.occupancy:
            if start <= tick < end:
                busy.setdefault(par, set()).add((task, procs))
        return busy

    def task_events(self, task_id: int, kind: str | None = None):
        return [
            e for e in self.events if e[2] == task_id and (kind is None or e[1] == kind)
        ]


def format_trace(trace: SimTrace) -> str:
    """One line per event: tick,kind,task,partition,processors."""
    return "".join(
        f"{tick},{kind},{task},{par},{procs}\n"
        for tick, kind, task, par, procs in trace.events
    )


def write_trace(trace: SimTrace, path: str | Path) -> None:
    Path(path).write_text(format_trace(trace))


class _Job:
    __slots__ = ("task", "release", "deadline", "remaining", "started", "end", "missed")

    def __init__(self, task: GangTask, release: int):
        self.task = task
        self.release = release
        self.deadline = release + task.deadline
        self.remaining = task.wcet
        self.started: int | None = None
        self.end: int | None = None  # fixed completion time once started (NP only)
        self.missed = False


class _PartitionState:
    __slots__ = ("partition", "pending", "running")

    def __init__(self, partition: Partition):
        self.partition = partition
        self.pending: list[_Job] = []  # released, unfinished (NP: not yet started)
        self.running: list[_Job] = []  # current allocation (P) or started jobs (NP)


def _global_plan(taskset: TaskSet, platform: Platform, kind: SchedulerKind) -> PartitionPlan:
    members = tuple(t.id for t in taskset)
    return PartitionPlan(
        (Partition(id=0, volume=platform.processors, members=members),), 0, kind
    )


def simulate(
    taskset: TaskSet,
    scheduler_kind: SchedulerKind,
    release: ReleasePattern,
    *,
    plan: PartitionPlan | None = None,
    platform: Platform | None = None,
    priority_order: Sequence[int] | None = None,
    record_occupancy: bool = False,
    stop_on_idle_from: int | None = None,
) -> SimTrace:
    """Run the schedule and return its trace.

    Pass a partition plan, or a platform for a global (single-partition)
    schedule.  ``priority_order`` lists task indices from highest to
    lowest fixed priority and defaults to deadline-monotonic order; it is
    ignored by EDF.  ``stop_on_idle_from`` ends the run at the first
    instant >= that tick with no pending or running work (busy-period
    probing).
    """
    if plan is None:
        if platform is None:
            raise SimError("need either a partition plan or a platform")
        plan = _global_plan(taskset, platform, scheduler_kind)
    if scheduler_kind.policy is Policy.EDF and scheduler_kind.scope is Scope.GANG:
        raise SimError("gang EDF simulation is not supported")

    preemptive = scheduler_kind.preemption is Preemption.PREEMPTIVE
    gang = scheduler_kind.scope is Scope.GANG

    order = tuple(priority_order) if priority_order is not None else dm_priority_order(taskset)
    rank = {taskset[idx].id: r for r, idx in enumerate(order)}
    if len(rank) != len(taskset):
        raise SimError("priority order must cover every task exactly once")

    states = [_PartitionState(p) for p in plan.partitions]
    part_of: dict[int, _PartitionState] = {}
    for st in states:
        for tid in st.partition.members:
            part_of[tid] = st
    for task in taskset:
        st = part_of.get(task.id)
        if st is None:
            raise SimError(f"task {task.id} is not assigned to any partition")
        if task.volume > st.partition.volume:
            raise VolumeExceedsPartition(
                f"task {task.id} volume {task.volume} exceeds partition volume "
                f"{st.partition.volume}"
            )

    if scheduler_kind.policy is Policy.EDF:
        def job_key(j: _Job):
            return (j.deadline, j.task.id, j.release)
    else:
        def job_key(j: _Job):
            return (rank[j.task.id], j.release, j.task.id)

    horizon = release.horizon
    next_release: dict[int, int | None] = {}
    for task in taskset:
        if release.mode == "synchronous":
            next_release[task.id] = 0
        else:
            off = release.offsets.get(task.id)
            next_release[task.id] = off if off is not None and off < horizon else None

    events: list[tuple[int, str, int, int, int]] = []
    occupancy: list[tuple[int, int, int, int, int]] = []
    all_jobs: list[tuple[_Job, int]] = []  # (job, partition id)

    def emit(tick: int, kind: str, job: _Job, par_id: int) -> None:
        events.append((tick, kind, job.task.id, par_id, job.task.volume))

    def decide(st: _PartitionState, now: int) -> None:
        # Jobs of one task execute in release order, one at a time; a
        # backlogged later job waits for its predecessor even if
        # processors are free.
        par = st.partition
        if preemptive:
            st.pending.sort(key=job_key)
            st.running = []
            free = par.volume
            seen: set[int] = set()
            for job in st.pending:
                if job.task.id in seen:
                    continue
                seen.add(job.task.id)
                if gang:
                    if job.task.volume <= free:
                        st.running.append(job)
                        free -= job.task.volume
                else:
                    st.running = [job]
                    break
            for job in st.running:
                if job.started is None:
                    job.started = now
                    emit(now, "start", job, par.id)
        else:
            free = par.volume - sum(j.task.volume for j in st.running) if gang else (
                par.volume if not st.running else 0
            )
            if st.pending and (free > 0 if gang else free == par.volume):
                st.pending.sort(key=job_key)
                seen = {j.task.id for j in st.running}
                taken = []
                for job in st.pending:
                    if job.task.id in seen:
                        continue
                    seen.add(job.task.id)
                    if gang:
                        if job.task.volume <= free:
                            taken.append(job)
                            free -= job.task.volume
                    else:
                        taken.append(job)
                        break
                for job in taken:
                    st.pending.remove(job)
                    job.started = now
                    job.end = now + job.task.wcet
                    st.running.append(job)
                    emit(now, "start", job, par.id)

    def finish_job(st: _PartitionState, job: _Job, now: int) -> None:
        emit(now, "finish", job, st.partition.id)
        if now > job.deadline and not job.missed:
            job.missed = True
            emit(job.deadline, "deadline-miss", job, st.partition.id)

    t = 0
    while t < horizon:
        for task in taskset:
            nr = next_release[task.id]
            if nr is not None and nr == t:
                st = part_of[task.id]
                job = _Job(task, t)
                st.pending.append(job)
                all_jobs.append((job, st.partition.id))
                emit(t, "release", job, st.partition.id)
                nr += task.period
                next_release[task.id] = nr if nr < horizon else None

        busy_anywhere = any(st.pending or st.running for st in states)
        if stop_on_idle_from is not None and t >= stop_on_idle_from and not busy_anywhere:
            break

        for st in states:
            decide(st, t)

        nxt = horizon
        future = [nr for nr in next_release.values() if nr is not None]
        if future:
            nxt = min(nxt, min(future))
        running_any = False
        for st in states:
            for job in st.running:
                running_any = True
                end = (t + job.remaining) if preemptive else job.end
                if end < nxt:
                    nxt = end
        if not running_any and not future:
            break  # nothing will ever happen again inside the horizon

        if record_occupancy:
            for st in states:
                for job in st.running:
                    occupancy.append((t, nxt, st.partition.id, job.task.id, job.task.volume))

        dt = nxt - t
        if preemptive:
            for st in states:
                for job in st.running:
                    job.remaining -= dt
        t = nxt

        for st in states:
            done = []
            for job in st.running:
                if preemptive:
                    if job.remaining == 0:
                        done.append(job)
                elif job.end == t:
                    done.append(job)
            for job in done:
                st.running.remove(job)
                if preemptive:
                    st.pending.remove(job)
                finish_job(st, job, t)

    # Jobs still unfinished whose deadline falls inside the horizon missed it.
    for job, par_id in all_jobs:
        unfinished = (job.remaining > 0) if preemptive else (job.end is None or job.end > t)
        if unfinished and not job.missed and job.deadline <= horizon:
            job.missed = True
            events.append((job.deadline, "deadline-miss", job.task.id, par_id, job.task.volume))

    events.sort(key=lambda e: (e[0], _KIND_RANK[e[1]], e[2]))
    misses = [(tick, task) for tick, kind, task, _, _ in events if kind == "deadline-miss"]
    first_miss = (misses[0][1], misses[0][0]) if misses else None
    return SimTrace(
        horizon=horizon,
        events=tuple(events),
        occupancy=tuple(occupancy) if record_occupancy else None,
        first_miss=first_miss,
    )


def critical_instant_response(
    taskset: TaskSet, priority_order: Sequence[int], task_index: int
) -> int:
    """Response of the task's first job under synchronous preemptive FP.

    Synchronous release is the worst case for uniprocessor preemptive FP,
    so for a serialized partition this equals the analytical worst-case
    response exactly.  Raises NoCompletion if the job is still unfinished
    at its deadline.
    """
    from .model import UNI_FP_P

    task = taskset[task_index]
    platform = Platform(max(t.volume for t in taskset))
    trace = simulate(
        taskset,
        UNI_FP_P,
        ReleasePattern.synchronous(task.deadline + 1),
        platform=platform,
        priority_order=priority_order,
    )
    for tick, kind, tid, _, _ in trace.events:
        if kind == "finish" and tid == task.id and tick <= task.deadline:
            return tick
    raise NoCompletion(f"task {task.id} unfinished at its deadline {task.deadline}")


def np_worst_response_oracle(
    taskset: TaskSet,
    priority_order: Sequence[int],
    task_index: int,
    horizon: int | None = None,
) -> int:
    """Brute-force worst observed non-preemptive FP response.

    For each candidate blocker among the lower-priority tasks (and no
    blocker at all): release the blocker alone at tick 0, every task of
    higher-or-equal priority at tick 1, and record the task's responses
    over the resulting busy period.  Returns the maximum across blocker
    choices; it lower-bounds the true worst case.  The run ends at the
    first idle instant; overloaded scenarios are cut off after two
    hyperperiods and unfinished jobs stay unobserved.
    """
    import math

    from .model import UNI_FP_NP

    task = taskset[task_index]
    my_rank = list(priority_order).index(task_index)
    hep_ids = [taskset[idx].id for idx in priority_order[: my_rank + 1]]
    blockers: list[int | None] = [None] + [
        taskset[idx].id for idx in priority_order[my_rank + 1:]
    ]
    platform = Platform(max(t.volume for t in taskset))

    worst = 0
    for blocker in blockers:
        offsets = {tid: 1 for tid in hep_ids}
        if blocker is not None:
            offsets[blocker] = 0
        if horizon is None:
            h = 1
            for tid in offsets:
                h = math.lcm(h, taskset.by_id(tid).period)
                if h > 200_000:
                    h = 200_000
                    break
            run_horizon = 2 * h + 2
        else:
            run_horizon = horizon
        trace = simulate(
            taskset,
            UNI_FP_NP,
            ReleasePattern.explicit(offsets, run_horizon),
            platform=platform,
            priority_order=priority_order,
            stop_on_idle_from=1,
        )
        # Jobs of one task run FIFO under FP-NP, so the i-th finish pairs
        # with the i-th release; an unfinished tail is simply unobserved.
        releases = [e[0] for e in trace.task_events(task.id, "release")]
        fins = [e[0] for e in trace.task_events(task.id, "finish")]
        if not fins:
            raise HorizonOverflow(f"no finished job within {run_horizon} ticks")
        for rel, fin in zip(releases, fins):
            worst = max(worst, fin - rel)
    return worst


def first_response(trace: SimTrace, task_id: int) -> int | None:
    """Response of the task's first job in the trace, if it finished."""
    releases = trace.task_events(task_id, "release")
    finishes = trace.task_events(task_id, "finish")
    if not releases or not finishes:
        return None
    return finishes[0][0] - releases[0][0]
