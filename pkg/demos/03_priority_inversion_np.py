#!/usr/bin/env python3
# Non-preemptive global gang scheduling suffers a nasty inversion: while
# a wide job waits for enough free processors, freshly released narrow
# jobs of lower priority keep slipping in front of it.  The trace below
# shows a two-processor job held back until tick 5 on a three-processor
# platform, even though only one small job was running when it arrived.

from gangsched import (
    GANG_FP_NP,
    Platform,
    ReleasePattern,
    TaskSet,
    simulate,
    validate_task,
)
from gangsched.sim import format_trace

wcets = {1: 2, 2: 3, 3: 2, 4: 4, 5: 1, 6: 2, 7: 3}
tasks = TaskSet(
    validate_task(tid, wcets[tid], 50, 50, 2 if tid == 1 else 1)
    for tid in sorted(wcets)
)

# Task 1 (the wide one, highest priority) arrives at tick 1, just after
# three narrow tasks grabbed all processors; two more narrow tasks land
# while it waits and are allowed to start because they fit.
releases = {2: 0, 3: 0, 4: 0, 1: 1, 7: 2, 6: 3}
trace = simulate(
    tasks, GANG_FP_NP,
    ReleasePattern.explicit(releases, 12),
    platform=Platform(3),
    record_occupancy=True,
)

print("tick,kind,task,partition,processors")
print(format_trace(trace), end="")

start = trace.task_events(1, "start")[0][0]
print(f"\nthe two-processor task was released at 1 and started at {start}")
print("occupancy while it waited:")
for tick in range(1, start):
    entries = trace.occupancy_at(tick).get(0, set())
    used = sum(p for _, p in entries)
    print(f"  tick {tick}: {sorted(entries)} ({used}/3 busy)")
# Splitting the platform into a two-processor and a one-processor
# partition caps that inversion at one small job per partition.
