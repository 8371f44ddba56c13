#!/usr/bin/env python3
# Strict partitioning in a nutshell: tasks and processors are split into
# disjoint partitions, so tasks in different partitions never interfere.
# The packer groups tasks of similar width; each partition is then
# analyzed with an exact single-resource test.

from gangsched import (
    PartitionFailure,
    ReleasePattern,
    TaskSet,
    UNI_FP_P,
    hyperperiod,
    simulate,
    sp_u,
    validate_task,
)

# Three tasks on three processors: one sequential task and two
# two-processor tasks.  The two wide tasks share a two-processor
# partition; the narrow one gets the remaining processor.
tasks = TaskSet([
    validate_task(1, 2, 5, 5, 1),
    validate_task(2, 3, 6, 6, 2),
    validate_task(3, 2, 7, 7, 2),
])

plan = sp_u(tasks, 3, UNI_FP_P)
print("plan for the friendly set:")
for p in plan.partitions:
    print(f"  partition {p.id}: {p.volume} processor(s), tasks {list(p.members)}")
print(f"  unassigned processors: {plan.unassigned}")

horizon = hyperperiod(tasks)
trace = simulate(tasks, UNI_FP_P, ReleasePattern.synchronous(horizon), plan=plan)
print(f"simulated {horizon} ticks: {'no deadline miss' if trace.no_miss else trace.first_miss}")

# The same idea can backfire when widths differ a lot: the two-processor
# task drags every sequential task into a single serialized partition,
# and the long task no longer fits.
awkward = TaskSet([
    validate_task(1, 1, 3, 3, 1),
    validate_task(2, 1, 4, 4, 2),
    validate_task(3, 3, 5, 5, 1),
])
result = sp_u(awkward, 2, UNI_FP_P)
assert isinstance(result, PartitionFailure)
print(f"\nawkward set on 2 processors: no packing, first unplaceable task {result.task_id}")
