import json
import random

import pytest

from gangsched.model import (
    DeadlineExceedsPeriod,
    NonPositiveField,
    Partition,
    PartitionPlan,
    Platform,
    Policy,
    Preemption,
    SchedulerKind,
    Scope,
    TaskModelError,
    TaskSet,
    UNI_FP_P,
    WcetExceedsDeadline,
    dm_priority_order,
    hyperperiod,
    validate_task,
)
from gangsched.taskset_io import (
    ParseError,
    load_taskset,
    plan_to_dict,
    save_taskset,
    taskset_from_dict,
)


def test_validate_task_accepts_legal_tuples():
    t1 = validate_task(1, 2, 5, 5, 1)
    assert (t1.wcet, t1.period, t1.deadline, t1.volume) == (2, 5, 5, 1)
    t2 = validate_task(2, 3, 6, 6, 2)
    assert t2.volume == 2


def test_validate_task_names_the_violated_invariant():
    with pytest.raises(WcetExceedsDeadline):
        validate_task(0, 4, 3, 3, 1)
    with pytest.raises(DeadlineExceedsPeriod):
        validate_task(0, 1, 3, 4, 1)
    with pytest.raises(NonPositiveField):
        validate_task(0, 0, 3, 3, 1)
    with pytest.raises(NonPositiveField):
        validate_task(0, 1, 3, 3, 0)
    with pytest.raises(NonPositiveField):
        validate_task(0, 1, 0, 0, 1)


def test_task_utilizations_are_exact_fractions():
    t = validate_task(0, 2, 6, 6, 3)
    assert t.seq_utilization * 3 == t.utilization
    assert float(t.seq_utilization) == pytest.approx(1 / 3)
    assert 0 < t.seq_utilization <= 1


def test_taskset_rejects_duplicate_ids():
    with pytest.raises(TaskModelError):
        TaskSet([validate_task(1, 1, 2, 2, 1), validate_task(1, 1, 3, 3, 1)])


def test_taskset_aggregates():
    ts = TaskSet([
        validate_task(0, 1, 4, 4, 2),
        validate_task(1, 1, 2, 2, 1),
    ])
    assert ts.max_volume == 2
    assert ts.min_volume == 1
    assert float(ts.total_utilization) == pytest.approx(1.0)
    assert ts.implicit_deadlines
    empty = TaskSet([])
    assert empty.max_volume == 0 and empty.min_volume == 0


def test_dm_priority_order_examples():
    def mk(deadlines, ids=None):
        ids = ids or list(range(len(deadlines)))
        return TaskSet(
            validate_task(i, 1, d, d, 1) for i, d in zip(ids, deadlines)
        )

    assert dm_priority_order(mk([5, 6, 7])) == (0, 1, 2)
    assert dm_priority_order(mk([7, 5, 6])) == (1, 2, 0)
    assert dm_priority_order(mk([6, 6], ids=[0, 1])) == (0, 1)


def test_dm_priority_order_is_deterministic_permutation():
    rng = random.Random(1)
    for _ in range(200):
        n = rng.randint(1, 8)
        ts = TaskSet(
            validate_task(i, 1, rng.randint(2, 9), rng.randint(1, 2), 1)
            for i in range(n)
        )
        order = dm_priority_order(ts)
        assert sorted(order) == list(range(n))
        assert order == dm_priority_order(ts)
        deadlines = [ts[i].deadline for i in order]
        assert deadlines == sorted(deadlines)


def test_hyperperiod_examples():
    def mk(periods):
        return TaskSet(validate_task(i, 1, p, p, 1) for i, p in enumerate(periods))

    assert hyperperiod(mk([5, 6, 7])) == 210
    assert hyperperiod(mk([4, 4])) == 4
    assert hyperperiod(mk([9999991, 9999989])) is None


def test_scheduler_kind_rejects_nonpreemptive_edf():
    with pytest.raises(TaskModelError):
        SchedulerKind(Policy.EDF, Preemption.NON_PREEMPTIVE, Scope.UNIPROCESSOR)


def test_partition_plan_invariants():
    plan = PartitionPlan(
        (Partition(0, 2, (2, 3)), Partition(1, 1, (1,))), 0, UNI_FP_P
    )
    assert plan.processors == 3
    assert plan.member_ids() == {1, 2, 3}
    assert plan.partition_of(3).id == 0
    with pytest.raises(TaskModelError):
        PartitionPlan((Partition(0, 1, (1,)), Partition(1, 1, (1,))), 0, UNI_FP_P)


def test_taskset_file_roundtrip(tmp_path):
    ts = TaskSet([validate_task(1, 2, 5, 5, 1), validate_task(2, 3, 6, 6, 2)])
    path = tmp_path / "set.json"
    save_taskset(path, Platform(3), ts)
    platform, loaded = load_taskset(path)
    assert platform.processors == 3
    assert loaded.tasks == ts.tasks
    doc = json.loads(path.read_text())
    assert set(doc) == {"platform", "tasks"}
    assert set(doc["tasks"][0]) == {"id", "wcet", "period", "deadline", "volume"}


@pytest.mark.parametrize("doc", [
    {"tasks": []},
    {"platform": {"processors": 2}},
    {"platform": {"processors": "two"}, "tasks": []},
    {"platform": {"processors": 2}, "tasks": [{"id": 0, "wcet": 1}]},
    {"platform": {"processors": 2},
     "tasks": [{"id": 0, "wcet": 5, "period": 3, "deadline": 3, "volume": 1}]},
])
def test_taskset_parse_errors(doc):
    with pytest.raises(ParseError):
        taskset_from_dict(doc)


def test_plan_serialization_shape():
    plan = PartitionPlan((Partition(0, 2, (7, 9)),), 1, UNI_FP_P)
    doc = plan_to_dict(plan)
    assert doc == {"partitions": [{"volume": 2, "members": [7, 9]}], "unassigned": 1}
