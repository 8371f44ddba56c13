"""Task-set and partition-plan file formats.

A task-set file is a JSON document with two top-level keys::

    {
      "platform": {"processors": 3},
      "tasks": [
        {"id": 1, "wcet": 2, "period": 5, "deadline": 5, "volume": 1},
        ...
      ]
    }

A plan file is a JSON document with ``partitions`` (array of
``{"volume": int, "members": [task ids]}``) plus ``unassigned``.
"""

from __future__ import annotations

import json
from pathlib import Path

from .model import GangTask, Partition, PartitionPlan, Platform, TaskModelError, TaskSet

TASK_FIELDS = ("id", "wcet", "period", "deadline", "volume")


class ParseError(ValueError):
    pass


def _require_int(obj: dict, key: str, where: str) -> int:
    if key not in obj:
        raise ParseError(f"{where}: missing key {key!r}")
    value = obj[key]
    if not isinstance(value, int) or isinstance(value, bool):
        raise ParseError(f"{where}: key {key!r} must be an integer, got {value!r}")
    return value


def taskset_from_dict(doc: dict) -> tuple[Platform, TaskSet]:
    if not isinstance(doc, dict):
        raise ParseError("top-level document must be an object")
    if "platform" not in doc or not isinstance(doc["platform"], dict):
        raise ParseError("missing 'platform' object")
    if "tasks" not in doc or not isinstance(doc["tasks"], list):
        raise ParseError("missing 'tasks' array")
    processors = _require_int(doc["platform"], "processors", "platform")
    tasks = []
    for k, entry in enumerate(doc["tasks"]):
        if not isinstance(entry, dict):
            raise ParseError(f"tasks[{k}] must be an object")
        fields = {name: _require_int(entry, name, f"tasks[{k}]") for name in TASK_FIELDS}
        try:
            tasks.append(GangTask(**fields))
        except TaskModelError as exc:
            raise ParseError(f"tasks[{k}]: {exc}") from exc
    try:
        ts = TaskSet(tasks)
        platform = Platform(processors)
    except TaskModelError as exc:
        raise ParseError(str(exc)) from exc
    return platform, ts


def taskset_to_dict(platform: Platform, taskset: TaskSet) -> dict:
    return {
        "platform": {"processors": platform.processors},
        "tasks": [
            {name: getattr(t, name) for name in TASK_FIELDS} for t in taskset
        ],
    }


def load_taskset(path: str | Path) -> tuple[Platform, TaskSet]:
    try:
        doc = json.loads(Path(path).read_text())
    except (OSError, json.JSONDecodeError) as exc:
        raise ParseError(f"{path}: {exc}") from exc
    return taskset_from_dict(doc)


def save_taskset(path: str | Path, platform: Platform, taskset: TaskSet) -> None:
    Path(path).write_text(json.dumps(taskset_to_dict(platform, taskset), indent=2) + "\n")


def plan_to_dict(plan: PartitionPlan) -> dict:
    return {
        "partitions": [
            {"volume": p.volume, "members": list(p.members)} for p in plan.partitions
        ],
        "unassigned": plan.unassigned,
    }


def plan_from_dict(doc: dict, scheduler_kind) -> PartitionPlan:
    if not isinstance(doc, dict) or "partitions" not in doc:
        raise ParseError("plan document must contain 'partitions'")
    parts = []
    for k, entry in enumerate(doc["partitions"]):
        volume = _require_int(entry, "volume", f"partitions[{k}]")
        members = entry.get("members")
        if not isinstance(members, list) or not all(isinstance(m, int) for m in members):
            raise ParseError(f"partitions[{k}]: 'members' must be a list of task ids")
        parts.append(Partition(id=k, volume=volume, members=tuple(members)))
    unassigned = _require_int(doc, "unassigned", "plan") if "unassigned" in doc else 0
    return PartitionPlan(tuple(parts), unassigned, scheduler_kind)
