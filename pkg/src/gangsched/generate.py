"""Synthetic gang task-set generation and the Edge-TPU benchmark suites.

Task-set utilizations are drawn Dirichlet-flat on the simplex, scaled to
the target sum, and pushed under per-task caps by iterative clip-and-
redistribute (each pass pins at least one value at its cap, so it
terminates).  Periods and volumes are sampled uniformly; WCETs follow as
C = floor(U * T / m), which keeps the realized utilization at or below
the target.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .model import GangTask, TaskSet

VOLUME_LEVELS = ("low", "medium", "high")


class GenerationError(ValueError):
    pass


class InfeasibleTarget(GenerationError):
    pass


class GenerationExhausted(GenerationError):
    pass


def volume_upper(processors: int, level: str) -> int:
    """Largest volume sampled at a level: 0.3M / 0.6M (ceiled) / M-1."""
    if level == "low":
        return math.ceil(0.3 * processors)
    if level == "medium":
        return math.ceil(0.6 * processors)
    if level == "high":
        if processors < 2:
            raise GenerationError("high volume level needs at least 2 processors")
        return processors - 1
    raise GenerationError(f"unknown volume level {level!r}")


@dataclass(frozen=True)
class GenSpec:
    """Parameters of one synthetic task-set draw."""

    processors: int
    n: int
    volume_level: str
    normalized_utilization: float
    seed: int
    period_range: tuple[int, int] = (10, 1000)

    def __post_init__(self) -> None:
        if self.volume_level not in VOLUME_LEVELS:
            raise GenerationError(f"unknown volume level {self.volume_level!r}")
        if not 0 < self.normalized_utilization <= 1:
            raise GenerationError("normalized utilization must lie in (0, 1]")
        if self.n < 1 or self.processors < 1:
            raise GenerationError("need n >= 1 and processors >= 1")


def _rng(seed) -> np.random.Generator:
    """Accept an int, a SeedSequence, or an existing Generator."""
    if isinstance(seed, np.random.Generator):
        return seed
    return np.random.default_rng(seed)


def gen_utilizations(n: int, total: float, caps, seed) -> list[float]:
    """n positive utilizations summing to ``total``, each at most its cap.

    Deterministic in the seed; the sum matches the target to 1e-9
    relative tolerance.
    """
    caps = [float(c) for c in caps]
    if len(caps) != n:
        raise GenerationError("need one cap per task")
    if total <= 0:
        raise GenerationError("target utilization must be positive")
    if sum(caps) < total - 1e-12:
        raise InfeasibleTarget(f"caps sum {sum(caps)} below target {total}")
    rng = _rng(seed)
    caps_arr = np.asarray(caps)
    if abs(sum(caps) - total) <= 1e-12:
        return list(caps_arr)
    for _ in range(100):
        x = rng.dirichlet(np.ones(n)) * total
        if (x > 0).all():
            break
    else:
        raise GenerationExhausted("could not draw positive utilizations")
    for _ in range(n + 1):
        over = x > caps_arr
        if not over.any():
            break
        excess = float((x - caps_arr)[over].sum())
        x = np.where(over, caps_arr, x)
        headroom = np.where(over, 0.0, caps_arr - x)
        room = float(headroom.sum())
        if room <= 0.0:
            break  # everything pinned; remaining excess is float dust
        x = x + excess * headroom / room
    # Final clip of float dust above the caps.
    x = np.minimum(x, caps_arr)
    assert abs(float(x.sum()) - total) <= 1e-9 * max(1.0, total)
    return [float(v) for v in x]


@dataclass(frozen=True)
class GenResult:
    taskset: TaskSet
    target_utilization: float
    realized_utilization: Fraction

    @property
    def utilization_deviation(self) -> float:
        return self.target_utilization - float(self.realized_utilization)


def _materialize(task_id: int, util: float, t_lo: int, t_hi: int, vol_hi: int,
                 rng: np.random.Generator):
    """Draw (T, m, C) for one utilization; None when C lands at zero."""
    vol_lo = max(1, math.ceil(util - 1e-12))
    if vol_lo > vol_hi:
        raise GenerationError(
            f"utilization {util} needs volume {vol_lo} above the level cap {vol_hi}"
        )
    period = int(rng.integers(t_lo, t_hi + 1))
    volume = int(rng.integers(vol_lo, vol_hi + 1))
    wcet = int(util * period / volume)
    if wcet < 1:
        return None
    return GangTask(id=task_id, wcet=wcet, period=period, deadline=period, volume=volume)


def gen_taskset(spec: GenSpec) -> GenResult:
    """Draw one task set; deadlines are implicit (D = T).

    A draw where C floors to zero resamples the (period, volume) pair,
    and as a last resort redraws the whole utilization vector so the
    exact target sum is preserved.
    """
    rng = _rng(spec.seed)
    total = spec.normalized_utilization * spec.processors
    vol_hi = volume_upper(spec.processors, spec.volume_level)
    t_lo, t_hi = spec.period_range
    for _attempt in range(100):
        utils = gen_utilizations(spec.n, total, [vol_hi] * spec.n, rng)
        tasks = []
        for i, u in enumerate(utils):
            task = _materialize(i, u, t_lo, t_hi, vol_hi, rng)
            retry = 0
            while task is None and retry < 200:
                task = _materialize(i, u, t_lo, t_hi, vol_hi, rng)
                retry += 1
            if task is None:
                tasks = None
                break
            tasks.append(task)
        if tasks is not None:
            ts = TaskSet(tasks)
            return GenResult(
                taskset=ts,
                target_utilization=total,
                realized_utilization=ts.total_utilization,
            )
    raise GenerationExhausted(
        f"no valid task set after 100 utilization redraws (spec={spec})"
    )


# Measured DNN inference workloads: (model, volume, worst observed
# execution time in ms) on Edge TPU pipelines of the stated width.
EDGE_TPU_BENCHMARKS = (
    ("Inc-1", 1, 6),
    ("Inc-2", 2, 10),
    ("Inc-3", 4, 15),
    ("Inc-4", 6, 31),
    ("Res-1", 4, 24),
    ("Res-2", 7, 44),
    ("Res-3", 9, 55),
)

EDGE_TPU_CARDS = {
    "8tpu": (8, 6),  # (processors, number of benchmark tasks)
    "16tpu": (16, 7),
}


def edge_tpu_suite(card: str, normalized_utilization: float, seed) -> GenResult:
    """One case-study task set for an accelerator card.

    Execution times and volumes are the fixed benchmark numbers; periods
    follow from drawn utilizations as T = ceil(C * m / U), which keeps
    the realized utilization at or below the drawn one.
    """
    if card not in EDGE_TPU_CARDS:
        raise GenerationError(f"unknown card {card!r}; use one of {sorted(EDGE_TPU_CARDS)}")
    processors, count = EDGE_TPU_CARDS[card]
    bench = EDGE_TPU_BENCHMARKS[:count]
    total = normalized_utilization * processors
    caps = [m for _, m, _ in bench]
    utils = gen_utilizations(count, total, caps, _rng(seed))
    tasks = []
    for i, ((_, volume, wcet), u) in enumerate(zip(bench, utils)):
        period = math.ceil(wcet * volume / u)
        tasks.append(
            GangTask(id=i, wcet=wcet, period=period, deadline=period, volume=volume)
        )
    ts = TaskSet(tasks)
    return GenResult(ts, total, ts.total_utilization)
