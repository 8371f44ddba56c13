"""Schedulability toolkit for sporadic rigid gang tasks on identical
multiprocessors: strict partitioning heuristics, exact uniprocessor
tests, a discrete-time simulation oracle, synthetic workload generation,
and an experiment harness."""

from .model import (
    GANG_EDF_P,
    GANG_FP_NP,
    GANG_FP_P,
    GangTask,
    Partition,
    PartitionPlan,
    Platform,
    Policy,
    Preemption,
    SchedulerKind,
    Scope,
    TaskSet,
    UNI_EDF_P,
    UNI_FP_NP,
    UNI_FP_P,
    dm_priority_order,
    hyperperiod,
    validate_task,
)
from .uniproc import (
    SchedVerdict,
    edf_demand_test,
    edf_utilization_test,
    rta_fp_nonpreemptive,
    rta_fp_preemptive,
)
from .gang import (
    GangTestHandle,
    baseline_gang_rta_fp,
    pairwise_sequential,
    resolve_gang_test,
)
from .partition import (
    BoundCheck,
    BoundReport,
    PartitionerConfig,
    PartitionFailure,
    ffdv,
    packing_weight,
    plain_util_bound,
    sp_b,
    sp_g,
    sp_u,
    split_util_bound,
    weighted_util_bound,
)
from .sim import (
    ReleasePattern,
    SimTrace,
    critical_instant_response,
    np_worst_response_oracle,
    simulate,
    write_trace,
)
from .generate import GenSpec, GenResult, edge_tpu_suite, gen_taskset, gen_utilizations
from .taskset_io import load_taskset, save_taskset

__all__ = [name for name in dir() if not name.startswith("_")]
