#!/usr/bin/env python3
# Closed-form admission: three utilization bounds decide schedulability
# in linear time, no packing run needed.  Every admitted set is
# guaranteed to pack under the serialized EDF variant; the converse
# fails, which is the price of a closed form.

import random
from fractions import Fraction

from gangsched import (
    GenSpec,
    PartitionFailure,
    UNI_EDF_P,
    gen_taskset,
    packing_weight,
    sp_b,
    sp_u,
)

print("piecewise packing weight on [0, 1]:")
for num in (0, 1, 2, 3, 4, 5, 6):
    u = Fraction(num, 6)
    print(f"  W({float(u):.3f}) = {packing_weight(u)} = {float(packing_weight(u)):.4f}")
print("note the single upward jump of 3/10 just above 1/2\n")

rng = random.Random(1)
admitted = packed = 0
agreement = []
for k in range(400):
    spec = GenSpec(8, 12, "low", rng.choice([0.2, 0.3, 0.4, 0.5]), seed=k)
    ts = gen_taskset(spec).taskset
    report = sp_b(ts, 8)
    plan = sp_u(ts, 8, UNI_EDF_P)
    packable = not isinstance(plan, PartitionFailure)
    if report.accepted:
        admitted += 1
        assert packable  # admission is sound
    if packable:
        packed += 1
    agreement.append((report.accepted, packable))

print(f"of 400 light task sets: {admitted} admitted by the bounds, "
      f"{packed} actually packable")
print("every admitted set was packable; "
      f"{packed - admitted} packable sets were missed by the closed form")

example = gen_taskset(GenSpec(8, 12, "low", 0.3, seed=7)).taskset
report = sp_b(example, 8)
print("\none admission report:")
print(f"  weighted bound: lhs={float(report.weighted.lhs):.3f} "
      f"rhs={float(report.weighted.rhs):.3f} holds={report.weighted.holds}")
print(f"  plain bound:    lhs={float(report.plain.lhs):.3f} "
      f"rhs={float(report.plain.rhs):.3f} holds={report.plain.holds}")
print(f"  split bound:    p={report.split.split} holds={report.split.holds}")
print(f"  accepted: {report.accepted}")
