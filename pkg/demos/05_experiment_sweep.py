#!/usr/bin/env python3
# A scaled-down schedulability-ratio study: sweep normalized utilization
# for two platform sizes and three task-width regimes, then compare the
# partitioner variants.  Writes per-cell and averaged CSVs next to this
# script; render them with the ratioplots package, e.g.
#
#   python -m ratioplots --csv demos/out/grid.avg.csv \
#       --group-by volume_level --out-dir demos/out
#
# A full-size run is one flag away: gangsched grid --paper-scale ...

from pathlib import Path

from gangsched import UNI_EDF_P, UNI_FP_P, GANG_FP_P
from gangsched.experiments import ExperimentGrid, run_case_study, run_grid
from gangsched.partition import PartitionerConfig

out_dir = Path(__file__).parent / "out"
out_dir.mkdir(exist_ok=True)

grid = ExperimentGrid(
    sets_per_cell=25,  # desk scale; the harness default is 100
    seed=1,
    tests=(
        ("SP-U(FP-P)", PartitionerConfig("sp-u", UNI_FP_P)),
        ("SP-U(EDF)", PartitionerConfig("sp-u", UNI_EDF_P)),
        ("SP-G(FP-P)", PartitionerConfig("sp-g", GANG_FP_P)),
        ("SP-B", PartitionerConfig("sp-b")),
    ),
)
rows = run_grid(grid, out_dir / "grid.csv")
print(f"grid: {len(rows)} rows -> {out_dir / 'grid.csv'} (+ grid.avg.csv)")

high = [r for r in rows if r["volume_level"] == "high" and r["M"] == 8 and r["n"] == 8]
print("\nhigh-volume cells on 8 processors (ratio by test):")
for util in ("0.2", "0.5", "0.8"):
    cells = {r["test"]: r["ratio"] for r in high if r["norm_util"] == util}
    print(f"  U/M={util}: {cells}")

for card in ("8tpu", "16tpu"):
    rows = run_case_study(card, out_dir / f"case_{card}.csv", seed=1, sets_per_util=25)
    low = [r for r in rows if r["norm_util"] == "0.1"]
    print(f"\n{card} accelerator card at U/M=0.1: "
          + ", ".join(f"{r['test']}={r['ratio']}" for r in low))
