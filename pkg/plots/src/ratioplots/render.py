"""Schedulability-ratio line charts from experiment harness CSVs.

The input follows the harness layout
(``scenario,M,n,volume_level,norm_util,test,schedulable,total,ratio``);
one chart is produced per distinct value of the group-by column, with
one line per test, x = normalized utilization, and y = schedulability
ratio in percent.  Rows sharing (group, utilization, test), e.g. the
per-(M, n) cells of the synthetic sweep, are pooled by their accept
counts before plotting.
"""

from __future__ import annotations

import argparse
import csv
from dataclasses import dataclass, field
from pathlib import Path

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt

REQUIRED_COLUMNS = ("norm_util", "test", "schedulable", "total", "ratio")

# Stable styling: markers and colors are assigned by sorted test name so
# a legend never reshuffles between runs.
_MARKERS = ("o", "s", "^", "D", "v", "P", "X", "*")
_COLORS = ("C0", "C1", "C2", "C3", "C4", "C5", "C6", "C7")


class MissingColumn(ValueError):
    pass


class EmptyCsv(ValueError):
    pass


@dataclass(frozen=True)
class PlotSpec:
    csv_path: Path
    group_by: str = "volume_level"
    out_dir: Path = field(default_factory=lambda: Path("."))


def load_rows(csv_path: str | Path, group_by: str) -> list[dict]:
    with open(csv_path, newline="") as fh:
        reader = csv.DictReader(fh)
        header = reader.fieldnames or []
        for column in (*REQUIRED_COLUMNS, group_by):
            if column not in header:
                raise MissingColumn(f"{csv_path}: column {column!r} not in header {header}")
        rows = list(reader)
    if not rows:
        raise EmptyCsv(f"{csv_path}: no data rows")
    return rows


def _pool(rows: list[dict], group_by: str):
    """(group value -> test -> [(utilization, ratio %)]) with counts pooled."""
    counts: dict[tuple, list[int]] = {}
    for row in rows:
        key = (row[group_by], row["test"], float(row["norm_util"]))
        acc = counts.setdefault(key, [0, 0])
        acc[0] += int(row["schedulable"])
        acc[1] += int(row["total"])
    grouped: dict[str, dict[str, list[tuple[float, float]]]] = {}
    for (group, test, util), (sched, total) in sorted(counts.items()):
        grouped.setdefault(group, {}).setdefault(test, []).append(
            (util, 100.0 * sched / total)
        )
    return grouped


def build_figure(group_by: str, group_value: str, series: dict[str, list[tuple[float, float]]]):
    """One chart: a line per test over utilization, ratio on 0..100%."""
    fig, ax = plt.subplots(figsize=(6.4, 4.2))
    for k, test in enumerate(sorted(series)):
        points = sorted(series[test])
        ax.plot(
            [u for u, _ in points],
            [r for _, r in points],
            label=test,
            marker=_MARKERS[k % len(_MARKERS)],
            color=_COLORS[k % len(_COLORS)],
        )
    ax.set_xlabel("Normalized utilization")
    ax.set_ylabel("Schedulability ratio (%)")
    ax.set_ylim(0, 100)
    ax.set_title(f"{group_by} = {group_value}")
    ax.grid(True, alpha=0.3)
    ax.legend()
    fig.tight_layout()
    return fig


def render(spec: PlotSpec) -> list[Path]:
    """Write one PNG per group value; returns the written paths."""
    rows = load_rows(spec.csv_path, spec.group_by)
    grouped = _pool(rows, spec.group_by)
    out_dir = Path(spec.out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    written = []
    for group_value in sorted(grouped):
        fig = build_figure(spec.group_by, group_value, grouped[group_value])
        path = out_dir / f"{spec.group_by}.{group_value}.png"
        fig.savefig(path, dpi=110)
        plt.close(fig)
        written.append(path)
    return written


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(
        prog="ratioplots",
        description="Render schedulability-ratio charts from a harness CSV.",
    )
    parser.add_argument("--csv", required=True)
    parser.add_argument("--group-by", default="volume_level",
                        help="column to split charts on (e.g. volume_level, scenario)")
    parser.add_argument("--out-dir", default=".")
    args = parser.parse_args(argv)
    try:
        written = render(PlotSpec(Path(args.csv), args.group_by, Path(args.out_dir)))
    except (MissingColumn, EmptyCsv, OSError) as exc:
        print(f"error: {exc}")
        return 2
    for path in written:
        print(f"wrote {path}")
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
