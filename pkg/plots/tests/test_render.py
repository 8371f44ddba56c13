import csv
import hashlib

import pytest

from ratioplots import (
    EmptyCsv,
    MissingColumn,
    PlotSpec,
    build_figure,
    load_rows,
    render,
)
from ratioplots.render import _pool, main

HEADER = ["scenario", "M", "n", "volume_level", "norm_util", "test",
          "schedulable", "total", "ratio"]


def write_grid_csv(path, levels=("low", "medium", "high"),
                   tests=("SP-U(EDF)", "SP-U(FP-P)"), machines=(8, 16)):
    rows = []
    for level in levels:
        for m in machines:
            for k in range(1, 11):
                util = f"{k / 10:.1f}"
                for j, test in enumerate(tests):
                    sched = max(0, 100 - 10 * k - 5 * j)
                    rows.append({
                        "scenario": "synthetic", "M": m, "n": m,
                        "volume_level": level, "norm_util": util, "test": test,
                        "schedulable": sched, "total": 100,
                        "ratio": f"{sched / 100:.4f}",
                    })
    with open(path, "w", newline="") as fh:
        writer = csv.DictWriter(fh, fieldnames=HEADER)
        writer.writeheader()
        writer.writerows(rows)
    return rows


def test_one_chart_per_group_value(tmp_path):
    csv_path = tmp_path / "grid.csv"
    write_grid_csv(csv_path)
    written = render(PlotSpec(csv_path, "volume_level", tmp_path / "out"))
    names = sorted(p.name for p in written)
    assert names == [
        "volume_level.high.png", "volume_level.low.png", "volume_level.medium.png",
    ]
    assert all(p.stat().st_size > 0 for p in written)


def test_case_study_grouping(tmp_path):
    csv_path = tmp_path / "case.csv"
    rows = []
    for card in ("edge-tpu-8tpu", "edge-tpu-16tpu"):
        for k in range(1, 11):
            rows.append({
                "scenario": card, "M": 8, "n": 6, "volume_level": "-",
                "norm_util": f"{k / 10:.1f}", "test": "SP-U(FP-NP)",
                "schedulable": 100 - 9 * k, "total": 100,
                "ratio": f"{(100 - 9 * k) / 100:.4f}",
            })
    with open(csv_path, "w", newline="") as fh:
        writer = csv.DictWriter(fh, fieldnames=HEADER)
        writer.writeheader()
        writer.writerows(rows)
    written = render(PlotSpec(csv_path, "scenario", tmp_path))
    assert sorted(p.name for p in written) == [
        "scenario.edge-tpu-16tpu.png", "scenario.edge-tpu-8tpu.png",
    ]


def test_figure_structure(tmp_path):
    csv_path = tmp_path / "grid.csv"
    write_grid_csv(csv_path, tests=("A", "B", "C"))
    rows = load_rows(csv_path, "volume_level")
    grouped = _pool(rows, "volume_level")
    fig = build_figure("volume_level", "low", grouped["low"])
    ax = fig.axes[0]
    assert len(ax.lines) == 3  # exactly one line per test
    assert [t.get_text() for t in ax.get_legend().get_texts()] == ["A", "B", "C"]
    assert ax.get_ylim() == (0.0, 100.0)
    assert ax.get_xlabel() == "Normalized utilization"
    assert ax.get_ylabel() == "Schedulability ratio (%)"
    xs = list(ax.lines[0].get_xdata())
    assert xs == sorted(xs) and min(xs) == 0.1 and max(xs) == 1.0


def test_rows_pooled_over_machine_counts(tmp_path):
    csv_path = tmp_path / "grid.csv"
    write_grid_csv(csv_path, levels=("low",), tests=("T",), machines=(8, 16))
    rows = load_rows(csv_path, "volume_level")
    grouped = _pool(rows, "volume_level")
    points = grouped["low"]["T"]
    assert len(points) == 10  # one pooled point per utilization step


def test_missing_column(tmp_path):
    path = tmp_path / "bad.csv"
    path.write_text("scenario,M,n,volume_level,norm_util,test,schedulable,total\n")
    with pytest.raises(MissingColumn):
        load_rows(path, "volume_level")


def test_empty_csv(tmp_path):
    path = tmp_path / "empty.csv"
    path.write_text(",".join(HEADER) + "\n")
    with pytest.raises(EmptyCsv):
        load_rows(path, "volume_level")


def test_render_is_byte_stable(tmp_path):
    csv_path = tmp_path / "grid.csv"
    write_grid_csv(csv_path, levels=("low",))
    a = render(PlotSpec(csv_path, "volume_level", tmp_path / "a"))
    b = render(PlotSpec(csv_path, "volume_level", tmp_path / "b"))
    digest = lambda p: hashlib.sha256(p.read_bytes()).hexdigest()
    assert [digest(p) for p in a] == [digest(p) for p in b]


def test_cli(tmp_path, capsys):
    csv_path = tmp_path / "grid.csv"
    write_grid_csv(csv_path)
    code = main(["--csv", str(csv_path), "--group-by", "volume_level",
                 "--out-dir", str(tmp_path / "out")])
    assert code == 0
    assert (tmp_path / "out" / "volume_level.low.png").exists()
    assert main(["--csv", str(tmp_path / "nope.csv"), "--out-dir", str(tmp_path)]) == 2
