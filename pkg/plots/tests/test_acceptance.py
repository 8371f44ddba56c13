"""Acceptance for the plotting package: structure of rendered charts."""

import shutil
import subprocess
import time

import pytest

from ratioplots import PlotSpec, build_figure, load_rows, render
from ratioplots.render import _pool


def test_criterion_11_grid_csv_renders_structured_charts(tmp_path):
    start = time.monotonic()
    gangsched = shutil.which("gangsched")
    if gangsched is None:
        pytest.skip("primary CLI not installed; structural coverage lives in test_render")
    csv_path = tmp_path / "grid.csv"
    subprocess.run(
        [gangsched, "grid", "--out", str(csv_path), "--seed", "11",
         "--sets-per-cell", "2", "--tests", "SP-U(FP-P),SP-U(EDF)"],
        check=True,
        capture_output=True,
    )

    out_dir = tmp_path / "charts"
    written = render(PlotSpec(csv_path, "volume_level", out_dir))
    assert sorted(p.name for p in written) == [
        "volume_level.high.png", "volume_level.low.png", "volume_level.medium.png",
    ]

    grouped = _pool(load_rows(csv_path, "volume_level"), "volume_level")
    for level in ("low", "medium", "high"):
        fig = build_figure("volume_level", level, grouped[level])
        ax = fig.axes[0]
        assert len(ax.lines) == 2
        labels = [t.get_text() for t in ax.get_legend().get_texts()]
        assert labels == ["SP-U(EDF)", "SP-U(FP-P)"]
        assert ax.get_ylim() == (0.0, 100.0)
        xs = list(ax.lines[0].get_xdata())
        assert min(xs) == 0.1 and max(xs) == 1.0

    elapsed = time.monotonic() - start
    assert elapsed < 10.0
    print(f"[criterion 11] PASS  grid CSV renders one structured chart per volume level  ({elapsed:.1f}s)")
