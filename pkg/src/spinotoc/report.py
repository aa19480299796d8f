"""Result emission: CSV series/heatmaps with a JSON metadata sidecar, and
matplotlib renderings of the same data next to the delimited output.

Floating-point values are written with 12 significant digits; flagged
points (corrected-OTOC denominator underflow) appear as the literal token
`nan`.  Byte-identical output for identical runs is part of the contract,
so nothing here depends on wall time or dict iteration hazards.
"""

from __future__ import annotations

import json
import math
from pathlib import Path

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt

from .scenarios import RunResult


def _fmt(value: float) -> str:
    if isinstance(value, float) and math.isnan(value):
        return "nan"
    return f"{value:.12g}"


def write_series_csv(result: RunResult, path: Path) -> None:
    lines = ["time,value,label"]
    for series in result.series:
        for t, v in zip(series.times, series.values):
            lines.append(f"{_fmt(float(t))},{_fmt(float(v))},{series.label}")
    path.write_text("\n".join(lines) + "\n", encoding="utf-8")


def write_heatmap_csv(result: RunResult, path: Path) -> None:
    hm = result.heatmap
    lines = ["time,site,value"]
    for i, site in enumerate(hm["sites"]):
        for t, v in zip(hm["times"], hm["values"][i]):
            lines.append(f"{_fmt(float(t))},{int(site)},{_fmt(float(v))}")
    path.write_text("\n".join(lines) + "\n", encoding="utf-8")


def write_tables(result: RunResult, outdir: Path) -> list[Path]:
    written = []
    for name, (header, rows) in result.tables.items():
        path = outdir / f"{name}.csv"
        lines = [",".join(header)]
        for row in rows:
            lines.append(
                ",".join(_fmt(c) if isinstance(c, float) else str(c) for c in row)
            )
        path.write_text("\n".join(lines) + "\n", encoding="utf-8")
        written.append(path)
    return written


def write_metadata(result: RunResult, path: Path) -> None:
    path.write_text(json.dumps(result.metadata, indent=2, sort_keys=True) + "\n", encoding="utf-8")


def render_series_figure(result: RunResult, path: Path, title: str) -> None:
    fig, ax = plt.subplots(figsize=(7, 4.5), layout="constrained")
    for series in result.series:
        ax.plot(series.times, series.values, label=series.label, lw=1.4)
    ax.set_xlabel("t")
    ax.set_ylabel("value")
    ax.set_title(title)
    if len(result.series) > 1:
        ax.legend(fontsize=8)
    fig.savefig(path, dpi=150)
    plt.close(fig)


def render_heatmap_figure(result: RunResult, path: Path, title: str) -> None:
    hm = result.heatmap
    fig, ax = plt.subplots(figsize=(7, 4.5), layout="constrained")
    times, sites, values = hm["times"], hm["sites"], hm["values"]
    mesh = ax.pcolormesh(times, sites, values, shading="nearest", cmap="viridis")
    fig.colorbar(mesh, ax=ax, label="F(t)")
    ax.set_xlabel("t")
    ax.set_ylabel("probe site")
    ax.set_yticks(list(sites))
    ax.set_title(title)
    fig.savefig(path, dpi=150)
    plt.close(fig)


def emit(result: RunResult, outdir: str | Path, scenario: str, plots: bool = True) -> dict:
    """Write every artifact for one run into ``outdir``; returns the paths."""
    outdir = Path(outdir)
    outdir.mkdir(parents=True, exist_ok=True)
    paths = {}
    series_csv = outdir / "series.csv"
    write_series_csv(result, series_csv)
    paths["series"] = series_csv
    if result.heatmap is not None:
        heatmap_csv = outdir / "heatmap.csv"
        write_heatmap_csv(result, heatmap_csv)
        paths["heatmap"] = heatmap_csv
    for path in write_tables(result, outdir):
        paths[path.stem] = path
    meta = outdir / "metadata.json"
    write_metadata(result, meta)
    paths["metadata"] = meta
    if plots:
        fig_path = outdir / "series.png"
        render_series_figure(result, fig_path, scenario)
        paths["series_figure"] = fig_path
        if result.heatmap is not None:
            hm_path = outdir / "heatmap.png"
            render_heatmap_figure(result, hm_path, scenario)
            paths["heatmap_figure"] = hm_path
    return paths
