"""Curve and heatmap plots from CSV data plus JSON manifests.

plot_curve draws a concurrence-vs-reset-rate curve with vertical markers at
the critical and optimal rates read from the manifest (when available);
plot_heatmap renders a keyed rectangular grid with a colorbar.  Both return
the axis extents actually set on the figure so callers can verify the 5%
data padding without parsing the image.
"""

from __future__ import annotations

import csv
import json
import os
from dataclasses import dataclass, field
from importlib import resources

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt
import numpy as np

PAD_FRACTION = 0.05


class FigureError(Exception):
    """Base class for plotting failures."""


class MissingColumn(FigureError):
    pass


class EmptyData(FigureError):
    pass


class NonRectangularGrid(FigureError):
    pass


@dataclass(frozen=True)
class PlotSpec:
    """What to plot and where to put it."""

    csv_path: str
    out_path: str
    kind: str  # "curve" | "heatmap"
    manifest_path: str | None = None  # default: CSV basename with .json
    title: str | None = None
    labels: dict = field(default_factory=dict)  # optional x/y/value overrides


def sample_csv_path(name: str) -> str:
    """Path of a shipped sample CSV (e.g. 'xy_reset_curve.csv')."""
    return str(resources.files("spinresetfig") / "data" / name)


def _read_csv(path: str) -> tuple[list[str], np.ndarray]:
    with open(path, newline="") as f:
        rows = list(csv.reader(f))
    if not rows:
        raise EmptyData(f"{path} has no header row")
    header, body = rows[0], rows[1:]
    if not body:
        raise EmptyData(f"{path} has a header but no data rows")
    data = np.array([[float(x) for x in row] for row in body])
    return header, data


def _find_column(header: list[str], prefixes: tuple[str, ...], what: str) -> int:
    for i, name in enumerate(header):
        base = name.split("[", 1)[0].strip().lower()
        if base in prefixes:
            return i
    raise MissingColumn(f"no {what} column among {header!r} (expected one of {prefixes})")


def _manifest_for(spec: PlotSpec) -> dict:
    path = spec.manifest_path or os.path.splitext(spec.csv_path)[0] + ".json"
    if not os.path.exists(path):
        return {}
    with open(path) as f:
        return json.load(f)


def _padded(lo: float, hi: float) -> tuple[float, float]:
    span = hi - lo
    pad = PAD_FRACTION * span if span > 0 else max(PAD_FRACTION * abs(hi), 0.5)
    return lo - pad, hi + pad


def plot_curve(spec: PlotSpec) -> dict:
    """Concurrence-vs-rate curve with r_c / r_m markers from the manifest.

    Returns {"out_path", "xlim", "ylim", "markers"}; the limits equal the
    data extents padded by 5%.
    """
    header, data = _read_csv(spec.csv_path)
    ix = _find_column(header, ("r",), "reset-rate")
    iy = _find_column(header, ("c_r_st", "c_st", "concurrence", "concurrence_l2", "c"), "concurrence")
    r, C = data[:, ix], data[:, iy]
    manifest = _manifest_for(spec)
    results = manifest.get("results", {})
    markers = {k: results[k] for k in ("r_c", "r_m") if results.get(k) is not None}

    fig, ax = plt.subplots(figsize=(5.0, 3.4), constrained_layout=True)
    ax.plot(r, C, "o-", ms=3, lw=1.2, color="tab:blue")
    for name, value, color in (("$r_c$", markers.get("r_c"), "tab:red"), ("$r_m$", markers.get("r_m"), "tab:green")):
        if value is not None:
            ax.axvline(value, ls=":", lw=1.0, color=color)
            ax.text(value, ax.get_ylim()[1], name, color=color, ha="left", va="top")
    xlim = _padded(float(r.min()), float(r.max()))
    ylim = _padded(float(C.min()), float(C.max()))
    ax.set_xlim(*xlim)
    ax.set_ylim(*ylim)
    ax.set_xlabel(spec.labels.get("x", header[ix]))
    ax.set_ylabel(spec.labels.get("y", header[iy]))
    if spec.title:
        ax.set_title(spec.title)
    meta = {"out_path": spec.out_path, "xlim": ax.get_xlim(), "ylim": ax.get_ylim(), "markers": markers}
    fig.savefig(spec.out_path, dpi=150)
    plt.close(fig)
    return meta


def _key_grid(x: np.ndarray, y: np.ndarray, v: np.ndarray):
    """Rebuild the rectangular grid keyed by coordinates, order-independent."""
    xs, ys = np.unique(x), np.unique(y)
    if len(xs) * len(ys) != len(v):
        raise NonRectangularGrid(
            f"{len(v)} samples cannot tile a {len(xs)}x{len(ys)} grid"
        )
    grid = np.full((len(xs), len(ys)), np.nan)
    xi = np.searchsorted(xs, x)
    yi = np.searchsorted(ys, y)
    if len(set(zip(xi.tolist(), yi.tolist()))) != len(v):
        raise NonRectangularGrid("duplicate coordinate pairs in the grid")
    grid[xi, yi] = v
    return xs, ys, grid


def plot_heatmap(spec: PlotSpec) -> dict:
    """Heatmap of value column over two coordinate columns, with colorbar.

    The first two CSV columns are the coordinates and the third the value;
    row order is irrelevant (the grid is keyed by coordinates).
    """
    header, data = _read_csv(spec.csv_path)
    if data.shape[1] < 3:
        raise MissingColumn(f"heatmap needs two coordinate columns and a value column, got {header!r}")
    x, y, v = data[:, 0], data[:, 1], data[:, 2]
    xs, ys, grid = _key_grid(x, y, v)

    fig, ax = plt.subplots(figsize=(5.2, 4.0), constrained_layout=True)
    mesh = ax.pcolormesh(xs, ys, grid.T, shading="nearest", cmap="viridis")
    fig.colorbar(mesh, ax=ax, label=spec.labels.get("value", header[2]))
    ax.set_xlabel(spec.labels.get("x", header[0]))
    ax.set_ylabel(spec.labels.get("y", header[1]))
    if spec.title:
        ax.set_title(spec.title)
    meta = {
        "out_path": spec.out_path,
        "xlim": ax.get_xlim(),
        "ylim": ax.get_ylim(),
        "grid_shape": grid.shape,
        "value_range": (float(np.nanmin(grid)), float(np.nanmax(grid))),
    }
    fig.savefig(spec.out_path, dpi=150)
    plt.close(fig)
    return meta
